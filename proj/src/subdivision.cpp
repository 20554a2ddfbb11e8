#include "wspline/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "wspline/parallel.hpp"

namespace wspline {

namespace {

void rethrow_first(std::vector<std::exception_ptr>& errors) {
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

std::vector<DiscreteMeasure> average_pass_serial(std::span<const DiscreteMeasure> in,
                                                 double alpha, const RefinementConfig& cfg) {
    std::vector<DiscreteMeasure> out(in.size() - 1);
    for (std::size_t j = 0; j + 1 < in.size(); ++j)
        out[j] = ot_average(in[j], in[j + 1], alpha, cfg);
    return out;
}

std::vector<DiscreteMeasure> average_pass(std::span<const DiscreteMeasure> in, double alpha,
                                          const RefinementConfig& cfg) {
    const int jobs = max_jobs();
    if (jobs <= 1 || in.size() < 3) return average_pass_serial(in, alpha, cfg);

    const std::int64_t count = static_cast<std::int64_t>(in.size()) - 1;
    std::vector<DiscreteMeasure> out(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
    for (std::int64_t j = 0; j < count; ++j) {
        try {
            out[static_cast<std::size_t>(j)] =
                ot_average(in[static_cast<std::size_t>(j)], in[static_cast<std::size_t>(j) + 1],
                           alpha, cfg);
        } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
    }
    rethrow_first(errors);
    return out;
}

std::vector<std::vector<double>> lane_riesenfeld_linear(
    const std::vector<std::vector<double>>& points, int level, int degree) {
    if (points.size() < 2) fail(ErrorCode::TooFewPoints, "need at least two points");
    if (degree < 1) fail(ErrorCode::ConfigError, "degree must be >= 1");
    if (level < 0) fail(ErrorCode::ConfigError, "level must be >= 0");
    const std::size_t d = points.front().size();
    for (const auto& p : points)
        if (p.size() != d) fail(ErrorCode::DimensionMismatch, "points of mixed dimension");

    std::vector<std::vector<double>> cur = points;
    for (int r = 0; r < level; ++r) {
        std::vector<std::vector<double>> work;
        work.reserve(2 * cur.size() + 2 * static_cast<std::size_t>(degree - 1));
        for (int k = 0; k < degree - 1; ++k) work.push_back(cur.front());
        for (const auto& p : cur) {
            work.push_back(p);
            work.push_back(p);
        }
        for (int k = 0; k < degree - 1; ++k) work.push_back(cur.back());

        for (int m = 0; m < degree; ++m) {
            std::vector<std::vector<double>> next(work.size() - 1);
            for (std::size_t j = 0; j + 1 < work.size(); ++j) {
                std::vector<double> mid(d);
                for (std::size_t k = 0; k < d; ++k)
                    mid[k] = 0.5 * work[j][k] + 0.5 * work[j + 1][k];
                next[j] = std::move(mid);
            }
            work = std::move(next);
        }
        cur = std::move(work);
    }
    return cur;
}

RefinedSequence wlr_refine(const TimedSequence& seq, const RefinementConfig& cfg) {
    cfg.validate();
    if (seq.size() < 2) fail(ErrorCode::TooFewClouds, "refinement needs at least two clouds");

    const int M = cfg.degree;

    std::vector<DiscreteMeasure> cur = seq.measures();
    for (int r = 0; r < cfg.level; ++r) {
        std::vector<DiscreteMeasure> work;
        work.reserve(2 * cur.size() + 2 * static_cast<std::size_t>(M - 1));
        // doubling, then extend both ends so each end value appears M times;
        // the M averaging passes then leave the endpoints untouched
        for (int k = 0; k < M - 1; ++k) work.push_back(cur.front());
        for (const auto& mu : cur) {
            work.push_back(mu);
            work.push_back(mu);
        }
        for (int k = 0; k < M - 1; ++k) work.push_back(cur.back());

        for (int m = 0; m < M; ++m) work = average_pass(work, 0.5, cfg);
        cur = std::move(work);
    }

    RefinedSequence out;
    out.measures = std::move(cur);
    out.meta = {Scheme::WLR, M, cfg.level, seq.size()};
    return out;
}

RefinedSequence four_point_refine(const TimedSequence& seq, int level, double w,
                                  const RefinementConfig& cfg) {
    cfg.validate();
    if (level < 0) fail(ErrorCode::ConfigError, "level must be >= 0");
    const double w_max = (std::sqrt(5.0) - 1.0) / 8.0;
    if (!(w > 0.0 && w < w_max))
        fail(ErrorCode::ConfigError,
             "tension w must lie in (0, " + std::to_string(w_max) + ")");

    std::vector<DiscreteMeasure> cur = seq.measures();
    for (int r = 0; r < level; ++r) {
        const std::size_t len = cur.size();
        if (len < 4)
            fail(ErrorCode::TooFewClouds,
                 "4-point refinement needs 4 clouds per round (the domain shrinks by one "
                 "cloud per end each round); got " + std::to_string(len));

        // inserted cloud between cur[j] and cur[j+1] for j in [1, len-3];
        // survivors cur[1..len-2] are copied through unchanged
        const std::size_t inserts = len - 3;
        std::vector<DiscreteMeasure> mids(inserts);
        std::vector<std::exception_ptr> errors(inserts);
        const int jobs = max_jobs();
        const std::int64_t icount = static_cast<std::int64_t>(inserts);

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1 && inserts > 1)
        for (std::int64_t jj = 0; jj < icount; ++jj) {
            const std::size_t j = static_cast<std::size_t>(jj) + 1;
            try {
                const DiscreteMeasure left = ot_average(cur[j], cur[j - 1], -2.0 * w, cfg);
                const DiscreteMeasure right = ot_average(cur[j + 1], cur[j + 2], -2.0 * w, cfg);
                mids[static_cast<std::size_t>(jj)] = ot_average(left, right, 0.5, cfg);
            } catch (...) {
                errors[static_cast<std::size_t>(jj)] = std::current_exception();
            }
        }
        rethrow_first(errors);

        std::vector<DiscreteMeasure> next;
        next.reserve(2 * len - 5);
        for (std::size_t j = 1; j + 1 < len; ++j) {
            next.push_back(cur[j]);
            if (j + 2 < len) next.push_back(std::move(mids[j - 1]));
        }
        cur = std::move(next);
    }

    RefinedSequence out;
    out.measures = std::move(cur);
    out.meta = {Scheme::FourPoint, 0, level, seq.size()};
    return out;
}

double delta_sup(std::span<const DiscreteMeasure> seq, double p) {
    if (seq.size() < 2) fail(ErrorCode::TooFewClouds, "delta_sup needs at least two clouds");
    double best = 0.0;
    for (std::size_t j = 0; j + 1 < seq.size(); ++j)
        best = std::max(best, wasserstein_distance(seq[j], seq[j + 1], p));
    return best;
}

std::int64_t expected_output_count(int T, int R, int M) {
    if (T < 1 || R < 0 || M < 1) fail(ErrorCode::ConfigError, "need T >= 1, R >= 0, M >= 1");
    if (R > 62) fail(ErrorCode::ConfigError, "R too large");
    return (std::int64_t{1} << R) * (T + M - 1) + 2 - M;
}

} // namespace wspline
