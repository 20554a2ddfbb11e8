#include "wspline/eval.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "wspline/geodesic.hpp"
#include "wspline/ot.hpp"
#include "wspline/parallel.hpp"
#include "wspline/subdivision.hpp"

namespace wspline {

DiscreteMeasure predict_held_out(const TimedSequence& seq, int held,
                                 const RefinementConfig& cfg) {
    const std::size_t len = seq.size();
    if (len < 3) fail(ErrorCode::TooFewClouds, "hold-out needs at least three clouds");
    if (held < 1 || static_cast<std::size_t>(held) + 1 >= len)
        fail(ErrorCode::BoundaryHoldout,
             "held-out step must be interior (1.." + std::to_string(len - 2) + ")");

    std::vector<double> times;
    std::vector<DiscreteMeasure> measures;
    times.reserve(len - 1);
    measures.reserve(len - 1);
    for (std::size_t s = 0; s < len; ++s) {
        if (s == static_cast<std::size_t>(held)) continue;
        times.push_back(seq.time(s));
        measures.push_back(seq.measure(s));
    }

    const RefinedSequence refined = wlr_refine(TimedSequence(times, std::move(measures)), cfg);
    const double t0 = seq.time(0), tT = seq.time(len - 1);
    const double u = (seq.time(static_cast<std::size_t>(held)) - t0) / (tT - t0);
    return geodesic_interpolant(refined.measures, u, cfg);
}

double metric_w1(const DiscreteMeasure& predicted, const DiscreteMeasure& actual) {
    return wasserstein_distance(predicted, actual, 1.0);
}

namespace {

bool is_uniform(const DiscreteMeasure& m) {
    const double target = 1.0 / static_cast<double>(m.size());
    for (double w : m.weights())
        if (std::abs(w - target) > 1e-9 * target) return false;
    return true;
}

} // namespace

std::optional<double> metric_mse(const DiscreteMeasure& predicted,
                                 const DiscreteMeasure& actual) {
    if (predicted.size() != actual.size()) return std::nullopt;
    if (!is_uniform(predicted) || !is_uniform(actual)) return std::nullopt;

    const std::size_t n = predicted.size();
    const CostMatrix cost = cost_matrix(predicted, actual, 2.0);
    const Coupling c = solve_kantorovich(predicted, actual, cost);

    // uniform equal marginals make every vertex plan a scaled permutation
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_mass = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (c.at(i, j) > best_mass) {
                best_mass = c.at(i, j);
                best = j;
            }
        }
        total += cost.at(i, best);
    }
    return total / static_cast<double>(n);
}

std::pair<double, std::optional<double>> mean_metrics(const TimedSequence& seq,
                                                      const RefinementConfig& cfg) {
    const std::size_t len = seq.size();
    if (len < 3) fail(ErrorCode::TooFewClouds, "mean metrics need at least three clouds");

    double w1_sum = 0.0;
    double mse_sum = 0.0;
    bool mse_defined = true;
    const std::size_t interior = len - 2;
    for (std::size_t held = 1; held + 1 < len; ++held) {
        const DiscreteMeasure pred = predict_held_out(seq, static_cast<int>(held), cfg);
        const DiscreteMeasure& truth = seq.measure(held);
        w1_sum += metric_w1(pred, truth);
        if (mse_defined) {
            if (const auto mse = metric_mse(pred, truth))
                mse_sum += *mse;
            else
                mse_defined = false;
        }
    }
    std::optional<double> mean_mse;
    if (mse_defined) mean_mse = mse_sum / static_cast<double>(interior);
    return {w1_sum / static_cast<double>(interior), mean_mse};
}

EvalReport evaluate(const TimedSequence& seq, int held, const RefinementConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    EvalReport report;
    report.held_out_step = held;

    const DiscreteMeasure pred = predict_held_out(seq, held, cfg);
    const DiscreteMeasure& truth = seq.measure(static_cast<std::size_t>(held));
    report.w1 = metric_w1(pred, truth);
    report.mse = metric_mse(pred, truth);
    const auto [mean_w1, mean_mse] = mean_metrics(seq, cfg);
    report.mean_w1 = mean_w1;
    report.mean_mse = mean_mse;

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<ProbeRow> runtime_scaling_probe(const TimedSequence& seq, RefinementConfig base,
                                            std::span<const int> levels,
                                            std::span<const int> degrees) {
    // pinned to one worker for stable numbers
    const int saved_jobs = max_jobs();
    set_max_jobs(1);
    std::vector<ProbeRow> rows;
    for (const int degree : degrees) {
        for (const int level : levels) {
            RefinementConfig cfg = base;
            cfg.degree = degree;
            cfg.level = level;
            double best = std::numeric_limits<double>::infinity();
            for (int rep = 0; rep < 2; ++rep) {
                const auto start = std::chrono::steady_clock::now();
                const RefinedSequence refined = wlr_refine(seq, cfg);
                (void)refined;
                best = std::min(best, std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - start)
                                          .count());
            }
            rows.push_back({level, degree, best});
        }
    }
    set_max_jobs(saved_jobs);
    return rows;
}

} // namespace wspline
