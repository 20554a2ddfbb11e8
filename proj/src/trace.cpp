#include "wspline/trace.hpp"

#include <cstdint>
#include <exception>

#include "wspline/ot.hpp"
#include "wspline/parallel.hpp"

namespace wspline {

TimedSequence assign_times(const RefinedSequence& refined, double t0, double tT) {
    if (!(t0 < tT)) fail(ErrorCode::BadInterval, "need t0 < tT");
    const std::size_t len = refined.measures.size();
    if (len < 2) fail(ErrorCode::TooFewClouds, "need at least two clouds");

    std::vector<double> times(len);
    times.front() = t0;
    times.back() = tT;
    const double span = tT - t0;
    for (std::size_t k = 1; k + 1 < len; ++k)
        times[k] = t0 + span * (static_cast<double>(k) / static_cast<double>(len - 1));
    return TimedSequence(std::move(times), refined.measures);
}

TrajectoryForest trace_paths(const RefinedSequence& refined, double mass_threshold,
                             const RefinementConfig& cfg) {
    const auto& seq = refined.measures;
    if (seq.size() < 2) fail(ErrorCode::TooFewClouds, "tracing needs at least two clouds");
    if (!(mass_threshold >= 0.0 && mass_threshold < 1.0))
        fail(ErrorCode::ConfigError, "mass threshold must lie in [0, 1)");

    TrajectoryForest forest;
    std::vector<std::size_t> offsets(seq.size());
    std::size_t total = 0;
    for (std::size_t s = 0; s < seq.size(); ++s) {
        offsets[s] = total;
        total += seq[s].size();
    }
    forest.nodes.reserve(total);
    for (std::size_t s = 0; s < seq.size(); ++s) {
        const auto& mu = seq[s];
        for (std::size_t i = 0; i < mu.size(); ++i) {
            ForestNode node;
            node.step = s;
            node.atom = i;
            node.pos.assign(mu.point(i).begin(), mu.point(i).end());
            node.mass = mu.weight(i);
            forest.nodes.push_back(std::move(node));
        }
    }
    for (std::size_t i = 0; i < seq.front().size(); ++i) forest.roots.push_back(i);

    // consecutive-pair couplings are independent solves
    const std::int64_t pairs = static_cast<std::int64_t>(seq.size()) - 1;
    std::vector<Coupling> couplings(static_cast<std::size_t>(pairs));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(pairs));
    const int jobs = max_jobs();

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1 && pairs > 1)
    for (std::int64_t s = 0; s < pairs; ++s) {
        try {
            const auto& a = seq[static_cast<std::size_t>(s)];
            const auto& b = seq[static_cast<std::size_t>(s) + 1];
            couplings[static_cast<std::size_t>(s)] =
                solve_kantorovich(a, b, cost_matrix(a, b, cfg.cost_exponent));
        } catch (...) {
            errors[static_cast<std::size_t>(s)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (std::size_t s = 0; s + 1 < seq.size(); ++s) {
        const Coupling& c = couplings[s];
        for (std::size_t i = 0; i < c.rows; ++i) {
            for (std::size_t j = 0; j < c.cols; ++j) {
                const double g = c.at(i, j);
                if (!(g > mass_threshold)) continue;
                forest.edges.push_back({offsets[s] + i, offsets[s + 1] + j, g});
            }
        }
    }
    return forest;
}

} // namespace wspline
