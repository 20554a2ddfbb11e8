#pragma once

#include <cstddef>
#include <vector>

#include "wspline/measure.hpp"
#include "wspline/subdivision.hpp"

namespace wspline {

struct ForestNode {
    std::size_t step = 0;
    std::size_t atom = 0;
    std::vector<double> pos;
    double mass = 0.0;
};

struct ForestEdge {
    std::size_t from = 0; // node indices
    std::size_t to = 0;
    double mass = 0.0; // transported mass gamma_ij
};

/// Branching per-atom paths: one node per atom of every cloud, edges from
/// the consecutive-pair transport plans. A row of a plan with two or more
/// surviving entries is a split: the atom's trajectory branches.
struct TrajectoryForest {
    std::vector<ForestNode> nodes;
    std::vector<ForestEdge> edges;
    std::vector<std::size_t> roots; // node indices of the first cloud
};

/// Spread the refined clouds evenly over [t0, tT]; the endpoints are the
/// interpolated input endpoints, so they carry the original times.
TimedSequence assign_times(const RefinedSequence& refined, double t0, double tT);

/// Re-solve transport between each consecutive pair and keep plan entries
/// above mass_threshold as edges. With threshold 0 every positive entry
/// survives and mass is conserved through every step.
TrajectoryForest trace_paths(const RefinedSequence& refined, double mass_threshold,
                             const RefinementConfig& cfg);

} // namespace wspline
