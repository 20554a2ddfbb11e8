#pragma once

#include <cstddef>
#include <vector>

#include "wspline/measure.hpp"

namespace wspline {

/// Pairwise transport costs ||x_i - y_j||^p, row-major.
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double exponent = 2.0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// Optimal transport plan between two measures, with the attained objective
/// <plan, cost>. Plans returned by the solver are basic (vertex) solutions,
/// so at most rows + cols - 1 entries are nonzero.
struct Coupling {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> plan; // row-major, dense
    double objective = 0.0;

    double at(std::size_t i, std::size_t j) const { return plan[i * cols + j]; }
    std::size_t nonzero_count() const;
};

CostMatrix cost_matrix(const DiscreteMeasure& a, const DiscreteMeasure& b, double p);

/// Exact solve of the balanced transportation LP
///   min <plan, cost>  s.t.  plan 1 = a.weights, plan^T 1 = b.weights, plan >= 0
/// via the network simplex on the bipartite transportation graph. The pivot
/// rule is fixed (block search over row-major arc order, ties to the lowest
/// arc index; leaving arc per the strongly-feasible-tree rule), so degenerate
/// ties resolve the same way on every run.
Coupling solve_kantorovich(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           const CostMatrix& cost);

/// f^(1/p) for the optimal Kantorovich objective f under cost ||x-y||^p.
double wasserstein_distance(const DiscreteMeasure& a, const DiscreteMeasure& b, double p);

} // namespace wspline
