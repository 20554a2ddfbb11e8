#include "wspline/geodesic.hpp"

#include <cmath>
#include <string>

namespace wspline {

DiscreteMeasure ot_average_with_plan(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                     const Coupling& coupling, double alpha,
                                     const RefinementConfig& cfg) {
    if (!(cfg.prune_threshold >= 0.0 && cfg.prune_threshold < 1.0))
        fail(ErrorCode::ConfigError, "prune threshold must lie in [0, 1)");
    const std::size_t m = a.size(), n = b.size(), d = a.dim();
    const double eps = cfg.prune_threshold;

    std::vector<double> support;
    std::vector<double> masses;
    support.reserve((m + n) * d);
    masses.reserve(m + n);

    const double* xa = a.support().data();
    const double* xb = b.support().data();
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = coupling.plan.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double g = row[j];
            if (!(g > eps)) continue;
            for (std::size_t k = 0; k < d; ++k)
                support.push_back((1.0 - alpha) * xa[i * d + k] + alpha * xb[j * d + k]);
            masses.push_back(g);
        }
    }
    if (masses.empty())
        fail(ErrorCode::EmptyAfterPrune,
             "no plan entry above prune threshold " + std::to_string(eps));

    // prune first, then renormalize; the constructor divides by the sum
    DiscreteMeasure out(std::move(support), d, std::move(masses));
    return merge_duplicates(out, cfg.merge_tolerance);
}

DiscreteMeasure ot_average(const DiscreteMeasure& a, const DiscreteMeasure& b, double alpha,
                           const RefinementConfig& cfg) {
    if (a.dim() != b.dim())
        fail(ErrorCode::DimensionMismatch, "averaging needs equal ambient dimensions");
    // identical clouds average to themselves for any alpha
    if (a.same_atoms(b)) return a;
    const Coupling coupling = solve_kantorovich(a, b, cost_matrix(a, b, cfg.cost_exponent));
    return ot_average_with_plan(a, b, coupling, alpha, cfg);
}

DiscreteMeasure geodesic_interpolant(std::span<const DiscreteMeasure> seq, double t,
                                     const RefinementConfig& cfg) {
    const std::size_t len = seq.size();
    if (len < 2) fail(ErrorCode::TooFewClouds, "interpolant needs at least two clouds");
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::BadInterval, "t must lie in [0, 1]");

    if (t >= 1.0) return seq[len - 1];
    const double scaled = t * static_cast<double>(len - 1);
    std::size_t i = static_cast<std::size_t>(scaled);
    if (i > len - 2) i = len - 2;
    const double s = scaled - static_cast<double>(i);
    if (s == 0.0) return seq[i];
    return ot_average(seq[i], seq[i + 1], s, cfg);
}

} // namespace wspline
