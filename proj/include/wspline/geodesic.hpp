#pragma once

#include <span>

#include "wspline/measure.hpp"
#include "wspline/ot.hpp"

namespace wspline {

/// Geodesic average of two measures: solve the transport LP with cost
/// exponent cfg.cost_exponent, keep plan entries above cfg.prune_threshold,
/// place mass gamma_ij at (1-alpha) x_i + alpha y_j, renormalize, merge
/// coincident atoms. For alpha in [0,1] and p=2 this is the displacement
/// interpolation at parameter alpha; alpha outside [0,1] extrapolates along
/// the same matching (the 4-point scheme calls it with -2w).
DiscreteMeasure ot_average(const DiscreteMeasure& a, const DiscreteMeasure& b, double alpha,
                           const RefinementConfig& cfg);

/// Same, reusing an already-solved coupling between a and b.
DiscreteMeasure ot_average_with_plan(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                     const Coupling& coupling, double alpha,
                                     const RefinementConfig& cfg);

/// Piecewise geodesic interpolant through a sequence: seq[i] sits at
/// parameter i/(L-1); t in [0,1] maps into the enclosing segment and is
/// evaluated by ot_average. Endpoints are returned as-is.
DiscreteMeasure geodesic_interpolant(std::span<const DiscreteMeasure> seq, double t,
                                     const RefinementConfig& cfg);

} // namespace wspline
