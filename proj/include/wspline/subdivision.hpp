#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wspline/geodesic.hpp"
#include "wspline/measure.hpp"

namespace wspline {

enum class Scheme { WLR, FourPoint };

struct RefinementMeta {
    Scheme scheme = Scheme::WLR;
    int degree = 0; // 0 for the 4-point scheme
    int level = 0;
    std::size_t input_length = 0;
};

struct RefinedSequence {
    std::vector<DiscreteMeasure> measures;
    RefinementMeta meta;
};

/// One consecutive-averaging pass: out[j] = ot_average(in[j], in[j+1], alpha).
/// Pairs are independent, so the parallel kernel is bit-identical to the
/// serial reference for any worker count.
std::vector<DiscreteMeasure> average_pass_serial(std::span<const DiscreteMeasure> in,
                                                 double alpha, const RefinementConfig& cfg);
std::vector<DiscreteMeasure> average_pass(std::span<const DiscreteMeasure> in, double alpha,
                                          const RefinementConfig& cfg);

/// Classical Lane-Riesenfeld refinement in R^d with the same endpoint
/// repetition as the measure-valued scheme: per round, double every point,
/// extend both ends so each end value appears M times, then run M midpoint
/// averaging passes. Serves as the exact scalar reference for singleton
/// clouds; the R -> infinity limit is the degree-M B-spline.
std::vector<std::vector<double>> lane_riesenfeld_linear(
    const std::vector<std::vector<double>>& points, int level, int degree);

/// Measure-valued Lane-Riesenfeld: the linear midpoint average replaced by
/// the transport geodesic average at 1/2. Output length is
/// 2^R (T+M-1) + 2 - M for T+1 input clouds; first and last outputs equal
/// the input endpoints bit-for-bit.
RefinedSequence wlr_refine(const TimedSequence& seq, const RefinementConfig& cfg);

/// Interpolatory 4-point refinement with tension w (default 1/16): between
/// surviving neighbors insert the half-average of the two extrapolated
/// clouds ot_average(., ., -2w). Each round drops one boundary cloud per
/// end, so the refined domain shrinks toward the interior; every surviving
/// input cloud reappears unchanged at the even positions.
RefinedSequence four_point_refine(const TimedSequence& seq, int level, double w,
                                  const RefinementConfig& cfg);

/// sup over consecutive pairs of W_p.
double delta_sup(std::span<const DiscreteMeasure> seq, double p);

/// 2^R (T+M-1) + 2 - M.
std::int64_t expected_output_count(int T, int R, int M);

} // namespace wspline
