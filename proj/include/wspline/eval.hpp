#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wspline/measure.hpp"

namespace wspline {

/// Hold-out scores for one evaluation run. `mse` is empty when the pairing
/// is ambiguous (non-uniform weights or differing atom counts).
struct EvalReport {
    int held_out_step = 0;
    double w1 = 0.0;
    std::optional<double> mse;
    double mean_w1 = 0.0;
    std::optional<double> mean_mse;
    double runtime_seconds = 0.0;
};

/// Drop the interior step `held`, refine the rest, and evaluate the
/// piecewise geodesic interpolant at the held-out step's original time.
DiscreteMeasure predict_held_out(const TimedSequence& seq, int held,
                                 const RefinementConfig& cfg);

/// 1-Wasserstein distance between prediction and truth.
double metric_w1(const DiscreteMeasure& predicted, const DiscreteMeasure& actual);

/// Mean squared error under the optimal one-to-one transport assignment
/// (p=2 cost). Defined only for uniform measures with equal atom counts;
/// empty otherwise, since unordered clouds admit no canonical pairing.
std::optional<double> metric_mse(const DiscreteMeasure& predicted,
                                 const DiscreteMeasure& actual);

/// Leave-one-out over every interior step; arithmetic means of the per-step
/// metrics. The MSE mean is empty if any term is.
std::pair<double, std::optional<double>> mean_metrics(const TimedSequence& seq,
                                                      const RefinementConfig& cfg);

/// Full report for one held-out step (metrics plus the leave-one-out means).
EvalReport evaluate(const TimedSequence& seq, int held, const RefinementConfig& cfg);

struct ProbeRow {
    int level = 0;
    int degree = 0;
    double seconds = 0.0;
};

/// Wall-clock refinement timings over a (level, degree) grid; diagnostic
/// output, nothing asserted.
std::vector<ProbeRow> runtime_scaling_probe(const TimedSequence& seq, RefinementConfig base,
                                            std::span<const int> levels,
                                            std::span<const int> degrees);

} // namespace wspline
