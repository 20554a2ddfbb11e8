#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wspline/error.hpp"

namespace wspline {

/// Weighted point cloud: n support points in R^d with positive weights
/// summing to one. Immutable after construction; all operations in the
/// library treat measures as values.
class DiscreteMeasure {
public:
    /// Empty placeholder; only valid as an assignment target.
    DiscreteMeasure() = default;

    /// Validating constructor. `support` is row-major n x dim. Empty
    /// `weights` means uniform 1/n. Zero-weight atoms are dropped and the
    /// remaining weights are normalized to sum 1.
    DiscreteMeasure(std::vector<double> support, std::size_t dim,
                    std::vector<double> weights = {});

    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return weights_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {support_.data() + i * dim_, dim_};
    }
    double weight(std::size_t i) const { return weights_[i]; }

    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// Bitwise equality of supports and weights.
    bool same_atoms(const DiscreteMeasure& other) const noexcept;

private:
    std::vector<double> support_; // row-major, size() * dim()
    std::vector<double> weights_;
    std::size_t dim_ = 0;
};

/// Canonical constructor used throughout: validates, prunes zero-weight
/// atoms, normalizes weights.
DiscreteMeasure make_measure(const std::vector<std::vector<double>>& points,
                             std::vector<double> weights = {});
DiscreteMeasure make_measure(std::vector<double> support, std::size_t dim,
                             std::vector<double> weights = {});

/// Merge support points within Euclidean distance `tol` of each other.
/// Greedy clustering in support order; a merged point is the mass-weighted
/// mean of its cluster. Passes repeat until no merge happens, so the result
/// is idempotent. Returns the input unchanged when nothing merges.
DiscreteMeasure merge_duplicates(const DiscreteMeasure& m, double tol);

/// Ordered (time, measure) observations. Times strictly increasing, all
/// measures share one ambient dimension.
class TimedSequence {
public:
    TimedSequence() = default;
    TimedSequence(std::vector<double> times, std::vector<DiscreteMeasure> measures);

    std::size_t size() const noexcept { return times_.size(); }
    std::size_t dim() const noexcept { return measures_.empty() ? 0 : measures_.front().dim(); }
    double time(std::size_t i) const { return times_[i]; }
    const DiscreteMeasure& measure(std::size_t i) const { return measures_[i]; }

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<DiscreteMeasure>& measures() const noexcept { return measures_; }

private:
    std::vector<double> times_;
    std::vector<DiscreteMeasure> measures_;
};

/// Knobs for the refinement pipeline. `seed` only feeds dataset generators.
struct RefinementConfig {
    int degree = 2;                 // B-spline degree M >= 1
    int level = 7;                  // refinement rounds R >= 0
    double cost_exponent = 2.0;     // p >= 1 in the transport cost
    double prune_threshold = 1e-10; // epsilon in [0, 1): plan entries <= eps are dropped
    double merge_tolerance = 1e-9;  // coincident-atom merge radius
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

} // namespace wspline
