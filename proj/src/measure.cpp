#include "wspline/measure.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace wspline {

namespace {

double checked_weight_sum(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w)) fail(ErrorCode::NonFinite, "weight is not finite");
        if (w < 0.0) fail(ErrorCode::InvalidWeight, "weight is negative");
        sum += w;
    }
    return sum;
}

} // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> support, std::size_t dim,
                                 std::vector<double> weights) {
    if (dim == 0) fail(ErrorCode::DimensionMismatch, "ambient dimension must be >= 1");
    if (support.size() % dim != 0)
        fail(ErrorCode::DimensionMismatch, "support size is not a multiple of dim");
    const std::size_t n = support.size() / dim;
    if (n == 0) fail(ErrorCode::EmptyMeasure, "measure needs at least one atom");
    for (double x : support)
        if (!std::isfinite(x)) fail(ErrorCode::NonFinite, "support coordinate is not finite");

    if (weights.empty()) {
        weights.assign(n, 1.0 / static_cast<double>(n));
    } else if (weights.size() != n) {
        fail(ErrorCode::DimensionMismatch, "weight count does not match atom count");
    }
    const double sum = checked_weight_sum(weights);
    if (sum <= 0.0) fail(ErrorCode::EmptyMeasure, "all weights are zero");

    dim_ = dim;
    support_.reserve(support.size());
    weights_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (weights[i] == 0.0) continue; // prune zero-mass atoms
        support_.insert(support_.end(), support.begin() + static_cast<std::ptrdiff_t>(i * dim),
                        support.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
        weights_.push_back(weights[i] / sum);
    }

    double check = 0.0;
    for (double w : weights_) check += w;
    if (std::abs(check - 1.0) > 1e-12)
        fail(ErrorCode::InvalidWeight, "normalized weights do not sum to 1 within 1e-12");
}

bool DiscreteMeasure::same_atoms(const DiscreteMeasure& other) const noexcept {
    if (dim_ != other.dim_ || weights_.size() != other.weights_.size()) return false;
    if (!support_.empty() &&
        std::memcmp(support_.data(), other.support_.data(), support_.size() * sizeof(double)) != 0)
        return false;
    if (!weights_.empty() &&
        std::memcmp(weights_.data(), other.weights_.data(), weights_.size() * sizeof(double)) != 0)
        return false;
    return true;
}

DiscreteMeasure make_measure(const std::vector<std::vector<double>>& points,
                             std::vector<double> weights) {
    if (points.empty()) fail(ErrorCode::EmptyMeasure, "no points given");
    const std::size_t dim = points.front().size();
    std::vector<double> flat;
    flat.reserve(points.size() * dim);
    for (const auto& p : points) {
        if (p.size() != dim)
            fail(ErrorCode::DimensionMismatch, "points have inconsistent dimension");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return DiscreteMeasure(std::move(flat), dim, std::move(weights));
}

DiscreteMeasure make_measure(std::vector<double> support, std::size_t dim,
                             std::vector<double> weights) {
    return DiscreteMeasure(std::move(support), dim, std::move(weights));
}

DiscreteMeasure merge_duplicates(const DiscreteMeasure& m, double tol) {
    if (tol < 0.0) fail(ErrorCode::ConfigError, "merge tolerance must be >= 0");
    const std::size_t d = m.dim();
    const double tol2 = tol * tol;

    std::vector<double> support(m.support());
    std::vector<double> weights(m.weights());

    // Greedy pass: each atom joins the first cluster whose running mean is
    // within tol, else founds a new cluster. Repeated until stable so the
    // result is idempotent.
    bool merged_any = false;
    while (true) {
        std::vector<double> centers;       // mass-weighted means, row-major
        std::vector<double> masses;        // cluster masses
        std::vector<double> weighted_sums; // sum of w * x per cluster
        std::vector<bool> uniform_pos;     // all members bitwise identical so far
        bool merged = false;

        const std::size_t n = weights.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = support.data() + i * d;
            std::size_t target = masses.size();
            for (std::size_t c = 0; c < masses.size(); ++c) {
                double sq = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double diff = centers[c * d + k] - x[k];
                    sq += diff * diff;
                }
                if (sq <= tol2) {
                    target = c;
                    break;
                }
            }
            if (target == masses.size()) {
                centers.insert(centers.end(), x, x + d);
                weighted_sums.resize(weighted_sums.size() + d);
                for (std::size_t k = 0; k < d; ++k)
                    weighted_sums[target * d + k] = weights[i] * x[k];
                masses.push_back(weights[i]);
                uniform_pos.push_back(true);
            } else {
                merged = true;
                bool identical = uniform_pos[target];
                for (std::size_t k = 0; identical && k < d; ++k)
                    identical = centers[target * d + k] == x[k];
                uniform_pos[target] = identical;
                masses[target] += weights[i];
                for (std::size_t k = 0; k < d; ++k)
                    weighted_sums[target * d + k] += weights[i] * x[k];
                if (!identical) {
                    // keep the coincident-member position exact, otherwise
                    // recenter on the mass-weighted mean
                    for (std::size_t k = 0; k < d; ++k)
                        centers[target * d + k] = weighted_sums[target * d + k] / masses[target];
                }
            }
        }
        if (!merged) break;
        merged_any = true;
        support = std::move(centers);
        weights = std::move(masses);
    }

    if (!merged_any) return m; // identity when no duplicates
    DiscreteMeasure out;
    // Reuse the validating constructor; total mass was preserved by the
    // cluster sums, so normalization is a no-op up to rounding.
    out = DiscreteMeasure(std::move(support), d, std::move(weights));
    return out;
}

TimedSequence::TimedSequence(std::vector<double> times, std::vector<DiscreteMeasure> measures) {
    if (times.size() != measures.size())
        fail(ErrorCode::DimensionMismatch, "times and measures differ in length");
    if (times.empty()) fail(ErrorCode::EmptyMeasure, "empty sequence");
    const std::size_t d = measures.front().dim();
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i])) fail(ErrorCode::NonFinite, "time is not finite");
        if (i > 0 && !(times[i] > times[i - 1]))
            fail(ErrorCode::ParseError, "times must be strictly increasing");
        if (measures[i].dim() != d)
            fail(ErrorCode::DimensionMismatch, "measures have mixed ambient dimensions");
    }
    times_ = std::move(times);
    measures_ = std::move(measures);
}

void RefinementConfig::validate() const {
    if (degree < 1) fail(ErrorCode::ConfigError, "degree must be >= 1");
    if (level < 0) fail(ErrorCode::ConfigError, "level must be >= 0");
    if (level > 30) fail(ErrorCode::ConfigError, "level is unreasonably large (> 30)");
    if (!(cost_exponent >= 1.0) || !std::isfinite(cost_exponent))
        fail(ErrorCode::ConfigError, "cost exponent must be >= 1");
    if (!(prune_threshold >= 0.0) || prune_threshold >= 1.0)
        fail(ErrorCode::ConfigError, "prune threshold must be in [0, 1)");
    if (!(merge_tolerance >= 0.0))
        fail(ErrorCode::ConfigError, "merge tolerance must be >= 0");
}

} // namespace wspline
