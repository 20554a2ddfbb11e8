#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "wspline/measure.hpp"
#include "wspline/ot.hpp"

namespace testsupport {

using wspline::DiscreteMeasure;
using wspline::TimedSequence;

inline DiscreteMeasure random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                    bool uniform_weights = true, double scale = 4.0) {
    std::uniform_real_distribution<double> coord(-scale, scale);
    std::uniform_real_distribution<double> mass(0.2, 1.0);
    std::vector<double> pts(n * dim);
    for (auto& x : pts) x = coord(rng);
    std::vector<double> weights;
    if (!uniform_weights) {
        weights.resize(n);
        for (auto& w : weights) w = mass(rng);
    }
    return DiscreteMeasure(std::move(pts), dim, std::move(weights));
}

inline TimedSequence random_sequence(std::mt19937_64& rng, std::size_t steps, std::size_t n,
                                     std::size_t dim, bool uniform_weights = true) {
    std::vector<double> times;
    std::vector<DiscreteMeasure> clouds;
    for (std::size_t s = 0; s < steps; ++s) {
        times.push_back(static_cast<double>(s));
        clouds.push_back(random_cloud(rng, n, dim, uniform_weights));
    }
    return TimedSequence(std::move(times), std::move(clouds));
}

inline TimedSequence singleton_sequence(const std::vector<std::vector<double>>& points) {
    std::vector<double> times;
    std::vector<DiscreteMeasure> clouds;
    for (std::size_t s = 0; s < points.size(); ++s) {
        times.push_back(static_cast<double>(s));
        clouds.push_back(wspline::make_measure({points[s]}));
    }
    return TimedSequence(std::move(times), std::move(clouds));
}

/// Exhaustive min-cost perfect matching for uniform equal-size clouds:
/// min over permutations of (1/n) sum_i C[i][perm(i)]. Independent of the
/// LP path; only usable for n <= ~7.
inline double brute_force_matching(const wspline::CostMatrix& cost) {
    const std::size_t n = cost.rows;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cost.at(i, perm[i]);
        best = std::min(best, total / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Exhaustive optimal-assignment mean squared error between two equal-size
/// clouds: min over permutations of (1/n) sum_i ||x_i - y_perm(i)||^2.
inline double brute_force_mse(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const std::size_t n = a.size(), d = a.dim();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double sq = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = a.point(i)[k] - b.point(perm[i])[k];
                sq += diff * diff;
            }
            total += sq;
        }
        best = std::min(best, total / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace testsupport
