#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "wspline/geodesic.hpp"

using namespace wspline;

namespace {
RefinementConfig exact_cfg(double p = 2.0) {
    RefinementConfig cfg;
    cfg.cost_exponent = p;
    cfg.prune_threshold = 0.0;
    return cfg;
}
} // namespace

TEST_CASE("alpha 0 reproduces the source cloud") {
    std::mt19937_64 rng(41);
    const auto a = testsupport::random_cloud(rng, 8, 2);
    const auto b = testsupport::random_cloud(rng, 8, 2);
    const auto avg = ot_average(a, b, 0.0, exact_cfg());
    REQUIRE(avg.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(avg.point(i)[0] == a.point(i)[0]);
        CHECK(avg.point(i)[1] == a.point(i)[1]);
        CHECK(std::abs(avg.weight(i) - a.weight(i)) <= 1e-12);
    }
}

TEST_CASE("midpoint of a split is the half-split") {
    const auto a = make_measure({{0.0}});
    const auto b = make_measure({{-1.0}, {1.0}});
    const auto mid = ot_average(a, b, 0.5, exact_cfg());
    REQUIRE(mid.size() == 2);
    CHECK(mid.point(0)[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(mid.point(1)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mid.weight(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mid.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("point masses move along the segment") {
    const auto a = make_measure({{0.0}});
    const auto b = make_measure({{4.0}});
    const auto q = ot_average(a, b, 0.25, exact_cfg());
    REQUIRE(q.size() == 1);
    CHECK(q.point(0)[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("averaging does not mutate its inputs") {
    std::mt19937_64 rng(43);
    const auto a = testsupport::random_cloud(rng, 6, 2, false);
    const auto b = testsupport::random_cloud(rng, 9, 2, false);
    const auto a_copy = a;
    const auto b_copy = b;
    (void)ot_average(a, b, 0.37, exact_cfg());
    CHECK(a.same_atoms(a_copy));
    CHECK(b.same_atoms(b_copy));
}

TEST_CASE("geodesic identities hold for the averaged measure") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 12; ++rep) {
        const double p = (rep % 2 == 0) ? 2.0 : 1.0;
        const auto cfg = exact_cfg(p);
        const auto a = testsupport::random_cloud(rng, 4 + rep % 5, 2, rep % 3 != 0);
        const auto b = testsupport::random_cloud(rng, 4 + (rep + 2) % 5, 2, rep % 2 != 0);
        const double w = wasserstein_distance(a, b, p);
        for (const double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const auto avg = ot_average(a, b, alpha, cfg);

            double mass = 0.0;
            for (double wt : avg.weights()) mass += wt;
            CHECK(std::abs(mass - 1.0) <= 1e-12);

            const double to_b = wasserstein_distance(avg, b, p);
            const double to_a = wasserstein_distance(avg, a, p);
            CHECK(std::abs(to_b - (1.0 - alpha) * w) <= 1e-6 * w);
            CHECK(std::abs(to_a - alpha * w) <= 1e-6 * w);
            CHECK(std::abs(to_a + to_b - w) <= 1e-6 * w); // betweenness
        }
    }
}

namespace {

// multiset comparison: every atom of `out` must sit exactly on an atom of
// `expected` and reproduce its weight
void check_same_measure(const DiscreteMeasure& out, const DiscreteMeasure& expected) {
    REQUIRE(out.size() == expected.size());
    std::vector<bool> used(expected.size(), false);
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < expected.size() && !found; ++j) {
            if (used[j]) continue;
            bool same = true;
            for (std::size_t k = 0; k < out.dim(); ++k)
                same = same && out.point(i)[k] == expected.point(j)[k];
            if (same) {
                CHECK(std::abs(out.weight(i) - expected.weight(j)) <= 1e-9);
                used[j] = true;
                found = true;
            }
        }
        CHECK(found);
    }
}

} // namespace

TEST_CASE("endpoint parameters recover the inputs after merge") {
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 8; ++rep) {
        const auto cfg = exact_cfg();
        const auto a = testsupport::random_cloud(rng, 5, 2, false);
        const auto b = testsupport::random_cloud(rng, 7, 2, false);
        check_same_measure(ot_average(a, b, 1.0, cfg), b);
        check_same_measure(ot_average(a, b, 0.0, cfg), a);
    }
}

TEST_CASE("extrapolation outside [0,1] is accepted") {
    std::mt19937_64 rng(59);
    const auto a = testsupport::random_cloud(rng, 6, 2);
    const auto b = testsupport::random_cloud(rng, 6, 2);
    const auto ext = ot_average(a, b, -0.125, exact_cfg());
    CHECK(ext.size() >= 1);
    double mass = 0.0;
    for (double wt : ext.weights()) mass += wt;
    CHECK(std::abs(mass - 1.0) <= 1e-12);
}

TEST_CASE("oversized prune threshold empties the plan") {
    const auto a = make_measure({{0.0}});
    const auto b = make_measure({{-1.0}, {1.0}});
    RefinementConfig cfg;
    cfg.prune_threshold = 0.9; // both plan entries are 0.5
    CHECK_THROWS_AS(ot_average(a, b, 0.5, cfg), Error);
}

TEST_CASE("interpolant endpoints and grid points are exact") {
    std::mt19937_64 rng(61);
    std::vector<DiscreteMeasure> seq;
    for (int s = 0; s < 5; ++s) seq.push_back(testsupport::random_cloud(rng, 5, 2));
    const auto cfg = exact_cfg();

    CHECK(geodesic_interpolant(seq, 0.0, cfg).same_atoms(seq.front()));
    CHECK(geodesic_interpolant(seq, 1.0, cfg).same_atoms(seq.back()));
    // t = k/4 lands exactly on entry k for five clouds
    CHECK(geodesic_interpolant(seq, 0.25, cfg).same_atoms(seq[1]));
    CHECK(geodesic_interpolant(seq, 0.75, cfg).same_atoms(seq[3]));

    CHECK_THROWS_AS(geodesic_interpolant(seq, -0.1, cfg), Error);
    CHECK_THROWS_AS(geodesic_interpolant(seq, 1.1, cfg), Error);
}

TEST_CASE("two-cloud interpolant at a half is the midpoint") {
    std::mt19937_64 rng(67);
    const auto a = testsupport::random_cloud(rng, 6, 2);
    const auto b = testsupport::random_cloud(rng, 6, 2);
    const auto cfg = exact_cfg();
    const std::vector<DiscreteMeasure> seq = {a, b};
    const auto direct = ot_average(a, b, 0.5, cfg);
    CHECK(geodesic_interpolant(seq, 0.5, cfg).same_atoms(direct));
}
