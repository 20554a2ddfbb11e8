// Benchmark: serial reference vs OpenMP averaging kernels, plus the
// refinement runtime scaling table over (R, M).
#include <chrono>
#include <cstdio>
#include <vector>

#include "wspline/datasets.hpp"
#include "wspline/eval.hpp"
#include "wspline/parallel.hpp"
#include "wspline/subdivision.hpp"

using namespace wspline;

namespace {

// min of three runs; single wall-clock samples swing a lot on busy hosts
double time_refine(const TimedSequence& seq, const RefinementConfig& cfg) {
    double best = 1e300;
    std::size_t clouds = 0;
    for (int rep = 0; rep < 3; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        const RefinedSequence out = wlr_refine(seq, cfg);
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                            start)
                                  .count());
        clouds = out.measures.size();
    }
    std::printf("  -> %zu clouds refined in %.3f s\n", clouds, best);
    return best;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t atoms = 50;
    int level = 5;
    if (argc > 1) atoms = static_cast<std::size_t>(std::atol(argv[1]));
    if (argc > 2) level = std::atoi(argv[2]);

    const TimedSequence seq = gen_diverging_gaussian(42, atoms, 4, 2);
    RefinementConfig cfg;
    cfg.degree = 2;
    cfg.level = level;

    std::printf("dataset: %zu clouds of %zu atoms, R=%d M=%d\n", seq.size(), atoms, level,
                cfg.degree);

    { // warm-up pass so first-touch costs do not skew the comparison
        RefinementConfig warm = cfg;
        warm.level = std::min(level, 2);
        (void)wlr_refine(seq, warm);
    }

    std::printf("serial reference (1 worker):\n");
    set_max_jobs(1);
    const double serial = time_refine(seq, cfg);

    set_max_jobs(0);
    std::printf("parallel kernels (%d workers):\n", max_jobs());
    const double parallel = time_refine(seq, cfg);
    std::printf("speedup: %.2fx\n\n", serial / parallel);

    // bit-identity check between the two paths
    set_max_jobs(1);
    const RefinedSequence a = wlr_refine(seq, cfg);
    set_max_jobs(0);
    const RefinedSequence b = wlr_refine(seq, cfg);
    bool identical = a.measures.size() == b.measures.size();
    for (std::size_t i = 0; identical && i < a.measures.size(); ++i)
        identical = a.measures[i].same_atoms(b.measures[i]);
    std::printf("serial/parallel outputs bit-identical: %s\n\n", identical ? "yes" : "NO");

    std::printf("runtime scaling (seconds per refine):\n");
    std::printf("%4s %4s %10s %10s\n", "R", "M", "seconds", "ratio");
    const std::vector<int> levels = {3, 4, 5};
    const std::vector<int> degrees = {1, 2, 3};
    const auto rows = runtime_scaling_probe(seq, cfg, levels, degrees);
    double prev = 0.0;
    int prev_degree = -1;
    for (const auto& row : rows) {
        const bool same_col = row.degree == prev_degree;
        if (same_col && prev > 0.0)
            std::printf("%4d %4d %10.4f %10.2f\n", row.level, row.degree, row.seconds,
                        row.seconds / prev);
        else
            std::printf("%4d %4d %10.4f %10s\n", row.level, row.degree, row.seconds, "-");
        prev = row.seconds;
        prev_degree = row.degree;
    }
    return identical ? 0 : 1;
}
