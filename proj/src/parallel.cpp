#include "wspline/parallel.hpp"

#include <atomic>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace wspline {

namespace {
std::atomic<int> g_max_jobs{0};
}

void set_max_jobs(int jobs) { g_max_jobs.store(jobs < 0 ? 0 : jobs); }

int max_jobs() {
    const int cap = g_max_jobs.load();
    if (cap > 0) return cap;
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace wspline
