#pragma once

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cocycle::par {

// 0 = leave the OpenMP default (all cores).
inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Parallel loop over [0, n). Each index writes only its own output slot;
// callers merge slots serially, so results are independent of scheduling.
// Exceptions are captured and rethrown after the region (they must not
// escape an OpenMP construct).
template <class F>
void parallel_for(int n, F&& body) {
#ifdef _OPENMP
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(cocycle_par_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    for (int i = 0; i < n; ++i) body(i);
#endif
}

} // namespace cocycle::par
