#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plrec {

// Runtime switch for the OpenMP kernels. Every kernel keeps a serial
// reference path; results must be bit-identical either way, so parallelism
// only maps pure work onto disjoint output slots.
bool parallel_enabled();
void set_parallel(bool on);
int worker_count();

#ifdef _OPENMP
inline bool inside_parallel_region() { return omp_in_parallel() != 0; }
#else
inline bool inside_parallel_region() { return false; }
#endif

template <class Fn>
void serial_for(std::size_t n, Fn&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& body) {
#ifdef _OPENMP
    if (parallel_enabled() && !inside_parallel_region() && n > 1) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    serial_for(n, body);
}

}  // namespace plrec
