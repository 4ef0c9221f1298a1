#ifndef GPTV_PARALLEL_HPP
#define GPTV_PARALLEL_HPP

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace gptv {

/// Execution mode for batch kernels. Every parallel kernel keeps a serial
/// path; tests compare the two for identical output.
enum class ExecMode { Serial, Parallel };

#if defined(_OPENMP)
inline int max_threads() { return omp_get_max_threads(); }
#else
inline int max_threads() { return 1; }
#endif

/// Runs body(i) for i in [0, n). Bodies must only write to disjoint,
/// index-owned slots so that Serial and Parallel agree bit for bit.
template <typename Body>
void parallel_for(std::size_t n, ExecMode mode, Body&& body) {
#if defined(_OPENMP)
    if (mode == ExecMode::Parallel) {
        #pragma omp parallel for schedule(dynamic, 16)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace gptv

#endif
