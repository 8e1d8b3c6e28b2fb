#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace evomsn {

enum class ExecMode { serial, openmp };

/// Process-wide execution mode for the batch kernels. Defaults to openmp
/// when compiled with OpenMP support. Thread-compatible: set it once before
/// launching work, not concurrently with running kernels.
ExecMode execution_mode();
void set_execution_mode(ExecMode mode);

/// Number of worker threads the openmp mode would use (1 without OpenMP).
int worker_count();

/// Applies fn(i) for i in [0, n). In openmp mode iterations run on a static
/// schedule; callers must write only to per-index slots so the result is
/// bit-identical to the serial order.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
#ifdef _OPENMP
    if (execution_mode() == ExecMode::openmp && n > 1) {
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace evomsn
