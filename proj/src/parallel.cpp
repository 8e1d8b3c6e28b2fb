#include "evomsn/parallel.hpp"

#include <atomic>

namespace evomsn {

namespace {
std::atomic<ExecMode> g_mode{
#ifdef _OPENMP
    ExecMode::openmp
#else
    ExecMode::serial
#endif
};
}  // namespace

ExecMode execution_mode() { return g_mode.load(std::memory_order_relaxed); }

void set_execution_mode(ExecMode mode) { g_mode.store(mode, std::memory_order_relaxed); }

int worker_count() {
#ifdef _OPENMP
    return execution_mode() == ExecMode::openmp ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

}  // namespace evomsn
