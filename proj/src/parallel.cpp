#include "chb/parallel.hpp"

#include <atomic>

namespace chb {

namespace {
std::atomic<Exec> g_default{
#ifdef _OPENMP
    Exec::Parallel
#else
    Exec::Serial
#endif
};
}  // namespace

Exec default_exec() { return g_default.load(std::memory_order_relaxed); }

void set_default_exec(Exec e) { g_default.store(e, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace chb
