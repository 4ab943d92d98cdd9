#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chb {

// Execution policy for the element kernels. Parallel uses OpenMP when the
// build has it and falls back to the serial loop otherwise. Both policies
// produce bit-identical results by construction: parallel regions only fill
// disjoint per-element slots, and all scatters/reductions run afterwards in
// fixed index order.
enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec e);
int max_threads();

template <class F>
void parallel_for(std::ptrdiff_t n, Exec exec, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::Parallel && n > 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

}  // namespace chb
