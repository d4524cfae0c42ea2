#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmllab {

enum class Execution { kSerial, kParallel };

/// Thread cap from PMLLAB_THREADS (0 when unset or invalid).
int threads_from_env();

/// Applies threads_from_env() to the OpenMP runtime when set.
void apply_thread_cap();

/// results[i] = fn(i) for i in [0, count). The parallel path hands out indices
/// dynamically; since every result lands in its own slot, both paths return
/// identical vectors for a pure fn.
template <class Fn>
auto map_indices(std::size_t count, Fn&& fn, Execution exec) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> results(count);
  const auto n = static_cast<long>(count);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return results;
}

}  // namespace pmllab
