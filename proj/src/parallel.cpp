#include "pmllab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pmllab {

int threads_from_env() {
  const char* raw = std::getenv("PMLLAB_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int value = std::stoi(raw);
    return value > 0 ? value : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

void apply_thread_cap() {
#ifdef _OPENMP
  if (const int cap = threads_from_env(); cap > 0) omp_set_num_threads(cap);
#endif
}

}  // namespace pmllab
