#include "ccpnet/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccpnet {

namespace {

int env_thread_cap() {
  const char* raw = std::getenv("CCPNET_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int n = std::stoi(raw);
    return n > 0 ? n : 0;
  } catch (...) {
    return 0;
  }
}

}  // namespace

int worker_threads() {
#ifdef _OPENMP
  const int cap = env_thread_cap();
  const int n = omp_get_max_threads();
  return cap > 0 && cap < n ? cap : n;
#else
  return 1;
#endif
}

void apply_thread_cap_from_env() {
#ifdef _OPENMP
  const int cap = env_thread_cap();
  if (cap > 0) omp_set_num_threads(cap);
#endif
}

}  // namespace ccpnet
