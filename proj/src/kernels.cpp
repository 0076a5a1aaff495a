#include "sforge/kernels.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace sforge {

namespace {
int default_threads = -1;
}

void set_thread_cap(int n) {
  if (default_threads < 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
}

std::optional<int> apply_thread_cap_from_env() {
  const char* raw = std::getenv("SF_THREADS");
  if (!raw) return std::nullopt;
  try {
    std::size_t used = 0;
    const int n = std::stoi(raw, &used);
    if (used != std::string(raw).size() || n <= 0) return std::nullopt;
    set_thread_cap(n);
    return n;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

int max_threads() { return omp_get_max_threads(); }

} // namespace sforge
