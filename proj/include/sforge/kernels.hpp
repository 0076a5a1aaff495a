#pragma once

// Grid-scan drivers shared by the certificates.
//
// Every scan evaluates an independent kernel per grid point and then reduces
// in index order. The OpenMP driver and the serial reference run the same
// kernel, so their results are bit-identical for any thread count.

#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <vector>

namespace sforge {

enum class Exec { Serial, Parallel };

/// Caps the OpenMP team size; n <= 0 restores the runtime default.
void set_thread_cap(int n);
/// Applies SF_THREADS from the environment when it holds a positive integer.
/// Returns the cap that was applied, if any.
std::optional<int> apply_thread_cap_from_env();
int max_threads();

namespace kernels {

/// out[i] = f(i) for i in [0, n), serially.
template <class T, class F>
std::vector<T> map_serial(std::size_t n, F&& f) {
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

/// out[i] = f(i) for i in [0, n) on an OpenMP team. The lowest-index
/// exception is rethrown after the loop, matching what the serial loop raises.
template <class T, class F>
std::vector<T> map_parallel(std::size_t n, F&& f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

template <class T, class F>
std::vector<T> map_grid(Exec exec, std::size_t n, F&& f) {
  return exec == Exec::Parallel ? map_parallel<T>(n, std::forward<F>(f)) : map_serial<T>(n, std::forward<F>(f));
}

/// Index of the smallest key(v[i]); ties keep the lowest index. NaN keys
/// count as -infinity so a broken point can never hide.
template <class T, class Key>
std::size_t ordered_argmin(const std::vector<T>& v, Key&& key) {
  std::size_t best = 0;
  double best_key = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    double k = key(v[i]);
    if (k != k) k = -std::numeric_limits<double>::infinity();
    if (i == 0 || k < best_key) {
      best = i;
      best_key = k;
    }
  }
  return best;
}

} // namespace kernels
} // namespace sforge
