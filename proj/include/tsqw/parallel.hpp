#pragma once

#include <cstddef>
#include <exception>
#include <omp.h>

namespace tsqw {

enum class Execution { Serial, Parallel };

/// Sets the OpenMP worker count used by Execution::Parallel (<= 0 keeps the runtime default).
inline void set_worker_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

/// Index-addressed map; callers write results into pre-sized slots so the
/// merge order never depends on scheduling. The first exception thrown by any
/// index is rethrown on the calling thread.
template <class Fn>
void for_each_index(std::ptrdiff_t n, Execution ex, Fn&& fn) {
  if (ex == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(tsqw_for_each_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace tsqw
