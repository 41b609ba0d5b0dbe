#pragma once

#include <cstdint>
#include <exception>

#include <malloc.h>
#include <omp.h>

#include "cba/estimators.hpp"

namespace cba::detail {

/// Runs body(trial, acc) for trial = 0..trials-1 and merges per-worker
/// accumulators with operator+=. Accumulators hold integers only, so the
/// result does not depend on the schedule or the worker count.
// Large windows allocate a few MB per trial. With glibc's defaults those
// blocks are mmapped or trimmed back to the OS after every trial, and the
// page faults cost about a tenth of the run. Keep them in the heap instead.
inline void keep_trial_buffers() {
#ifdef M_TRIM_THRESHOLD
  static const bool done = [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return true;
  }();
  (void)done;
#endif
}

template <class Acc, class Body>
Acc run_trials(std::uint64_t trials, const RunOptions& opts, const Acc& zero, Body&& body) {
  keep_trial_buffers();
  if (opts.execution == Execution::Serial) {
    Acc acc = zero;
    for (std::uint64_t t = 0; t < trials; ++t) body(t, acc);
    return acc;
  }

  Acc total = zero;
  std::exception_ptr failure;
  const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel num_threads(threads)
  {
    Acc local = zero;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < n; ++t) {
      try {
        body(static_cast<std::uint64_t>(t), local);
      } catch (...) {
#pragma omp critical(cba_trial_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(cba_trial_merge)
    total += local;
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

} // namespace cba::detail
