// Timings for the heap resolver against the rescanning reference, and for
// serial against OpenMP estimator runs.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "cba/estimators.hpp"
#include "cba/resolver.hpp"

using namespace cba;

namespace {

template <class F>
double time_it(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentParams params_for(std::size_t n) {
  ExperimentParams params;
  params.p = 0.5;
  params.law = ClusterLaw::geometric(0.5);
  params.n = n;
  params.seed = 3;
  return params;
}

} // namespace

int main(int argc, char** argv) {
  const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200;

  std::printf("%-10s %14s %14s\n", "n", "heap [s]", "naive [s]");
  for (std::size_t n : {100, 1000, 4000}) {
    const auto params = params_for(n);
    std::size_t sink = 0;
    const double heap = time_it([&] {
      for (std::uint64_t t = 0; t < 20; ++t) sink += resolve(sample_config(params, t)).collisions.size();
    });
    const double naive = time_it([&] {
      for (std::uint64_t t = 0; t < 20; ++t) sink += resolve_naive(sample_config(params, t)).collisions.size();
    });
    std::printf("%-10zu %14.6f %14.6f   (%zu collisions)\n", n, heap / 20, naive / 20, sink);
  }
  for (std::size_t n : {100000, 1000000}) {
    const auto params = params_for(n);
    const double heap = time_it([&] { resolve(sample_config(params, 0)); });
    std::printf("%-10zu %14.6f %14s\n", n, heap, "-");
  }

  std::printf("\nestimate_q, n = 10000, %llu trials, %d threads available\n",
              static_cast<unsigned long long>(trials), omp_get_max_threads());
  const auto params = params_for(10000);
  RunOptions serial{Execution::Serial};
  const double ts = time_it([&] { estimate_q(params, {10000}, trials, serial); });
  std::printf("  serial    %10.3f s\n", ts);
  for (int threads : {1, 2, 4, omp_get_max_threads()}) {
    RunOptions par{Execution::Parallel, threads};
    const double tp = time_it([&] { estimate_q(params, {10000}, trials, par); });
    std::printf("  %2d threads %9.3f s  speedup %.2f\n", threads, tp, ts / tp);
  }
  return 0;
}
