#pragma once

#include <cstdint>
#include <random>

namespace cba {

/// SplitMix64 finalizer. Used to hash (seed, trial) counters into
/// well-separated generator seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Per-trial random stream. Trial t of a run seeded with s draws from a
/// generator whose state depends only on (s, t), so results do not depend on
/// which worker executes the trial or in what order.
class Stream {
public:
  Stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t lane = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
};

} // namespace cba
