#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cba/rng.hpp"

namespace cba {

/// Mean and variance of a cluster-size law. The variance is +inf when the
/// second moment diverges.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Distribution of the number of blockades placed at a cluster site.
///
/// Values are immutable after construction; sampling only touches the
/// caller's stream, so one law can be shared by every worker.
class ClusterLaw {
public:
  enum class Family { Delta, Geometric, TwoPoint, CustomPmf, PowerLaw };

  /// Point mass at k.
  static ClusterLaw delta(std::uint32_t k);
  /// mu_k = (1-beta)^(k-1) beta for k >= 1.
  static ClusterLaw geometric(double beta);
  /// Mass (k-1)/k at 0 and 1/k at k.
  static ClusterLaw two_point(std::uint32_t k);
  /// Weights w_0, w_1, ...; renormalized when the sum is within 1e-9 of 1.
  static ClusterLaw custom(std::vector<double> weights);
  /// mu_k proportional to k^-alpha on 1 <= k <= cutoff.
  static ClusterLaw power_law(double alpha, std::uint32_t cutoff);

  /// Parses `delta:k`, `geom:beta`, `twopoint:k`, `pmf:w0,w1,...` or
  /// `powerlaw:alpha,cutoff`. Throws std::invalid_argument on bad input.
  static ClusterLaw parse(std::string_view spec);

  /// Canonical spec string; parse(to_string()) reproduces the law.
  std::string to_string() const;

  Family family() const { return family_; }

  double pmf(std::uint64_t k) const;

  /// Probability generating function f(t) = sum_k mu_k t^k on [0, 1].
  double pgf(double t) const;
  double pgf_d1(double t) const;
  double pgf_d2(double t) const;

  Moments moments() const;

  std::uint32_t sample(Stream& stream) const;

  /// Largest k with mu_k > 0, or 0 for laws with unbounded support.
  std::uint64_t support_max() const;

private:
  ClusterLaw() = default;
  void build_table();

  Family family_ = Family::Delta;
  std::uint32_t k_ = 1;
  double beta_ = 0.5;
  double alpha_ = 2.0;
  // Finite-support families keep their pmf and cumulative sums.
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

} // namespace cba
