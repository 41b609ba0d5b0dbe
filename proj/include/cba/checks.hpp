#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cba/cluster_law.hpp"
#include "cba/estimators.hpp"

namespace cba {

/// Outcome of one verification suite. Used by the `check` subcommand and the
/// acceptance binary.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// The five representative laws used across suites.
std::vector<ClusterLaw> reference_laws();

struct OracleSuiteOptions {
  std::uint64_t configs = 10000;
  std::size_t max_n = 200;
  std::uint64_t seed = 1;
  /// Also check W superadditivity at every cut and window-visit
  /// monotonicity over every prefix of each configuration.
  bool structural = true;
};

/// Heap scheduler against the rescanning reference on random
/// configurations drawn across laws, spacings and densities, with the exact
/// structural invariants on every configuration. `tally` accumulates the
/// structural checks.
CheckResult check_oracle_equivalence(const OracleSuiteOptions& opts, InvariantTally& tally);

/// Corrected implicit equation: Delta(1) closed form, geometric closed form,
/// and F(1 - 1e-4) against pc.
CheckResult check_implicit_equation();

/// recursion_residual at solve_q roots for every reference law on a p-grid.
CheckResult check_recursion_closure(int grid_points = 20);

/// Sum over k of s_k / r_k equals s / r, and s + r <= (1-p)/2.
CheckResult check_series_closure();

/// Arrival-distance symmetry by Monte Carlo at reduced size.
CheckResult check_symmetry(std::uint64_t trials, std::uint64_t seed, const RunOptions& run = {});

} // namespace cba
