#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cba/config.hpp"

namespace cba {

enum class Execution { Serial, Parallel };

struct RunOptions {
  Execution execution = Execution::Parallel;
  int threads = 0;  // 0: OpenMP default
  /// Survivor ordering and conservation checked on every resolved outcome.
  bool check_invariants = true;
  /// Adds W(1,n) >= W(1,c) + W(c+1,n) at the midpoint cut c of each trial's
  /// largest window (one extra resolve per trial).
  bool check_superadditivity = false;
};

/// Exact per-path checks accumulated over a run. All counters are integers,
/// so merging across workers is order independent.
struct InvariantTally {
  std::uint64_t outcomes_checked = 0;
  std::uint64_t outcome_violations = 0;
  std::uint64_t superadditivity_checks = 0;
  std::uint64_t superadditivity_violations = 0;
  std::uint64_t monotonicity_checks = 0;
  std::uint64_t monotonicity_violations = 0;
  std::string first_violation;  // from the lowest-numbered failing trial
  std::uint64_t first_violation_trial = UINT64_MAX;

  std::uint64_t violations() const {
    return outcome_violations + superadditivity_violations + monotonicity_violations;
  }
  InvariantTally& operator+=(const InvariantTally& other);
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_ci(std::uint64_t successes, std::uint64_t trials, double level = 0.95);

/// Two-sided standard normal quantile for a confidence level.
double normal_quantile(double level);

struct EstimateReport {
  std::string quantity;
  double estimate = 0.0;
  std::uint64_t trials = 0;     // trials that entered the estimate
  std::uint64_t successes = 0;  // for proportions
  std::uint64_t excluded = 0;   // trials dropped for lack of data
  Interval ci;
  double level = 0.95;
  double std_error = 0.0;
  std::size_t n_sites = 0;
  ExperimentParams params;
  std::optional<double> analytic;
  std::string note;
};

struct EstimateSet {
  std::vector<EstimateReport> reports;
  InvariantTally invariants;
};

/// Fraction of trials whose half-line window of n sites sends a left arrow
/// to the origin, for each n in the increasing ladder. Windows of one trial
/// are nested restrictions of one sample, so indicators are nondecreasing in
/// n; each step is checked. These are lower estimates of q.
EstimateSet estimate_q(ExperimentParams params, const std::vector<std::size_t>& ladder, std::uint64_t trials,
                       const RunOptions& opts = {});

/// Fraction of trials in which the cluster at site 0 of a two-sided window
/// (sites -n..n, site 0 conditioned to hold >= 1 blockade) is never hit.
/// Upper estimate of theta.
EstimateReport estimate_theta(ExperimentParams params, std::uint64_t trials, const RunOptions& opts = {},
                              InvariantTally* tally = nullptr);

/// Joint frequencies of the first particle's fate and the origin visit.
/// Reports, in order: s_k for k = 1..k_max, r_k for k = 1..k_max, then
/// s, r, arrow_arrow (P(first right arrow meets a left arrow)),
/// first_survived and q (visit fraction on these trials).
EstimateSet estimate_sr(ExperimentParams params, std::uint64_t trials, std::uint32_t k_max,
                        const RunOptions& opts = {});

/// Mean W(1,n)/n per n (one sample per trial, nested windows) followed by a
/// final `theta_sup` report = max(0, max_n mean W(1,n)/n).
EstimateSet estimate_W_curve(ExperimentParams params, const std::vector<std::size_t>& n_list, std::uint64_t trials,
                             const RunOptions& opts = {});

/// Arrival distances to a central site from two independent half-line
/// windows of n sites: D_right(m) from the left window (right arrows),
/// D_left(m) from the right window (left arrows). Reports
/// P(D_right(j) < D_left(k+1-j)), P(D_right(k+1-j) < D_left(j)) and their
/// sum. Trials lacking the needed arrivals are excluded and counted.
EstimateSet estimate_arrival_symmetry(ExperimentParams params, std::uint32_t j, std::uint32_t k,
                                      std::uint64_t trials, const RunOptions& opts = {});

} // namespace cba
