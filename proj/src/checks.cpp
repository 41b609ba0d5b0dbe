#include "cba/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "cba/analytics.hpp"
#include "cba/config.hpp"
#include "cba/resolver.hpp"

namespace cba {
namespace {

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Structural checks that need every prefix/suffix of a small configuration.
void structural_checks(const Configuration& c, std::uint64_t id, InvariantTally& tally) {
  const std::int64_t first = c.first_index;
  const std::int64_t last = c.label(c.size() - 1);
  const std::size_t n = c.size();
  std::vector<std::int64_t> prefix_w(n), suffix_w(n);
  bool previous = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pre = sub_config(c, first, c.label(i));
    const auto o = resolve(pre);
    prefix_w[i] = surviving_counts(o).w();
    if (c.side == Side::RightHalfLine) {
      const bool visited = origin_visited_by_left(o).visited;
      if (i > 0) {
        ++tally.monotonicity_checks;
        if (previous && !visited) {
          ++tally.monotonicity_violations;
          if (id < tally.first_violation_trial) {
            tally.first_violation_trial = id;
            tally.first_violation = "config " + std::to_string(id) + ": window visit indicator decreased";
          }
        }
      }
      previous = visited;
    }
    suffix_w[i] = surviving_counts(resolve(sub_config(c, c.label(i), last))).w();
  }
  for (std::size_t cut = 0; cut + 1 < n; ++cut) {
    ++tally.superadditivity_checks;
    if (prefix_w[n - 1] < prefix_w[cut] + suffix_w[cut + 1]) {
      ++tally.superadditivity_violations;
      if (id < tally.first_violation_trial) {
        tally.first_violation_trial = id;
        tally.first_violation = "config " + std::to_string(id) + ": superadditivity fails at cut " +
                                std::to_string(c.label(cut));
      }
    }
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

} // namespace

std::vector<ClusterLaw> reference_laws() {
  return {ClusterLaw::delta(1), ClusterLaw::geometric(0.5), ClusterLaw::two_point(5),
          ClusterLaw::custom({0.2, 0.3, 0.1, 0.4}), ClusterLaw::power_law(2.5, 10)};
}

CheckResult check_oracle_equivalence(const OracleSuiteOptions& opts, InvariantTally& tally) {
  Stopwatch clock;
  const std::vector<ClusterLaw> laws = {ClusterLaw::delta(1), ClusterLaw::delta(3), ClusterLaw::geometric(0.5),
                                        ClusterLaw::two_point(5), ClusterLaw::custom({0.3, 0.2, 0.2, 0.3})};
  const std::vector<SpacingLaw> spacings = {SpacingLaw::exponential(), SpacingLaw::uniform()};
  const std::vector<double> densities = {0.1, 0.25, 0.5, 0.9};
  const std::size_t combos = laws.size() * spacings.size() * densities.size();

  std::uint64_t mismatches = 0, ties = 0, collisions = 0;
  std::string first_mismatch;
  for (std::uint64_t id = 0; id < opts.configs; ++id) {
    const std::size_t combo = id % combos;
    ExperimentParams params;
    params.law = laws[combo % laws.size()];
    params.spacing = spacings[(combo / laws.size()) % spacings.size()];
    params.p = densities[combo / (laws.size() * spacings.size())];
    Stream pick(opts.seed, id, 7);
    params.n = 1 + pick.next_u64() % opts.max_n;
    params.side = id % 2 == 0 ? Side::RightHalfLine : Side::TwoSided;
    params.seed = opts.seed;
    if (params.side == Side::TwoSided) params.n = std::max<std::size_t>(1, params.n / 2);
    const Configuration c = sample_config(params, id);

    Outcome fast, slow;
    bool fast_tie = false, slow_tie = false;
    try {
      fast = resolve(c);
    } catch (const TripleCollisionError&) {
      fast_tie = true;
    }
    try {
      slow = resolve_naive(c);
    } catch (const TripleCollisionError&) {
      slow_tie = true;
    }
    if (fast_tie || slow_tie) {
      ++ties;
      if (fast_tie != slow_tie) {
        ++mismatches;
        if (first_mismatch.empty()) first_mismatch = "config " + std::to_string(id) + ": tie handling differs";
      }
      continue;
    }
    collisions += fast.collisions.size();
    if (!(fast == slow)) {
      ++mismatches;
      if (first_mismatch.empty()) first_mismatch = "config " + std::to_string(id) + " (" + params.law.to_string() + ")";
    }
    ++tally.outcomes_checked;
    if (auto v = find_violation(c, fast)) {
      ++tally.outcome_violations;
      if (id < tally.first_violation_trial) {
        tally.first_violation_trial = id;
        tally.first_violation = "config " + std::to_string(id) + ": " + *v;
      }
    }
    if (opts.structural) structural_checks(c, id, tally);
  }

  CheckResult r;
  r.name = "oracle equivalence";
  r.passed = mismatches == 0;
  r.detail = std::to_string(opts.configs) + " configs, " + std::to_string(collisions) + " collisions, " +
             std::to_string(mismatches) + " mismatches, " + std::to_string(ties) + " exact ties";
  if (!first_mismatch.empty()) r.detail += "; first: " + first_mismatch;
  r.seconds = clock.seconds();
  return r;
}

CheckResult check_implicit_equation() {
  Stopwatch clock;
  double worst_a = 0.0, worst_b = 0.0, worst_c = 0.0;
  const auto unit = ClusterLaw::delta(1);
  for (int i = 0; i < 50; ++i) {
    const double p = 0.25 + 0.75 * i / 49.0;
    worst_a = std::max(worst_a, std::abs(solve_q(unit, p) - (1.0 / std::sqrt(p) - 1.0)));
  }
  for (double beta : {0.2, 0.5, 0.8}) {
    const auto law = ClusterLaw::geometric(beta);
    const double critical = pc(law);
    for (int i = 0; i <= 20; ++i) {
      const double p = std::min(1.0, critical + (1.0 - critical) * i / 20.0);
      worst_b = std::max(worst_b, std::abs(solve_q(law, p) - q_geometric_closed(beta, p)));
    }
  }
  for (const auto& law : reference_laws()) {
    const double critical = pc(law);
    worst_c = std::max(worst_c, std::abs(F_of_v(law, 1.0 - 1e-4) - critical) / critical);
  }
  CheckResult r;
  r.name = "corrected implicit equation";
  r.passed = worst_a <= 1e-10 && worst_b <= 1e-10 && worst_c <= 1e-3;
  r.detail = "delta(1) max err " + fmt(worst_a) + ", geometric max err " + fmt(worst_b) +
             ", F(1-1e-4) max rel err " + fmt(worst_c);
  r.seconds = clock.seconds();
  return r;
}

CheckResult check_recursion_closure(int grid_points) {
  Stopwatch clock;
  double worst = 0.0;
  for (const auto& law : reference_laws()) {
    for (int i = 0; i < grid_points; ++i) {
      const double p = (i + 1.0) / grid_points;
      const double q = solve_q(law, p);
      worst = std::max(worst, std::abs(recursion_residual(law, p, q)));
    }
  }
  CheckResult r;
  r.name = "recursion closure";
  r.passed = worst < 1e-9;
  r.detail = "max |residual| " + fmt(worst);
  r.seconds = clock.seconds();
  return r;
}

CheckResult check_series_closure() {
  Stopwatch clock;
  double worst = 0.0;
  bool bounded = true;
  for (const auto& law : reference_laws()) {
    for (double p : {0.3, 0.6, 0.9}) {
      const double q = solve_q(law, p);
      const std::uint64_t kmax = law.support_max() ? law.support_max() : 400;
      double s = 0.0, rr = 0.0;
      for (std::uint64_t k = 0; k <= kmax; ++k) {
        s += sk_formula(law, p, q, k);
        rr += rk_formula(law, p, q, k);
      }
      worst = std::max({worst, std::abs(s - s_formula(law, p, q)), std::abs(rr - r_formula(law, p, q))});
      bounded = bounded && arrow_arrow_formula(law, p, q) >= -1e-15;
    }
  }
  CheckResult r;
  r.name = "collision-type series";
  r.passed = worst < 1e-10 && bounded;
  r.detail = "max |sum_k - closed form| " + fmt(worst) + (bounded ? "" : "; s + r exceeds (1-p)/2");
  r.seconds = clock.seconds();
  return r;
}

CheckResult check_symmetry(std::uint64_t trials, std::uint64_t seed, const RunOptions& run) {
  Stopwatch clock;
  ExperimentParams params;
  params.law = ClusterLaw::geometric(0.5);
  params.p = 0.5;
  params.n = 500;
  params.seed = seed;
  bool ok = true;
  std::string detail;
  for (auto [j, k] : {std::pair{1u, 1u}, std::pair{1u, 2u}, std::pair{2u, 3u}}) {
    const auto set = estimate_arrival_symmetry(params, j, k, trials, run);
    const auto& sum = set.reports.back();
    bool in = sum.ci.lo <= 1.0 && 1.0 <= sum.ci.hi;
    for (const auto& r : set.reports) {
      if (r.analytic) in = in && r.ci.lo <= *r.analytic && *r.analytic <= r.ci.hi;
    }
    ok = ok && in && set.invariants.violations() == 0;
    detail += "(" + std::to_string(j) + "," + std::to_string(k) + ") sum " + fmt(sum.estimate) + "; ";
  }
  CheckResult r;
  r.name = "arrival symmetry";
  r.passed = ok;
  r.detail = detail;
  r.seconds = clock.seconds();
  return r;
}

} // namespace cba
