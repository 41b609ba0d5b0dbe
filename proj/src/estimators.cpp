#include "cba/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "cba/analytics.hpp"
#include "cba/resolver.hpp"
#include "trial_runner.hpp"

namespace cba {

InvariantTally& InvariantTally::operator+=(const InvariantTally& o) {
  outcomes_checked += o.outcomes_checked;
  outcome_violations += o.outcome_violations;
  superadditivity_checks += o.superadditivity_checks;
  superadditivity_violations += o.superadditivity_violations;
  monotonicity_checks += o.monotonicity_checks;
  monotonicity_violations += o.monotonicity_violations;
  if (o.first_violation_trial < first_violation_trial) {
    first_violation_trial = o.first_violation_trial;
    first_violation = o.first_violation;
  }
  return *this;
}

double normal_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

Interval wilson_ci(std::uint64_t successes, std::uint64_t trials, double level) {
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  if (trials == 0) return {0.0, 1.0};
  const double z = normal_quantile(level);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  Interval ci{centre - half, centre + half};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  ci.lo = std::max(0.0, std::min(ci.lo, phat));
  ci.hi = std::min(1.0, std::max(ci.hi, phat));
  return ci;
}

namespace {

void note_violation(InvariantTally& tally, std::uint64_t trial, const std::string& what) {
  if (trial < tally.first_violation_trial) {
    tally.first_violation_trial = trial;
    tally.first_violation = "trial " + std::to_string(trial) + ": " + what;
  }
}

void check_outcome(const Configuration& c, const Outcome& o, std::uint64_t trial, const RunOptions& opts,
                   InvariantTally& tally) {
  if (!opts.check_invariants) return;
  ++tally.outcomes_checked;
  if (auto v = find_violation(c, o)) {
    ++tally.outcome_violations;
    note_violation(tally, trial, *v);
  }
}

// W(1,n) >= W(1,c) + W(c+1,n) at the midpoint cut.
void check_superadditive(const Configuration& window, std::int64_t whole_w, std::uint64_t trial,
                         const RunOptions& opts, InvariantTally& tally) {
  if (!opts.check_superadditivity || window.size() < 2) return;
  const std::int64_t first = window.first_index;
  const std::int64_t last = window.label(window.size() - 1);
  const std::int64_t cut = first + static_cast<std::int64_t>(window.size() / 2) - 1;
  const auto left = sub_config(window, first, cut);
  const auto right = sub_config(window, cut + 1, last);
  const auto lo = resolve(left), ro = resolve(right);
  check_outcome(left, lo, trial, opts, tally);
  check_outcome(right, ro, trial, opts, tally);
  ++tally.superadditivity_checks;
  if (whole_w < surviving_counts(lo).w() + surviving_counts(ro).w()) {
    ++tally.superadditivity_violations;
    note_violation(tally, trial, "superadditivity fails at cut " + std::to_string(cut));
  }
}

EstimateReport proportion(std::string quantity, std::uint64_t successes, std::uint64_t trials,
                          const ExperimentParams& params, std::size_t n_sites) {
  EstimateReport r;
  r.quantity = std::move(quantity);
  r.successes = successes;
  r.trials = trials;
  r.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  r.ci = wilson_ci(successes, trials, r.level);
  r.std_error = trials ? std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials)) : 0.0;
  r.n_sites = n_sites;
  r.params = params;
  return r;
}

struct Counts {
  std::vector<std::uint64_t> hits;
  std::vector<std::int64_t> sums;
  InvariantTally tally;

  Counts& operator+=(const Counts& o) {
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += o.hits[i];
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += o.sums[i];
    tally += o.tally;
    return *this;
  }
};

void check_ladder(const std::vector<std::size_t>& ladder) {
  if (ladder.empty()) throw std::invalid_argument("empty window ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] == 0 || (i > 0 && ladder[i] <= ladder[i - 1])) {
      throw std::invalid_argument("window ladder must be positive and strictly increasing");
    }
  }
}

} // namespace

EstimateSet estimate_q(ExperimentParams params, const std::vector<std::size_t>& ladder, std::uint64_t trials,
                       const RunOptions& opts) {
  check_ladder(ladder);
  params.side = Side::RightHalfLine;
  params.n = ladder.back();
  params.validate();

  Counts zero{std::vector<std::uint64_t>(ladder.size(), 0), {}, {}};
  auto counts = detail::run_trials(trials, opts, zero, [&](std::uint64_t t, Counts& acc) {
    const Configuration full = sample_config(params, t);
    bool previous = false;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const bool whole = ladder[i] == full.size();
      const Configuration window = whole ? Configuration{} : sub_config(full, 1, static_cast<std::int64_t>(ladder[i]));
      const Configuration& c = whole ? full : window;
      const Outcome o = resolve(c);
      check_outcome(c, o, t, opts, acc.tally);
      const bool visited = origin_visited_by_left(o).visited;
      if (visited) ++acc.hits[i];
      if (i > 0) {
        ++acc.tally.monotonicity_checks;
        if (previous && !visited) {
          ++acc.tally.monotonicity_violations;
          note_violation(acc.tally, t, "window visit indicator decreased at n=" + std::to_string(ladder[i]));
        }
      }
      previous = visited;
      if (whole) check_superadditive(c, surviving_counts(o).w(), t, opts, acc.tally);
    }
  });

  EstimateSet out;
  out.invariants = counts.tally;
  const double analytic = solve_q(params.law, params.p);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    auto r = proportion("q", counts.hits[i], trials, params, ladder[i]);
    r.params.n = ladder[i];
    r.analytic = analytic;
    r.note = "finite-window lower estimate";
    out.reports.push_back(std::move(r));
  }
  return out;
}

EstimateReport estimate_theta(ExperimentParams params, std::uint64_t trials, const RunOptions& opts,
                              InvariantTally* tally) {
  params.side = Side::TwoSided;
  params.validate();
  if (params.law.pmf(0) >= 1.0) throw std::invalid_argument("cluster law has no mass on sizes >= 1");

  // The cluster at site 0 separates the halves until it is first hit, so it
  // survives the window exactly when neither half, resolved alone, sends an
  // arrow toward it. The centre draw does not affect the indicator.
  ExperimentParams half = params;
  half.side = Side::RightHalfLine;
  Counts zero{std::vector<std::uint64_t>(1, 0), {}, {}};
  auto counts = detail::run_trials(trials, opts, zero, [&](std::uint64_t t, Counts& acc) {
    auto reaches_centre = [&](const Configuration& c, Kind toward) {
      const Outcome o = resolve(c);
      check_outcome(c, o, t, opts, acc.tally);
      check_superadditive(c, surviving_counts(o).w(), t, opts, acc.tally);
      return std::any_of(o.survivors.begin(), o.survivors.end(), [&](const Survivor& s) { return s.kind == toward; });
    };
    if (reaches_centre(sample_config(half, t), Kind::LeftArrow)) return;
    if (reaches_centre(sample_left_window(params, t), Kind::RightArrow)) return;
    ++acc.hits[0];
  });

  if (tally) *tally += counts.tally;
  auto r = proportion("theta", counts.hits[0], trials, params, 2 * params.n + 1);
  r.analytic = theta_from_q(solve_q(params.law, params.p));
  r.note = "site 0 conditioned on size >= 1; finite-window upper estimate";
  return r;
}

EstimateSet estimate_sr(ExperimentParams params, std::uint64_t trials, std::uint32_t k_max, const RunOptions& opts) {
  params.side = Side::RightHalfLine;
  params.validate();
  // Slots: [0, k_max] s_k, [k_max+1, 2k_max+1] r_k, then s_over, r_over,
  // arrow_arrow_visited, arrow_arrow_unvisited, survived, visited.
  const std::size_t base = 2 * (k_max + 1);
  enum : std::size_t { SOver, ROver, AAVisited, AAUnvisited, Survived, Visited, Slots };
  Counts zero{std::vector<std::uint64_t>(base + Slots, 0), {}, {}};
  auto counts = detail::run_trials(trials, opts, zero, [&](std::uint64_t t, Counts& acc) {
    const Configuration c = sample_config(params, t);
    const Outcome o = resolve(c);
    check_outcome(c, o, t, opts, acc.tally);
    const bool visited = origin_visited_by_left(o).visited;
    if (visited) ++acc.hits[base + Visited];
    const auto fate = first_particle_fate(o, c);
    switch (fate.fate) {
      case FirstFate::AnnihilatedWithArrow: ++acc.hits[base + (visited ? AAVisited : AAUnvisited)]; break;
      case FirstFate::AnnihilatedWithCluster: {
        const std::uint32_t k = fate.cluster_initial_size;
        if (k <= k_max) {
          ++acc.hits[visited ? k : k_max + 1 + k];
        } else {
          ++acc.hits[base + (visited ? SOver : ROver)];
        }
        break;
      }
      case FirstFate::SurvivedWindow: ++acc.hits[base + Survived]; break;
      case FirstFate::SiteVacantOrNotRightArrow: break;
    }
    check_superadditive(c, surviving_counts(o).w(), t, opts, acc.tally);
  });

  EstimateSet out;
  out.invariants = counts.tally;
  const double q = solve_q(params.law, params.p);
  const auto& h = counts.hits;
  auto add = [&](std::string name, std::uint64_t hits, std::optional<double> analytic) {
    auto r = proportion(std::move(name), hits, trials, params, params.n);
    r.analytic = analytic;
    out.reports.push_back(std::move(r));
  };
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    add("s_" + std::to_string(k), h[k], sk_formula(params.law, params.p, q, k));
  }
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    add("r_" + std::to_string(k), h[k_max + 1 + k], rk_formula(params.law, params.p, q, k));
  }
  std::uint64_t s_total = h[base + SOver], r_total = h[base + ROver];
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    s_total += h[k];
    r_total += h[k_max + 1 + k];
  }
  add("s", s_total, s_formula(params.law, params.p, q));
  add("r", r_total, r_formula(params.law, params.p, q));
  add("arrow_arrow", h[base + AAVisited] + h[base + AAUnvisited], arrow_arrow_formula(params.law, params.p, q));
  add("first_survived", h[base + Survived], 0.0);
  add("q", h[base + Visited], q);
  return out;
}

EstimateSet estimate_W_curve(ExperimentParams params, const std::vector<std::size_t>& n_list, std::uint64_t trials,
                             const RunOptions& opts) {
  check_ladder(n_list);
  params.side = Side::RightHalfLine;
  params.n = n_list.back();
  params.validate();

  // sums[2i] = sum of W(1,n_i), sums[2i+1] = sum of W(1,n_i)^2.
  Counts zero{{}, std::vector<std::int64_t>(2 * n_list.size(), 0), {}};
  auto counts = detail::run_trials(trials, opts, zero, [&](std::uint64_t t, Counts& acc) {
    const Configuration full = sample_config(params, t);
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      const Configuration c = sub_config(full, 1, static_cast<std::int64_t>(n_list[i]));
      const Outcome o = resolve(c);
      check_outcome(c, o, t, opts, acc.tally);
      const std::int64_t w = surviving_counts(o).w();
      acc.sums[2 * i] += w;
      acc.sums[2 * i + 1] += w * w;
      if (i + 1 == n_list.size()) check_superadditive(c, w, t, opts, acc.tally);
    }
  });

  EstimateSet out;
  out.invariants = counts.tally;
  const double q = solve_q(params.law, params.p);
  const double density = blockade_density(params.law, params.p, q);
  const double z = normal_quantile(0.95);
  const double nt = static_cast<double>(trials);
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const double n = static_cast<double>(n_list[i]);
    const double mean = static_cast<double>(counts.sums[2 * i]) / nt;
    const double var = std::max(0.0, static_cast<double>(counts.sums[2 * i + 1]) / nt - mean * mean) *
                       (trials > 1 ? nt / (nt - 1.0) : 1.0);
    EstimateReport r;
    r.quantity = "W_over_n";
    r.estimate = mean / n;
    r.trials = trials;
    r.std_error = std::sqrt(var / nt) / n;
    r.ci = {r.estimate - z * r.std_error, r.estimate + z * r.std_error};
    r.n_sites = n_list[i];
    r.params = params;
    r.params.n = n_list[i];
    r.analytic = density;
    r.note = "analytic value is the limiting surviving-unit density";
    if (r.estimate > sup) {
      sup = r.estimate;
      arg = out.reports.size();
    }
    out.reports.push_back(std::move(r));
  }
  EstimateReport s = out.reports[arg];
  s.quantity = "theta_sup";
  s.estimate = std::max(0.0, sup);
  s.ci = {std::max(0.0, s.ci.lo), std::max(0.0, s.ci.hi)};
  s.analytic = theta_from_q(q);
  const double gap = std::abs(s.estimate - *s.analytic);
  s.note = gap > 5.0 * s.std_error ? "flagged: differs from (1-q)^2 by more than 5 sigma" : "consistent with (1-q)^2";
  out.reports.push_back(std::move(s));
  return out;
}

EstimateSet estimate_arrival_symmetry(ExperimentParams params, std::uint32_t j, std::uint32_t k,
                                      std::uint64_t trials, const RunOptions& opts) {
  if (j < 1 || j > k) throw std::invalid_argument("arrival symmetry needs 1 <= j <= k");
  params.side = Side::TwoSided;
  params.validate();
  const std::uint32_t a = j, b = k + 1 - j;
  const std::size_t need = std::max(a, b);
  ExperimentParams half = params;
  half.side = Side::RightHalfLine;

  // hits: [0] D_right(a) < D_left(b), [1] both present, [2] D_right(b) < D_left(a), [3] both present
  Counts zero{std::vector<std::uint64_t>(4, 0), {}, {}};
  auto counts = detail::run_trials(trials, opts, zero, [&](std::uint64_t t, Counts& acc) {
    const Configuration left = sample_left_window(params, t);
    const Configuration right = sample_config(half, t);
    const Outcome lo = resolve(left), ro = resolve(right);
    check_outcome(left, lo, t, opts, acc.tally);
    check_outcome(right, ro, t, opts, acc.tally);

    std::vector<double> from_left;  // right arrows reaching the centre, nearest first
    for (auto it = lo.survivors.rbegin(); it != lo.survivors.rend() && from_left.size() < need; ++it) {
      if (it->kind != Kind::RightArrow) break;
      from_left.push_back(-left.positions[left.offset(it->site)]);
    }
    const auto& from_right = ro.left_exit_times;

    auto compare = [&](std::uint32_t m_right, std::uint32_t m_left, std::size_t slot) {
      if (from_left.size() < m_right || from_right.size() < m_left) return;
      ++acc.hits[slot + 1];
      if (from_left[m_right - 1] < from_right[m_left - 1]) ++acc.hits[slot];
    };
    compare(a, b, 0);
    compare(b, a, 2);
  });

  EstimateSet out;
  out.invariants = counts.tally;
  const auto& h = counts.hits;
  const std::string tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  auto first = proportion("P(D_right" + tag + ")", h[0], h[1], params, params.n);
  first.excluded = trials - h[1];
  first.analytic = a == b ? std::optional<double>(0.5) : std::nullopt;
  const std::string mirror = "(" + std::to_string(b) + "," + std::to_string(a) + ")";
  auto second = proportion("P(D_right" + mirror + ")", h[2], h[3], params, params.n);
  second.excluded = trials - h[3];
  second.analytic = first.analytic;

  EstimateReport sum;
  sum.quantity = "paired_sum";
  sum.estimate = first.estimate + second.estimate;
  sum.trials = std::min(first.trials, second.trials);
  sum.excluded = std::max(first.excluded, second.excluded);
  sum.ci = {first.ci.lo + second.ci.lo, first.ci.hi + second.ci.hi};
  sum.std_error = first.std_error + second.std_error;
  sum.n_sites = params.n;
  sum.params = params;
  sum.analytic = 1.0;
  sum.note = "interval is the sum of the two Wilson intervals";
  out.reports = {std::move(first), std::move(second), std::move(sum)};
  return out;
}

} // namespace cba
