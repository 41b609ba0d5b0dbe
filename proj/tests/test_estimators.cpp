#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "cba/analytics.hpp"
#include "cba/estimators.hpp"
#include "cba/resolver.hpp"

using namespace cba;

namespace {

ExperimentParams base(double p, ClusterLaw law, std::size_t n, std::uint64_t seed = 11) {
  ExperimentParams params;
  params.p = p;
  params.law = std::move(law);
  params.n = n;
  params.seed = seed;
  return params;
}

bool same(const EstimateSet& a, const EstimateSet& b) {
  if (a.reports.size() != b.reports.size()) return false;
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    const auto &x = a.reports[i], &y = b.reports[i];
    if (x.quantity != y.quantity || x.estimate != y.estimate || x.successes != y.successes ||
        x.ci.lo != y.ci.lo || x.ci.hi != y.ci.hi || x.excluded != y.excluded) {
      return false;
    }
  }
  return a.invariants.outcomes_checked == b.invariants.outcomes_checked &&
         a.invariants.violations() == b.invariants.violations();
}

} // namespace

TEST_CASE("wilson interval") {
  auto ci = wilson_ci(0, 40);
  CHECK(ci.lo == 0.0);
  ci = wilson_ci(40, 40);
  CHECK(ci.hi == 1.0);
  ci = wilson_ci(50, 100);
  CHECK(ci.lo == doctest::Approx(0.404).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(0.596).epsilon(1e-3));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK_THROWS_AS(wilson_ci(5, 4), std::invalid_argument);
}

TEST_CASE("all-cluster systems") {
  const auto params = base(1.0, ClusterLaw::delta(1), 200);
  const auto q = estimate_q(params, {50, 100, 200}, 50);
  for (const auto& r : q.reports) CHECK(r.estimate == 0.0);
  CHECK(estimate_theta(params, 50).estimate == 1.0);
  const auto w = estimate_W_curve(params, {10, 100}, 20);
  CHECK(w.reports[0].estimate == 1.0);
  CHECK(w.reports[1].estimate == 1.0);
  const auto geo = estimate_W_curve(base(1.0, ClusterLaw::geometric(0.5), 1), {4000}, 200);
  CHECK(std::abs(geo.reports[0].estimate - 2.0) < 4 * geo.reports[0].std_error);
}

TEST_CASE("arrow-only systems have nonpositive W") {
  const auto w = estimate_W_curve(base(0.0, ClusterLaw::delta(1), 1), {1, 10, 100}, 100);
  for (const auto& r : w.reports) CHECK(r.estimate <= 0.0);
  CHECK(w.reports.back().quantity == "theta_sup");
  CHECK(w.reports.back().estimate == 0.0);
}

TEST_CASE("serial and parallel runs agree exactly") {
  RunOptions serial{Execution::Serial};
  serial.check_superadditivity = true;
  for (int threads : {1, 2, 4}) {
    RunOptions par{Execution::Parallel, threads};
    par.check_superadditivity = true;
    const auto params = base(0.5, ClusterLaw::geometric(0.5), 300);
    CHECK(same(estimate_q(params, {100, 300}, 200, serial), estimate_q(params, {100, 300}, 200, par)));
    CHECK(same(estimate_sr(params, 200, 3, serial), estimate_sr(params, 200, 3, par)));
    CHECK(same(estimate_arrival_symmetry(params, 1, 2, 200, serial),
               estimate_arrival_symmetry(params, 1, 2, 200, par)));
    CHECK(same(estimate_W_curve(params, {50, 300}, 100, serial), estimate_W_curve(params, {50, 300}, 100, par)));
    const auto a = estimate_theta(params, 200, serial), b = estimate_theta(params, 200, par);
    CHECK(a.successes == b.successes);
  }
}

TEST_CASE("q estimate is close to the analytic value in a modest window") {
  RunOptions opts;
  opts.check_superadditivity = true;
  const auto set = estimate_q(base(4.0 / 9.0, ClusterLaw::delta(1), 1), {500, 2000}, 3000, opts);
  CHECK(set.invariants.violations() == 0);
  CHECK(set.invariants.monotonicity_checks == 3000);
  CHECK(set.invariants.superadditivity_checks == 3000);
  const auto& r = set.reports.back();
  CHECK(r.analytic.value() == doctest::Approx(0.5));
  CHECK(std::abs(r.estimate - 0.5) < 4 * r.std_error + 0.01);
  CHECK(set.reports[0].estimate <= set.reports[1].estimate);
}

TEST_CASE("s_k is exactly zero where the law has no mass") {
  const auto set = estimate_sr(base(0.5, ClusterLaw::two_point(3), 500), 2000, 3, {});
  CHECK(set.reports[0].quantity == "s_1");
  CHECK(set.reports[0].estimate == 0.0);
  CHECK(set.reports[1].estimate == 0.0);
  CHECK(set.reports[2].quantity == "s_3");
  CHECK(set.reports[2].estimate > 0.0);
  CHECK(set.reports[3].quantity == "r_1");
  CHECK(set.reports[3].estimate == 0.0);
}

TEST_CASE("arrival symmetry bookkeeping") {
  const auto none = estimate_arrival_symmetry(base(1.0, ClusterLaw::delta(1), 100), 1, 1, 50);
  CHECK(none.reports[0].excluded == 50);
  CHECK(none.reports[0].trials == 0);
  const auto set = estimate_arrival_symmetry(base(0.5, ClusterLaw::delta(1), 200), 2, 3, 2000);
  CHECK(set.reports[0].excluded > 0);
  CHECK(set.reports[0].trials + set.reports[0].excluded == 2000);
  CHECK(set.reports[2].quantity == "paired_sum");
  CHECK(set.reports[2].ci.lo <= 1.0);
  CHECK(set.reports[2].ci.hi >= 1.0);
  CHECK_THROWS_AS(estimate_arrival_symmetry(base(0.5, ClusterLaw::delta(1), 10), 3, 2, 1), std::invalid_argument);
}

TEST_CASE("estimator argument validation") {
  const auto params = base(0.5, ClusterLaw::delta(1), 10);
  CHECK_THROWS_AS(estimate_q(params, {}, 10), std::invalid_argument);
  CHECK_THROWS_AS(estimate_q(params, {10, 5}, 10), std::invalid_argument);
  CHECK_THROWS_AS(estimate_theta(base(0.5, ClusterLaw::delta(0), 10), 10), std::invalid_argument);
}

TEST_CASE("theta indicator matches a full two-sided resolve") {
  for (double p : {0.2, 0.35, 0.6}) {
    auto params = base(p, ClusterLaw::geometric(0.5), 300, 5);
    params.side = Side::TwoSided;
    const std::uint64_t trials = 300;
    std::uint64_t survived = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      auto c = sample_config(params, t);
      c.sites[c.offset(0)] = Site::cluster(1);
      const auto o = resolve(c);
      const bool hit = std::any_of(o.collisions.begin(), o.collisions.end(), [](const CollisionRecord& r) {
        return r.kind == CollisionKind::ArrowCluster && r.cluster_site() == 0;
      });
      if (!hit) ++survived;
    }
    CHECK(estimate_theta(params, trials).successes == survived);
  }
}
