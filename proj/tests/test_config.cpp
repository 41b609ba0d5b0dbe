#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "cba/config.hpp"

using namespace cba;

namespace {

ExperimentParams params_with(double p, ClusterLaw law, std::size_t n) {
  ExperimentParams params;
  params.p = p;
  params.law = std::move(law);
  params.n = n;
  params.seed = 99;
  return params;
}

} // namespace

TEST_CASE("p = 1 gives clusters only, p = 0 arrows only") {
  const auto all = sample_config(params_with(1.0, ClusterLaw::geometric(0.5), 5000), 0);
  for (const auto& s : all.sites) REQUIRE(s.kind == Kind::Cluster);

  const std::size_t n = 1000000;
  const auto arrows = sample_config(params_with(0.0, ClusterLaw::delta(1), n), 0);
  std::size_t left = 0;
  for (const auto& s : arrows.sites) {
    REQUIRE(s.is_arrow());
    left += s.kind == Kind::LeftArrow;
  }
  CHECK(std::abs(left / double(n) - 0.5) <= 3 * std::sqrt(0.25 / n));
}

TEST_CASE("cluster fraction matches p") {
  const std::size_t n = 1000000;
  const auto c = sample_config(params_with(0.25, ClusterLaw::delta(1), n), 3);
  std::size_t clusters = 0;
  for (const auto& s : c.sites) clusters += s.kind == Kind::Cluster;
  CHECK(std::abs(clusters / double(n) - 0.25) <= 3 * std::sqrt(0.25 * 0.75 / n));
}

TEST_CASE("sampling is deterministic and positions increase") {
  auto params = params_with(0.4, ClusterLaw::two_point(3), 2000);
  for (auto spacing : {SpacingLaw::exponential(), SpacingLaw::uniform()}) {
    params.spacing = spacing;
    const auto a = sample_config(params, 17), b = sample_config(params, 17), c = sample_config(params, 18);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK_NOTHROW(a.validate());
    CHECK(a.first_index == 1);
    CHECK(a.positions.front() > 0.0);
  }
}

TEST_CASE("two-sided samples share their right half with the half-line sample") {
  auto params = params_with(0.3, ClusterLaw::geometric(0.5), 300);
  const auto half = sample_config(params, 4);
  params.side = Side::TwoSided;
  const auto both = sample_config(params, 4);
  REQUIRE(both.size() == 601);
  CHECK(both.first_index == -300);
  CHECK(both.positions[both.offset(0)] == 0.0);
  CHECK(sub_config(both, 1, 300).positions == half.positions);
  CHECK(sub_config(both, 1, 300).sites == half.sites);
  CHECK_NOTHROW(both.validate());
}

TEST_CASE("sub_config windows") {
  const auto c = sample_config(params_with(0.5, ClusterLaw::delta(2), 50), 1);
  CHECK(sub_config(c, 1, 50) == c);
  const auto one = sub_config(c, 2, 2);
  CHECK(one.size() == 1);
  CHECK(one.first_index == 2);
  CHECK(one.positions[0] == c.positions[1]);
  for (std::int64_t m = 1; m < 50; ++m) {
    const auto small = sub_config(c, 1, m), big = sub_config(c, 1, m + 1);
    for (std::size_t i = 0; i < small.size(); ++i) {
      REQUIRE(small.positions[i] == big.positions[i]);
      REQUIRE(small.sites[i] == big.sites[i]);
    }
  }
  CHECK_THROWS_AS(sub_config(c, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(sub_config(c, 3, 51), std::out_of_range);
  CHECK_THROWS_AS(sub_config(c, 4, 3), std::out_of_range);
}

TEST_CASE("spacing laws") {
  Stream s(1, 1);
  const auto u = SpacingLaw::uniform(0.0, 1.0);
  const auto e = SpacingLaw::exponential(2.0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.sample(s), y = e.sample(s);
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(y > 0.0);
    sum += y;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.02));
  CHECK(SpacingLaw::parse("exp").family() == SpacingLaw::Family::Exponential);
  CHECK(SpacingLaw::parse("uniform:0.5,2").to_string() == "uniform:0.5,2");
  CHECK_THROWS_AS(SpacingLaw::parse("uniform:2,1"), std::invalid_argument);
  CHECK_THROWS_AS(SpacingLaw::parse("lattice"), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  Configuration c;
  c.positions = {1.0, 1.0};
  c.sites = {Site::left(), Site::right()};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.positions = {-1.0, 1.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.side = Side::TwoSided;
  CHECK_NOTHROW(c.validate());
}
