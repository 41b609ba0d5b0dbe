#include "doctest.h"

#include <stdexcept>

#include <sstream>

#include "cba/fixture_io.hpp"
#include "cba/svg.hpp"

using namespace cba;

TEST_CASE("fixture round trip resolves identically") {
  for (auto side : {Side::RightHalfLine, Side::TwoSided}) {
    ExperimentParams params;
    params.law = ClusterLaw::geometric(0.4);
    params.p = 0.35;
    params.n = 400;
    params.side = side;
    params.spacing = SpacingLaw::uniform();
    const auto c = sample_config(params, 3);
    std::stringstream buf;
    write_fixture(buf, c);
    const auto back = read_fixture(buf);
    CHECK(back == c);
    CHECK(resolve(back) == resolve(c));
  }
}

TEST_CASE("fixture parsing") {
  std::istringstream in("# hand fixture\n@side two-sided\n@first -1\n-3 R\n0 C 1  # cluster\n\n1 L\n");
  const auto c = read_fixture(in);
  CHECK(c.side == Side::TwoSided);
  CHECK(c.first_index == -1);
  REQUIRE(c.size() == 3);
  CHECK(c.sites[1] == Site::cluster(1));

  for (const char* bad : {"1 X\n", "1 C\n", "abc L\n", "1 L extra\n", "@side sideways\n", "2 L\n1 R\n", "-1 L\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(read_fixture(b), std::invalid_argument);
  }
}

TEST_CASE("csv output") {
  std::istringstream in("1 R\n2 L\n5 C 2\n6 L\n");
  const auto c = read_fixture(in);
  const auto o = resolve(c);
  std::ostringstream col, surv;
  write_collisions_csv(col, o);
  write_survivors_csv(surv, o);
  CHECK(col.str() ==
        "time,position,kind,left_site,right_site,remaining\n"
        "0.5,1.5,arrow-arrow,1,2,0\n"
        "1,5,arrow-cluster,3,4,1\n");
  CHECK(surv.str() == "site,species,remaining\n3,cluster,1\n");
}

TEST_CASE("svg output") {
  std::istringstream in("1 R\n2 L\n5 C 2\n6 L\n9 R\n");
  const auto c = read_fixture(in);
  std::ostringstream svg;
  write_spacetime_svg(svg, c, resolve(c));
  const auto text = svg.str();
  CHECK(text.rfind("<svg", 0) == 0);
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = text.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines == 5);

  ExperimentParams params;
  params.n = kSvgMaxParticles + 1;
  const auto big = sample_config(params, 0);
  std::ostringstream sink;
  CHECK_THROWS_AS(write_spacetime_svg(sink, big, resolve(big)), std::length_error);
}
