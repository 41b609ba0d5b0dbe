#pragma once

#include <iosfwd>

#include "cba/config.hpp"
#include "cba/resolver.hpp"

namespace cba {

/// Line-oriented configuration format, one site per line:
///
///   position species [multiplicity]
///
/// with species `L`, `R` or `C` (cluster; multiplicity required, 0 = vacant).
/// `#` starts a comment. Optional directives before the sites:
/// `@side half-line|two-sided`, `@origin <x>`, `@first <label of first site>`.
/// Defaults: half-line, origin 0, first label 1.
Configuration read_fixture(std::istream& in);

/// Writes every position with 17 significant digits so read_fixture
/// reproduces the configuration exactly.
void write_fixture(std::ostream& out, const Configuration& config);

/// Header `time,position,kind,left_site,right_site,remaining`.
void write_collisions_csv(std::ostream& out, const Outcome& outcome);

/// Header `site,species,remaining`.
void write_survivors_csv(std::ostream& out, const Outcome& outcome);

} // namespace cba
