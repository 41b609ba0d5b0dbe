#pragma once

#include <cstddef>
#include <iosfwd>

#include "cba/config.hpp"
#include "cba/resolver.hpp"

namespace cba {

inline constexpr std::size_t kSvgMaxParticles = 5000;

/// Space-time diagram: x is position, y is time (t = 0 at the bottom), one
/// polyline per particle ending where it is annihilated. Throws
/// std::length_error above kSvgMaxParticles sites.
void write_spacetime_svg(std::ostream& out, const Configuration& config, const Outcome& outcome);

} // namespace cba
