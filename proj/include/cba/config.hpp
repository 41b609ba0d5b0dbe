#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cba/cluster_law.hpp"
#include "cba/rng.hpp"

namespace cba {

enum class Kind : std::uint8_t { LeftArrow, RightArrow, Cluster };

/// One starting site. Clusters carry their current multiplicity and the size
/// they were sampled with; a cluster of multiplicity 0 is a vacant site.
struct Site {
  Kind kind = Kind::Cluster;
  std::uint32_t multiplicity = 0;
  std::uint32_t initial_size = 0;

  static Site left() { return {Kind::LeftArrow, 0, 0}; }
  static Site right() { return {Kind::RightArrow, 0, 0}; }
  static Site cluster(std::uint32_t m) { return {Kind::Cluster, m, m}; }

  int velocity() const { return kind == Kind::LeftArrow ? -1 : kind == Kind::RightArrow ? 1 : 0; }
  bool is_arrow() const { return kind != Kind::Cluster; }
  bool vacant() const { return kind == Kind::Cluster && multiplicity == 0; }

  friend bool operator==(const Site&, const Site&) = default;
};

enum class Side : std::uint8_t { RightHalfLine, TwoSided };

/// Ordered starting configuration. `first_index` is the site label of
/// sites[0]: half-line samples are labelled 1..n, two-sided samples -n..n
/// with site 0 at the origin.
struct Configuration {
  std::vector<double> positions;
  std::vector<Site> sites;
  double origin = 0.0;
  Side side = Side::RightHalfLine;
  std::int64_t first_index = 1;

  std::size_t size() const { return sites.size(); }
  std::int64_t label(std::size_t offset) const { return first_index + static_cast<std::int64_t>(offset); }
  std::size_t offset(std::int64_t label) const;

  /// Throws std::invalid_argument unless positions are strictly increasing,
  /// lie right of the origin on a half-line, and sizes match.
  void validate() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

class SpacingLaw {
public:
  enum class Family { Exponential, Uniform };

  static SpacingLaw exponential(double rate = 1.0);
  static SpacingLaw uniform(double lo = 0.0, double hi = 1.0);
  /// `exp`, `exp:rate`, `uniform`, `uniform:lo,hi`.
  static SpacingLaw parse(std::string_view spec);

  std::string to_string() const;
  Family family() const { return family_; }

  /// Strictly positive draw.
  double sample(Stream& stream) const;

private:
  Family family_ = Family::Exponential;
  double a_ = 1.0;
  double b_ = 0.0;
};

struct ExperimentParams {
  double p = 0.5;
  ClusterLaw law = ClusterLaw::delta(1);
  SpacingLaw spacing = SpacingLaw::exponential();
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  Side side = Side::RightHalfLine;

  void validate() const;
};

/// Draws the configuration of trial `trial`. Half-line: sites 1..n right of
/// the origin. Two-sided: sites -n..n with site 0 at the origin. Each side
/// uses its own substream, so the right half of a two-sided sample equals
/// the half-line sample of the same (seed, trial).
Configuration sample_config(const ExperimentParams& params, std::uint64_t trial);

/// Sites -n..-1 of the two-sided sample for (seed, trial), without drawing
/// the centre or the right half.
Configuration sample_left_window(const ExperimentParams& params, std::uint64_t trial);

/// Restriction to sites with labels j..k. Positions are not re-based.
Configuration sub_config(const Configuration& config, std::int64_t j, std::int64_t k);

/// Total blockade units (sum of multiplicities) and arrow counts.
struct ParticleCounts {
  std::uint64_t blockade_units = 0;
  std::uint64_t left = 0;
  std::uint64_t right = 0;
};
ParticleCounts count_particles(const Configuration& config);

} // namespace cba
