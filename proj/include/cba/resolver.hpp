#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cba/config.hpp"

namespace cba {

enum class CollisionKind : std::uint8_t { ArrowArrow, ArrowCluster };

/// One annihilation. `left_site`/`right_site` are the two participants in
/// spatial order; for arrow-cluster hits `cluster_right` says which of them
/// is the cluster and `remaining` its multiplicity afterwards.
struct CollisionRecord {
  double time = 0.0;
  double position = 0.0;
  CollisionKind kind = CollisionKind::ArrowArrow;
  std::int64_t left_site = 0;
  std::int64_t right_site = 0;
  bool cluster_right = false;
  std::uint32_t remaining = 0;

  std::int64_t cluster_site() const { return cluster_right ? right_site : left_site; }
  std::int64_t arrow_site() const { return cluster_right ? left_site : right_site; }

  friend bool operator==(const CollisionRecord&, const CollisionRecord&) = default;
};

struct Survivor {
  std::int64_t site = 0;
  Kind kind = Kind::Cluster;
  std::uint32_t remaining = 0;

  friend bool operator==(const Survivor&, const Survivor&) = default;
};

struct Outcome {
  std::vector<CollisionRecord> collisions;  // in execution order
  std::vector<Survivor> survivors;          // in spatial order
  std::vector<double> left_exit_times;      // half-line only, ascending

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Thrown when two pending collisions sharing a particle fall at the same
/// instant (an arrow from each side reaching one cluster together).
class TripleCollisionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Kinematics {
  double position = 0.0;
  int velocity = 0;
};

/// Meeting time of two particles with left.position < right.position, or
/// nothing if they never meet.
std::optional<double> collision_time(Kinematics left, Kinematics right);

/// Meeting point; only meaningful when collision_time is set.
double collision_position(Kinematics left, Kinematics right);

/// Event-driven exact resolution: live particles in a linked list, candidate
/// adjacent-pair collisions in a binary heap with lazy invalidation.
/// O(n log n).
Outcome resolve(const Configuration& config);

/// Reference resolution rescanning every adjacent live pair per event.
/// Quadratic; kept for equivalence testing.
Outcome resolve_naive(const Configuration& config);

struct LeftVisits {
  bool visited = false;
  std::size_t count = 0;
};
LeftVisits origin_visited_by_left(const Outcome& outcome);

enum class FirstFate {
  AnnihilatedWithArrow,
  AnnihilatedWithCluster,
  SurvivedWindow,
  SiteVacantOrNotRightArrow,
};

struct FirstParticleFate {
  FirstFate fate = FirstFate::SiteVacantOrNotRightArrow;
  std::uint32_t cluster_initial_size = 0;  // set for AnnihilatedWithCluster
};

/// Fate of the leftmost site of `config` when it holds a right arrow.
FirstParticleFate first_particle_fate(const Outcome& outcome, const Configuration& config);

struct SurvivorCounts {
  std::uint64_t blockades = 0;  // surviving units, not sites
  std::uint64_t left = 0;
  std::uint64_t right = 0;

  std::int64_t w() const {
    return static_cast<std::int64_t>(blockades) - static_cast<std::int64_t>(left) -
           static_cast<std::int64_t>(right);
  }
};
SurvivorCounts surviving_counts(const Outcome& outcome);

/// Surviving blockade units minus surviving arrows when only sites j..k are
/// present.
std::int64_t W_statistic(const Configuration& config, std::int64_t j, std::int64_t k);

/// Checks survivor ordering and the arrow/unit conservation identities.
/// Returns a description of the first violation found.
std::optional<std::string> find_violation(const Configuration& config, const Outcome& outcome);

} // namespace cba
