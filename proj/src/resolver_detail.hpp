#pragma once

// Pieces shared by the heap scheduler and the rescanning reference so both
// build identical records.

#include <cstdint>
#include <vector>

#include "cba/resolver.hpp"

namespace cba::detail {

/// Non-vacant particles in spatial order, one cache line apart at most:
/// the scheduler touches them in time order, which is spatially random.
struct Particle {
  double pos;
  std::int64_t label;
  std::uint32_t mult;
  std::int32_t prev;
  std::int32_t next;
  std::int8_t vel;
  bool alive;
};

struct Particles {
  std::vector<Particle> p;

  explicit Particles(const Configuration& config) {
    config.validate();
    const std::size_t n = config.size();
    p.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Site& s = config.sites[i];
      if (s.vacant()) continue;
      const auto id = static_cast<std::int32_t>(p.size());
      p.push_back({config.positions[i], config.label(i), s.multiplicity, id - 1, id + 1,
                   static_cast<std::int8_t>(s.velocity()), true});
    }
    if (!p.empty()) p.back().next = -1;
  }

  std::size_t size() const { return p.size(); }
  Kinematics kin(std::int32_t i) const { return {p[i].pos, p[i].vel}; }
  bool approaching(std::int32_t l, std::int32_t r) const { return p[l].vel > p[r].vel; }
};

/// Applies the collision between adjacent live particles l < r: records it,
/// decrements multiplicities, and reports which of the two died.
struct Applied {
  bool left_dead = false;
  bool right_dead = false;
};

inline Applied apply_collision(Particles& pts, std::int32_t l, std::int32_t r, double time,
                               double position, std::vector<CollisionRecord>& log) {
  CollisionRecord rec;
  rec.time = time;
  rec.position = position;
  rec.left_site = pts.p[l].label;
  rec.right_site = pts.p[r].label;
  Applied out;
  if (pts.p[l].vel != 0 && pts.p[r].vel != 0) {
    rec.kind = CollisionKind::ArrowArrow;
    out.left_dead = out.right_dead = true;
  } else {
    rec.kind = CollisionKind::ArrowCluster;
    rec.cluster_right = pts.p[r].vel == 0;
    const std::int32_t c = rec.cluster_right ? r : l;
    rec.remaining = --pts.p[c].mult;
    if (rec.cluster_right) {
      out.left_dead = true;
      out.right_dead = rec.remaining == 0;
    } else {
      out.right_dead = true;
      out.left_dead = rec.remaining == 0;
    }
  }
  log.push_back(rec);
  return out;
}

inline Survivor make_survivor(const Particles& pts, std::int32_t i) {
  const Particle& q = pts.p[i];
  const Kind kind = q.vel < 0 ? Kind::LeftArrow : q.vel > 0 ? Kind::RightArrow : Kind::Cluster;
  return {q.label, kind, kind == Kind::Cluster ? q.mult : 0u};
}

inline void log_exits(const Configuration& config, const Particles& pts, const std::vector<std::int32_t>& alive_ids,
                      Outcome& out) {
  if (config.side != Side::RightHalfLine) return;
  for (std::int32_t i : alive_ids) {
    if (pts.p[i].vel < 0) out.left_exit_times.push_back(pts.p[i].pos - config.origin);
  }
}

} // namespace cba::detail
