#include <sstream>

#include "cba/resolver.hpp"
#include "resolver_detail.hpp"

namespace cba {

Outcome resolve_naive(const Configuration& config) {
  detail::Particles pts(config);
  std::vector<std::int32_t> live(pts.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = static_cast<std::int32_t>(i);

  auto pair_time = [&](std::size_t i) -> std::optional<double> {
    return collision_time(pts.kin(live[i]), pts.kin(live[i + 1]));
  };

  Outcome out;
  while (live.size() >= 2) {
    std::size_t best = live.size();
    double best_time = 0.0, best_pos = 0.0;
    for (std::size_t i = 0; i + 1 < live.size(); ++i) {
      const auto t = pair_time(i);
      if (!t) continue;
      const double x = collision_position(pts.kin(live[i]), pts.kin(live[i + 1]));
      if (best == live.size() || *t < best_time || (*t == best_time && x < best_pos)) {
        best = i;
        best_time = *t;
        best_pos = x;
      }
    }
    if (best == live.size()) break;

    const bool tie_left = best > 0 && pair_time(best - 1) == best_time;
    const bool tie_right = best + 2 < live.size() && pair_time(best + 1) == best_time;
    if (tie_left || tie_right) {
      std::ostringstream msg;
      msg << "simultaneous collisions at a shared particle (t=" << best_time << ", x=" << best_pos << ")";
      throw TripleCollisionError(msg.str());
    }

    const auto applied = detail::apply_collision(pts, live[best], live[best + 1], best_time, best_pos, out.collisions);
    if (applied.right_dead) live.erase(live.begin() + best + 1);
    if (applied.left_dead) live.erase(live.begin() + best);
  }

  for (std::int32_t i : live) out.survivors.push_back(detail::make_survivor(pts, i));
  detail::log_exits(config, pts, live, out);
  return out;
}

} // namespace cba
