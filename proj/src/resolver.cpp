#include "cba/resolver.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <sstream>

#include "resolver_detail.hpp"

namespace cba {

std::optional<double> collision_time(Kinematics left, Kinematics right) {
  if (left.velocity <= right.velocity) return std::nullopt;
  return (right.position - left.position) / static_cast<double>(left.velocity - right.velocity);
}

double collision_position(Kinematics left, Kinematics right) {
  if (left.velocity == 0) return left.position;
  if (right.velocity == 0) return right.position;
  return 0.5 * (left.position + right.position);
}

namespace {

// Sorts records with a nonnegative finite .time by (time, less). The bit
// pattern of such a double orders like the value, so an LSD radix pass does
// the bulk; only runs of exactly equal times fall back to the comparator.
template <class T, class Less>
void sort_by_time(std::vector<T>& v, Less less) {
  if (v.size() < 512) {
    std::sort(v.begin(), v.end(), less);
    return;
  }
  constexpr int kBits = 11;
  constexpr std::size_t kBuckets = std::size_t{1} << kBits;
  const auto key = [](const T& x) {
    std::uint64_t k;
    std::memcpy(&k, &x.time, sizeof k);
    return k;
  };
  std::vector<T> tmp(v.size());
  std::array<std::size_t, kBuckets> count;
  for (int shift = 0; shift < 64; shift += kBits) {
    count.fill(0);
    for (const T& x : v) ++count[(key(x) >> shift) & (kBuckets - 1)];
    if (count[(key(v.front()) >> shift) & (kBuckets - 1)] == v.size()) continue;
    std::size_t sum = 0;
    for (auto& c : count) {
      const std::size_t here = c;
      c = sum;
      sum += here;
    }
    for (const T& x : v) tmp[count[(key(x) >> shift) & (kBuckets - 1)]++] = x;
    v.swap(tmp);
  }
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i + 1;
    while (j < v.size() && v[j].time == v[i].time) ++j;
    if (j - i > 1) std::sort(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(j), less);
    i = j;
  }
}

struct Event {
  double time;
  std::int32_t left;
  std::int32_t right;
};

// Pending events in (time, position) order: equal times resolve leftmost
// first, and positions are only computed on ties. Events known at the start
// are sorted once; events created while resolving go to a four-ary heap,
// which stays small because the number of live particles keeps falling.
class EventQueue {
 public:
  explicit EventQueue(const detail::Particles& pts) : pts_(pts) {}

  void add_initial(const Event& e) { initial_.push_back(e); }
  void start() {
    sort_by_time(initial_, [this](const Event& a, const Event& b) { return earlier(a, b); });
  }
  bool empty() const { return next_ == initial_.size() && h_.empty(); }

  void push(const Event& e) {
    std::size_t i = h_.size();
    h_.push_back(e);
    while (i > 0) {
      const std::size_t parent = (i - 1) / 4;
      if (!earlier(e, h_[parent])) break;
      h_[i] = h_[parent];
      i = parent;
    }
    h_[i] = e;
  }

  Event pop() {
    if (h_.empty() || (next_ < initial_.size() && earlier(initial_[next_], h_.front()))) return initial_[next_++];
    const Event top = h_.front();
    const Event last = h_.back();
    h_.pop_back();
    if (!h_.empty()) sift_down(last);
    return top;
  }

  double position(const Event& e) const { return collision_position(pts_.kin(e.left), pts_.kin(e.right)); }

 private:
  bool earlier(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time < b.time;
    return position(a) < position(b);
  }

  void sift_down(const Event& e) {
    const std::size_t n = h_.size();
    std::size_t i = 0;
    for (;;) {
      const std::size_t first = 4 * i + 1;
      if (first >= n) break;
      std::size_t best = first;
      const std::size_t end = std::min(first + 4, n);
      for (std::size_t c = first + 1; c < end; ++c) {
        if (earlier(h_[c], h_[best])) best = c;
      }
      if (!earlier(h_[best], e)) break;
      h_[i] = h_[best];
      i = best;
    }
    h_[i] = e;
  }

  const detail::Particles& pts_;
  std::vector<Event> initial_;
  std::size_t next_ = 0;
  std::vector<Event> h_;
};

} // namespace

Outcome resolve(const Configuration& config) {
  detail::Particles pts(config);
  const auto m = static_cast<std::int32_t>(pts.size());
  auto& part = pts.p;

  auto unlink = [&](std::int32_t i) {
    auto& x = part[i];
    x.alive = false;
    if (x.prev >= 0) part[x.prev].next = x.next;
    if (x.next >= 0) part[x.next].prev = x.prev;
  };

  // A right arrow and the next left arrow with only annihilated arrow pairs
  // between them always meet, so these matches are made up front, bracket
  // style, with blockades closing every open bracket. No simultaneous-
  // collision check can involve such a pair.
  std::vector<CollisionRecord> matched;
  {
    std::vector<std::int32_t> open;
    for (std::int32_t i = 0; i < m; ++i) {
      const int v = part[i].vel;
      if (v > 0) {
        open.push_back(i);
      } else if (v == 0) {
        open.clear();
      } else if (!open.empty()) {
        const std::int32_t l = open.back();
        open.pop_back();
        const auto a = pts.kin(l), b = pts.kin(i);
        detail::apply_collision(pts, l, i, *collision_time(a, b), collision_position(a, b), matched);
        unlink(l);
        unlink(i);
      }
    }
  }

  EventQueue heap(pts);
  auto candidate = [&](std::int32_t l, std::int32_t r) -> std::optional<Event> {
    if (l < 0 || r < 0 || !pts.approaching(l, r)) return std::nullopt;
    return Event{*collision_time(pts.kin(l), pts.kin(r)), l, r};
  };
  for (std::int32_t i = 0; i < m; ++i) {
    if (!part[i].alive) continue;
    if (auto e = candidate(i, part[i].next)) heap.add_initial(*e);
  }
  heap.start();

  auto same_time = [&](std::int32_t l, std::int32_t r, double t) {
    if (l < 0 || r < 0) return false;
    const auto tt = collision_time(pts.kin(l), pts.kin(r));
    return tt && *tt == t;
  };

  std::vector<CollisionRecord> scheduled;
  scheduled.reserve(m / 2 + 1);
  while (!heap.empty()) {
    const Event e = heap.pop();
    if (!part[e.left].alive || !part[e.right].alive || part[e.left].next != e.right) continue;
    const double position = heap.position(e);

    if (same_time(part[e.left].prev, e.left, e.time) || same_time(e.right, part[e.right].next, e.time)) {
      std::ostringstream msg;
      msg << "simultaneous collisions at a shared particle (t=" << e.time << ", x=" << position << ")";
      throw TripleCollisionError(msg.str());
    }

    const std::int32_t outer_left = part[e.left].prev;
    const std::int32_t outer_right = part[e.right].next;
    const auto applied = detail::apply_collision(pts, e.left, e.right, e.time, position, scheduled);
    if (applied.left_dead) unlink(e.left);
    if (applied.right_dead) unlink(e.right);
    const std::int32_t l = applied.left_dead ? outer_left : e.left;
    const std::int32_t r = applied.right_dead ? outer_right : e.right;
    if (auto next = candidate(l, r)) heap.push(*next);
  }

  auto by_time = [](const CollisionRecord& a, const CollisionRecord& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.position < b.position;
  };
  struct Key {
    double time;
    double position;
    std::uint32_t index;
  };
  std::vector<Key> keys(matched.size());
  for (std::size_t i = 0; i < matched.size(); ++i) {
    keys[i] = {matched[i].time, matched[i].position, static_cast<std::uint32_t>(i)};
  }
  sort_by_time(keys, [](const Key& a, const Key& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.position < b.position;
  });
  Outcome out;
  out.collisions.reserve(matched.size() + scheduled.size());
  auto it = scheduled.begin();
  for (const Key& k : keys) {
    const CollisionRecord& rec = matched[k.index];
    while (it != scheduled.end() && by_time(*it, rec)) out.collisions.push_back(*it++);
    out.collisions.push_back(rec);
  }
  out.collisions.insert(out.collisions.end(), it, scheduled.end());

  std::vector<std::int32_t> alive_ids;
  for (std::int32_t i = 0; i < m; ++i) {
    if (part[i].alive) alive_ids.push_back(i);
  }
  out.survivors.reserve(alive_ids.size());
  for (std::int32_t i : alive_ids) out.survivors.push_back(detail::make_survivor(pts, i));
  detail::log_exits(config, pts, alive_ids, out);
  return out;
}

LeftVisits origin_visited_by_left(const Outcome& outcome) {
  return {!outcome.left_exit_times.empty(), outcome.left_exit_times.size()};
}

FirstParticleFate first_particle_fate(const Outcome& outcome, const Configuration& config) {
  FirstParticleFate out;
  if (config.size() == 0 || config.sites.front().kind != Kind::RightArrow) return out;
  const std::int64_t site = config.first_index;
  for (const auto& c : outcome.collisions) {
    if (c.left_site != site) continue;
    if (c.kind == CollisionKind::ArrowArrow) {
      out.fate = FirstFate::AnnihilatedWithArrow;
    } else {
      out.fate = FirstFate::AnnihilatedWithCluster;
      out.cluster_initial_size = config.sites[config.offset(c.right_site)].initial_size;
    }
    return out;
  }
  out.fate = FirstFate::SurvivedWindow;
  return out;
}

SurvivorCounts surviving_counts(const Outcome& outcome) {
  SurvivorCounts out;
  for (const auto& s : outcome.survivors) {
    switch (s.kind) {
      case Kind::LeftArrow: ++out.left; break;
      case Kind::RightArrow: ++out.right; break;
      case Kind::Cluster: out.blockades += s.remaining; break;
    }
  }
  return out;
}

std::int64_t W_statistic(const Configuration& config, std::int64_t j, std::int64_t k) {
  return surviving_counts(resolve(sub_config(config, j, k))).w();
}

std::optional<std::string> find_violation(const Configuration& config, const Outcome& outcome) {
  int last_velocity = -1;
  for (const auto& s : outcome.survivors) {
    const int v = s.kind == Kind::LeftArrow ? -1 : s.kind == Kind::RightArrow ? 1 : 0;
    if (v < last_velocity) return "survivors not ordered left < blockade < right at site " + std::to_string(s.site);
    last_velocity = v;
    if (s.kind == Kind::Cluster && s.remaining == 0) return "empty cluster listed as survivor";
  }
  for (std::size_t i = 1; i < outcome.collisions.size(); ++i) {
    if (outcome.collisions[i].time < outcome.collisions[i - 1].time) return "collision times decrease";
  }
  const auto initial = count_particles(config);
  const auto final = surviving_counts(outcome);
  std::uint64_t arrow_arrow = 0, arrow_cluster = 0;
  for (const auto& c : outcome.collisions) {
    (c.kind == CollisionKind::ArrowArrow ? arrow_arrow : arrow_cluster) += 1;
  }
  if (initial.left + initial.right - final.left - final.right != 2 * arrow_arrow + arrow_cluster) {
    return "arrow conservation violated";
  }
  if (initial.blockade_units - final.blockades != arrow_cluster) return "blockade-unit conservation violated";
  if (config.side == Side::RightHalfLine && outcome.left_exit_times.size() != final.left) {
    return "left exits do not match surviving left arrows";
  }
  return std::nullopt;
}

} // namespace cba
