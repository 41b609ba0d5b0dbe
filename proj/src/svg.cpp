#include "cba/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace cba {

void write_spacetime_svg(std::ostream& out, const Configuration& config, const Outcome& outcome) {
  if (config.size() > kSvgMaxParticles) {
    throw std::length_error("space-time diagrams are limited to " + std::to_string(kSvgMaxParticles) +
                            " sites; resolve a sub-window instead");
  }

  // Annihilation time per site label; clusters die with their last unit.
  std::unordered_map<std::int64_t, double> death;
  double horizon = 0.0;
  for (const auto& c : outcome.collisions) {
    horizon = std::max(horizon, c.time);
    if (c.kind == CollisionKind::ArrowArrow) {
      death[c.left_site] = c.time;
      death[c.right_site] = c.time;
    } else {
      death[c.arrow_site()] = c.time;
      if (c.remaining == 0) death[c.cluster_site()] = c.time;
    }
  }
  double xmin = config.origin, xmax = config.origin;
  if (config.size()) {
    xmin = std::min(xmin, config.positions.front());
    xmax = std::max(xmax, config.positions.back());
  }
  horizon = horizon > 0.0 ? 1.2 * horizon : std::max(1.0, 0.2 * (xmax - xmin));
  xmin -= horizon * 0.25;
  xmax += horizon * 0.25;

  constexpr double width = 1000.0, height = 700.0, margin = 20.0;
  const double sx = (width - 2 * margin) / std::max(xmax - xmin, std::numeric_limits<double>::min());
  const double sy = (height - 2 * margin) / horizon;
  auto px = [&](double x) { return margin + (x - xmin) * sx; };
  auto py = [&](double t) { return height - margin - t * sy; };

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                px(config.origin), py(0.0), px(config.origin), py(horizon));
  out << buf;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const Site& s = config.sites[i];
    if (s.vacant()) continue;
    const auto it = death.find(config.label(i));
    const double t_end = it == death.end() ? horizon : it->second;
    const double x0 = config.positions[i];
    const double x1 = x0 + s.velocity() * t_end;
    const char* colour = s.kind == Kind::LeftArrow ? "#1f77b4" : s.kind == Kind::RightArrow ? "#d62728" : "#222";
    const double stroke = s.kind == Kind::Cluster ? 1.0 + std::min<double>(s.initial_size, 5) : 1.0;
    std::snprintf(buf, sizeof buf,
                  "<polyline points=\"%.3f,%.3f %.3f,%.3f\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.1f\">"
                  "<title>site %lld</title></polyline>\n",
                  px(x0), py(0.0), px(x1), py(t_end), colour, stroke, static_cast<long long>(config.label(i)));
    out << buf;
  }
  out << "</svg>\n";
}

} // namespace cba
