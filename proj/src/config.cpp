#include "cba/config.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cba {

std::size_t Configuration::offset(std::int64_t label) const {
  const std::int64_t off = label - first_index;
  if (off < 0 || off >= static_cast<std::int64_t>(sites.size())) {
    throw std::out_of_range("site " + std::to_string(label) + " not in configuration");
  }
  return static_cast<std::size_t>(off);
}

void Configuration::validate() const {
  if (positions.size() != sites.size()) throw std::invalid_argument("positions and sites differ in length");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!std::isfinite(positions[i])) throw std::invalid_argument("non-finite position");
    if (i > 0 && !(positions[i] > positions[i - 1])) {
      throw std::invalid_argument("positions must be strictly increasing (site " + std::to_string(label(i)) + ")");
    }
    if (sites[i].kind != Kind::Cluster && sites[i].multiplicity != 0) {
      throw std::invalid_argument("arrows carry no multiplicity");
    }
  }
  if (side == Side::RightHalfLine && !positions.empty() && !(positions.front() > origin)) {
    throw std::invalid_argument("half-line configuration has a site at or left of the origin");
  }
}

SpacingLaw SpacingLaw::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
  SpacingLaw s;
  s.family_ = Family::Exponential;
  s.a_ = rate;
  return s;
}

SpacingLaw SpacingLaw::uniform(double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo)) throw std::invalid_argument("uniform spacing needs 0 <= lo < hi");
  SpacingLaw s;
  s.family_ = Family::Uniform;
  s.a_ = lo;
  s.b_ = hi;
  return s;
}

SpacingLaw SpacingLaw::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string_view::npos) {
    std::string rest(spec.substr(colon + 1));
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      auto tok = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t used = 0;
      try {
        args.push_back(std::stod(tok, &used));
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok.empty()) throw std::invalid_argument("bad spacing parameter '" + tok + "'");
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (name == "exp" || name == "exponential") {
    if (args.empty()) return exponential();
    if (args.size() == 1) return exponential(args[0]);
  } else if (name == "uniform") {
    if (args.empty()) return uniform();
    if (args.size() == 2) return uniform(args[0], args[1]);
  } else {
    throw std::invalid_argument("unknown spacing law '" + std::string(spec) + "'");
  }
  throw std::invalid_argument("wrong parameter count for spacing law '" + std::string(spec) + "'");
}

std::string SpacingLaw::to_string() const {
  char buf[96];
  if (family_ == Family::Exponential) {
    std::snprintf(buf, sizeof buf, "exp:%.17g", a_);
  } else {
    std::snprintf(buf, sizeof buf, "uniform:%.17g,%.17g", a_, b_);
  }
  return buf;
}

double SpacingLaw::sample(Stream& stream) const {
  const double u = stream.uniform_open();
  if (family_ == Family::Exponential) return -std::log(u) / a_;
  return a_ + (b_ - a_) * u;
}

void ExperimentParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (n == 0) throw std::invalid_argument("n must be positive");
}

namespace {

Site draw_site(double p, const ClusterLaw& law, Stream& stream) {
  // One uniform decides cluster, left or right: given u >= p it is uniform
  // on [p, 1), so each arrow direction has conditional probability 1/2.
  const double u = stream.uniform();
  if (u < p) return Site::cluster(law.sample(stream));
  return u < p + 0.5 * (1.0 - p) ? Site::left() : Site::right();
}

} // namespace

Configuration sample_left_window(const ExperimentParams& params, std::uint64_t trial) {
  params.validate();
  const std::size_t n = params.n;
  Configuration c;
  c.side = Side::TwoSided;
  c.first_index = -static_cast<std::int64_t>(n);
  c.positions.resize(n);
  c.sites.resize(n);
  Stream left(params.seed, trial, 1);
  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x -= params.spacing.sample(left);
    c.positions[n - 1 - i] = x;
    c.sites[n - 1 - i] = draw_site(params.p, params.law, left);
  }
  return c;
}

Configuration sample_config(const ExperimentParams& params, std::uint64_t trial) {
  params.validate();
  Configuration c;
  c.side = Side::RightHalfLine;
  c.first_index = 1;
  const std::size_t n = params.n;
  c.positions.resize(n);
  c.sites.resize(n);
  Stream right(params.seed, trial, 0);
  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x += params.spacing.sample(right);
    c.positions[i] = x;
    c.sites[i] = draw_site(params.p, params.law, right);
  }
  if (params.side == Side::RightHalfLine) return c;

  Configuration full = sample_left_window(params, trial);
  Stream centre(params.seed, trial, 2);
  full.positions.push_back(0.0);
  full.sites.push_back(draw_site(params.p, params.law, centre));
  full.positions.insert(full.positions.end(), c.positions.begin(), c.positions.end());
  full.sites.insert(full.sites.end(), c.sites.begin(), c.sites.end());
  return full;
}

Configuration sub_config(const Configuration& config, std::int64_t j, std::int64_t k) {
  if (j > k) throw std::out_of_range("sub_config needs j <= k");
  const std::size_t a = config.offset(j);
  const std::size_t b = config.offset(k);
  Configuration c;
  c.origin = config.origin;
  c.side = config.side;
  c.first_index = j;
  c.positions.assign(config.positions.begin() + a, config.positions.begin() + b + 1);
  c.sites.assign(config.sites.begin() + a, config.sites.begin() + b + 1);
  return c;
}

ParticleCounts count_particles(const Configuration& config) {
  ParticleCounts out;
  for (const Site& s : config.sites) {
    switch (s.kind) {
      case Kind::LeftArrow: ++out.left; break;
      case Kind::RightArrow: ++out.right; break;
      case Kind::Cluster: out.blockade_units += s.multiplicity; break;
    }
  }
  return out;
}

} // namespace cba
