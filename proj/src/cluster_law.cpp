#include "cba/cluster_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cba {
namespace {

void check_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("generating function argument outside [0, 1]: " +
                            std::to_string(t));
  }
}

double parse_real(std::string_view s) {
  std::string buf(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + buf + "'");
  }
  if (used != buf.size()) throw std::invalid_argument("not a number: '" + buf + "'");
  return v;
}

std::uint32_t parse_count(std::string_view s) {
  double v = parse_real(s);
  if (v < 0 || v != std::floor(v) || v > 4.0e9) {
    throw std::invalid_argument("expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return static_cast<std::uint32_t>(v);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

ClusterLaw ClusterLaw::delta(std::uint32_t k) {
  ClusterLaw law;
  law.family_ = Family::Delta;
  law.k_ = k;
  law.pmf_.assign(k + 1, 0.0);
  law.pmf_[k] = 1.0;
  law.build_table();
  return law;
}

ClusterLaw ClusterLaw::geometric(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("geometric parameter must lie in (0, 1)");
  ClusterLaw law;
  law.family_ = Family::Geometric;
  law.beta_ = beta;
  return law;
}

ClusterLaw ClusterLaw::two_point(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("two-point law needs k >= 1");
  ClusterLaw law;
  law.family_ = Family::TwoPoint;
  law.k_ = k;
  law.pmf_.assign(k + 1, 0.0);
  law.pmf_[0] = static_cast<double>(k - 1) / k;
  law.pmf_[k] += 1.0 / k;
  law.build_table();
  return law;
}

ClusterLaw ClusterLaw::custom(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("empty pmf");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("pmf weights must be finite and nonnegative");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("pmf weights sum to " + fmt_real(total) + ", expected 1");
  }
  for (double& w : weights) w /= total;
  while (weights.size() > 1 && weights.back() == 0.0) weights.pop_back();
  ClusterLaw law;
  law.family_ = Family::CustomPmf;
  law.pmf_ = std::move(weights);
  law.build_table();
  return law;
}

ClusterLaw ClusterLaw::power_law(double alpha, std::uint32_t cutoff) {
  if (!(alpha > 1.0)) throw std::invalid_argument("power-law exponent must exceed 1");
  if (cutoff < 1) throw std::invalid_argument("power-law cutoff must be >= 1");
  ClusterLaw law;
  law.family_ = Family::PowerLaw;
  law.alpha_ = alpha;
  law.k_ = cutoff;
  law.pmf_.assign(cutoff + 1, 0.0);
  double total = 0.0;
  // Smallest terms first.
  for (std::uint32_t k = cutoff; k >= 1; --k) {
    law.pmf_[k] = std::pow(static_cast<double>(k), -alpha);
    total += law.pmf_[k];
  }
  for (double& w : law.pmf_) w /= total;
  law.build_table();
  return law;
}

void ClusterLaw::build_table() {
  cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

ClusterLaw ClusterLaw::parse(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("law spec must look like name:params, got '" + std::string(spec) + "'");
  }
  const auto name = spec.substr(0, colon);
  const auto args = split(spec.substr(colon + 1), ',');
  auto want = [&](std::size_t n) {
    if (args.size() != n) {
      throw std::invalid_argument("law '" + std::string(name) + "' takes " + std::to_string(n) + " parameter(s)");
    }
  };
  if (name == "delta") {
    want(1);
    return delta(parse_count(args[0]));
  }
  if (name == "geom") {
    want(1);
    return geometric(parse_real(args[0]));
  }
  if (name == "twopoint") {
    want(1);
    return two_point(parse_count(args[0]));
  }
  if (name == "pmf") {
    std::vector<double> w;
    for (auto a : args) w.push_back(parse_real(a));
    return custom(std::move(w));
  }
  if (name == "powerlaw") {
    want(2);
    return power_law(parse_real(args[0]), parse_count(args[1]));
  }
  throw std::invalid_argument("unknown law family '" + std::string(name) + "'");
}

std::string ClusterLaw::to_string() const {
  switch (family_) {
    case Family::Delta: return "delta:" + std::to_string(k_);
    case Family::Geometric: return "geom:" + fmt_real(beta_);
    case Family::TwoPoint: return "twopoint:" + std::to_string(k_);
    case Family::PowerLaw: return "powerlaw:" + fmt_real(alpha_) + "," + std::to_string(k_);
    case Family::CustomPmf: {
      std::string s = "pmf:";
      for (std::size_t i = 0; i < pmf_.size(); ++i) {
        if (i) s += ',';
        s += fmt_real(pmf_[i]);
      }
      return s;
    }
  }
  return {};
}

double ClusterLaw::pmf(std::uint64_t k) const {
  if (family_ == Family::Geometric) {
    if (k == 0) return 0.0;
    return std::pow(1.0 - beta_, static_cast<double>(k - 1)) * beta_;
  }
  return k < pmf_.size() ? pmf_[k] : 0.0;
}

std::uint64_t ClusterLaw::support_max() const {
  return family_ == Family::Geometric ? 0 : pmf_.size() - 1;
}

double ClusterLaw::pgf(double t) const {
  check_unit_interval(t);
  switch (family_) {
    case Family::Delta: return std::pow(t, k_);
    case Family::Geometric: return beta_ * t / (1.0 - (1.0 - beta_) * t);
    case Family::TwoPoint: return (k_ - 1.0) / k_ + std::pow(t, k_) / k_;
    default: break;
  }
  double acc = 0.0;
  for (std::size_t k = pmf_.size(); k-- > 0;) acc = acc * t + pmf_[k];
  return acc;
}

double ClusterLaw::pgf_d1(double t) const {
  check_unit_interval(t);
  switch (family_) {
    case Family::Delta: return k_ == 0 ? 0.0 : k_ * std::pow(t, k_ - 1);
    case Family::Geometric: {
      const double d = 1.0 - (1.0 - beta_) * t;
      return beta_ / (d * d);
    }
    case Family::TwoPoint: return std::pow(t, k_ - 1);
    default: break;
  }
  double acc = 0.0;
  for (std::size_t k = pmf_.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * pmf_[k];
  return acc;
}

double ClusterLaw::pgf_d2(double t) const {
  check_unit_interval(t);
  switch (family_) {
    case Family::Delta: return k_ < 2 ? 0.0 : k_ * (k_ - 1.0) * std::pow(t, k_ - 2);
    case Family::Geometric: {
      const double d = 1.0 - (1.0 - beta_) * t;
      return 2.0 * beta_ * (1.0 - beta_) / (d * d * d);
    }
    case Family::TwoPoint: return k_ < 2 ? 0.0 : (k_ - 1.0) * std::pow(t, k_ - 2);
    default: break;
  }
  double acc = 0.0;
  for (std::size_t k = pmf_.size(); k-- > 2;) {
    acc = acc * t + static_cast<double>(k) * static_cast<double>(k - 1) * pmf_[k];
  }
  return acc;
}

Moments ClusterLaw::moments() const {
  const double mean = pgf_d1(1.0);
  const double d2 = pgf_d2(1.0);
  if (!std::isfinite(d2)) return {mean, std::numeric_limits<double>::infinity()};
  return {mean, std::max(0.0, d2 + mean - mean * mean)};
}

std::uint32_t ClusterLaw::sample(Stream& stream) const {
  switch (family_) {
    case Family::Delta: return k_;
    case Family::Geometric: {
      const double u = stream.uniform_open();
      const double k = std::floor(std::log(u) / std::log1p(-beta_));
      return 1 + static_cast<std::uint32_t>(std::min(k, 4.0e9));
    }
    case Family::TwoPoint: return stream.uniform() * k_ < 1.0 ? k_ : 0;
    default: break;
  }
  const double u = stream.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

} // namespace cba
