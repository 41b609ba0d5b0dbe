#include "cba/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cba {
namespace {

void check_closed_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error(std::string(what) + " outside [0, 1]");
}

bool is_geometric(const ClusterLaw& law) { return law.family() == ClusterLaw::Family::Geometric; }

double geometric_beta(const ClusterLaw& law) { return law.pmf(1); }

// P(X >= j) for j = 0..K on a finite support.
std::vector<double> tail_table(const ClusterLaw& law) {
  const std::uint64_t kmax = law.support_max();
  std::vector<double> tail(kmax + 2, 0.0);
  for (std::uint64_t k = kmax + 1; k-- > 0;) tail[k] = tail[k + 1] + law.pmf(k);
  return tail;
}

// Largest cluster size worth summing over: the support bound, or the point
// past which the geometric tail mass drops below 1e-17.
std::uint64_t summation_limit(const ClusterLaw& law) {
  if (!is_geometric(law)) return law.support_max();
  const double beta = geometric_beta(law);
  if (beta >= 1.0 - 1e-12) return 1;
  return static_cast<std::uint64_t>(std::ceil(std::log(1e-17) / std::log1p(-beta))) + 1;
}

// sum_{j>=1} j v^j P(X >= j)
double weighted_tail_series(const ClusterLaw& law, double v) {
  if (is_geometric(law)) {
    const double d = 1.0 - (1.0 - geometric_beta(law)) * v;
    return v / (d * d);
  }
  const auto tail = tail_table(law);
  double acc = 0.0, pw = 1.0;
  for (std::size_t j = 1; j + 1 < tail.size(); ++j) {
    pw *= v;
    acc += static_cast<double>(j) * pw * tail[j];
  }
  return acc;
}

// (1 - f(q)) / (1 - q) = sum_{j>=1} q^(j-1) P(X >= j)
double tail_generating(const ClusterLaw& law, double q) {
  if (is_geometric(law)) return 1.0 / (1.0 - (1.0 - geometric_beta(law)) * q);
  const auto tail = tail_table(law);
  double acc = 0.0, pw = 1.0;
  for (std::size_t j = 1; j + 1 < tail.size(); ++j) {
    acc += pw * tail[j];
    pw *= q;
  }
  return acc;
}

} // namespace

double pc(const Moments& m) {
  if (!std::isfinite(m.variance) || !std::isfinite(m.mean)) return 0.0;
  return 1.0 / ((m.mean + 1.0) * (m.mean + 1.0) + m.variance);
}

double pc(const ClusterLaw& law) { return pc(law.moments()); }

double fixed_point_denominator(const ClusterLaw& law, double v) {
  check_closed_unit(v, "v");
  return 1.0 + v * v - 2.0 * v * law.pgf(v) - v * v * (1.0 - v * v) * law.pgf_d1(v);
}

double F_of_v(const ClusterLaw& law, double v) {
  check_closed_unit(v, "v");
  const double e = 1.0 + v * v * law.pgf_d1(v) + 2.0 * weighted_tail_series(law, v);
  if (!(e > 0.0) || !std::isfinite(e)) {
    throw SingularDenominatorError("fixed-point denominator is not positive at v=" + std::to_string(v));
  }
  return 1.0 / e;
}

double solve_q(const ClusterLaw& law, double p) {
  check_closed_unit(p, "p");
  const double critical = pc(law);
  if (p <= critical) return 1.0;
  if (p >= 1.0) return 0.0;

  double lo = 0.0, hi = 1.0;
  if (!(F_of_v(law, lo) >= p && F_of_v(law, hi) <= p)) {
    throw BracketError("cannot bracket F(v) = " + std::to_string(p) + " on [0, 1]");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F_of_v(law, mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double q_geometric_closed(double beta, double p) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("beta outside (0, 1)");
  const double critical = pc(ClusterLaw::geometric(beta).moments());
  if (!(p >= critical * (1.0 - 1e-15) && p <= 1.0)) {
    throw std::domain_error("closed-form q needs p in [pc, 1]");
  }
  const double disc = std::max(0.0, p * p * beta - p * p - p * beta + 2.0 * p);
  const double num = std::sqrt(disc) - p * beta + beta - 1.0;
  const double den = p * beta * beta - p * beta + p - beta * beta + 2.0 * beta - 1.0;
  return num / den;
}

double theta_from_q(double q) {
  check_closed_unit(q, "q");
  return (1.0 - q) * (1.0 - q);
}

double s_formula(const ClusterLaw& law, double p, double q) {
  check_closed_unit(q, "q");
  return 0.5 * p * q * q * law.pgf_d1(q);
}

double sk_formula(const ClusterLaw& law, double p, double q, std::uint64_t k) {
  check_closed_unit(q, "q");
  return p * law.pmf(k) * std::pow(q, static_cast<double>(k + 1)) * (0.5 * static_cast<double>(k));
}

double r_formula(const ClusterLaw& law, double p, double q) {
  check_closed_unit(q, "q");
  return p * q * (tail_generating(law, q) - q * law.pgf_d1(q));
}

double rk_formula(const ClusterLaw& law, double p, double q, std::uint64_t k) {
  check_closed_unit(q, "q");
  // (k q^(k+1) - k q^k - q^k + 1) / (1 - q) = sum_{i<k} (q^i - q^k)
  const double qk = std::pow(q, static_cast<double>(k));
  double acc = 0.0, pw = 1.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    acc += pw - qk;
    pw *= q;
  }
  return p * law.pmf(k) * q * acc;
}

double arrow_arrow_formula(const ClusterLaw& law, double p, double q) {
  return 0.5 * (1.0 - p) - s_formula(law, p, q) - r_formula(law, p, q);
}

double recursion_residual(const ClusterLaw& law, double p, double q) {
  const double s = s_formula(law, p, q);
  const double r = r_formula(law, p, q);
  const double half = 0.5 * (1.0 - p);
  const double rhs = half + p * q * law.pgf(q) + s + q * (half - s - r);
  return rhs - q;
}

double blockade_density(const ClusterLaw& law, double p, double q) {
  check_closed_unit(q, "q");
  const std::uint64_t kmax = summation_limit(law);
  const double w = (1.0 - q) * (1.0 - q);
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    const double mk = law.pmf(k);
    if (mk == 0.0) continue;
    // P(A + B = s) = (s + 1) q^s (1 - q)^2
    double inner = 0.0, pw = 1.0;
    for (std::uint64_t s = 0; s < k; ++s) {
      inner += static_cast<double>(k - s) * static_cast<double>(s + 1) * pw * w;
      pw *= q;
    }
    acc += mk * inner;
  }
  return p * acc;
}

AnalyticCurve tabulate_curve(const ClusterLaw& law, std::span<const double> p_grid) {
  AnalyticCurve curve{law, pc(law), {}};
  curve.points.reserve(p_grid.size());
  for (double p : p_grid) {
    const double q = solve_q(law, p);
    curve.points.push_back({p, q, theta_from_q(q)});
  }
  return curve;
}

} // namespace cba
