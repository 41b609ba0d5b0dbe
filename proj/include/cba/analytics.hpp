#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "cba/cluster_law.hpp"

namespace cba {

class BracketError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularDenominatorError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Critical cluster-site density 1 / ((mean + 1)^2 + variance); 0 when the
/// variance is infinite.
double pc(const Moments& m);
double pc(const ClusterLaw& law);

/// Denominator D(v) = 1 + v^2 - 2 v f(v) - v^2 (1 - v^2) f'(v), evaluated
/// term by term. Loses all precision as v -> 1; use F_of_v for the ratio.
double fixed_point_denominator(const ClusterLaw& law, double v);

/// F(v) = (1 - v)^2 / D(v), the cluster density at which the half-line visit
/// probability equals v. Evaluated as 1 / E(v) with
///   E(v) = D(v) / (1 - v)^2 = 1 + v^2 f'(v) + 2 sum_{j>=1} j v^j P(X >= j),
/// which is a power series with nonnegative coefficients: F decreases
/// strictly from F(0) = 1 to F(1) = pc. Domain v in [0, 1].
double F_of_v(const ClusterLaw& law, double v);

/// Probability q(p) that the origin is visited by a left arrow. 1 for
/// p <= pc, otherwise the root of F(v) = p found by bisection.
double solve_q(const ClusterLaw& law, double p);

/// Closed form of q(p) for the geometric law. Throws std::domain_error for
/// p outside [pc, 1].
double q_geometric_closed(double beta, double p);

double theta_from_q(double q);

/// s = P(origin visited, first right arrow stopped by a cluster).
double s_formula(const ClusterLaw& law, double p, double q);
double sk_formula(const ClusterLaw& law, double p, double q, std::uint64_t k);

/// r = P(origin not visited, first right arrow stopped by a cluster).
/// Uses (1 - f(q)) / (1 - q) = sum_j q^(j-1) P(X >= j), so q = 1 is allowed.
double r_formula(const ClusterLaw& law, double p, double q);
double rk_formula(const ClusterLaw& law, double p, double q, std::uint64_t k);

/// P(first right arrow annihilates with a left arrow) = (1-p)/2 - s - r.
double arrow_arrow_formula(const ClusterLaw& law, double p, double q);

/// Right-hand side minus left-hand side of the first-particle recursion
/// q = (1-p)/2 + p q f(q) + s + q ((1-p)/2 - s - r).
double recursion_residual(const ClusterLaw& law, double p, double q);

/// Long-run surviving blockade units per site, p E[(X - A - B)^+] with A, B
/// independent and P(A >= j) = q^j. Limit of W(1,n)/n when positive.
double blockade_density(const ClusterLaw& law, double p, double q);

struct CurvePoint {
  double p = 0.0;
  double q = 1.0;
  double theta = 0.0;
};

struct AnalyticCurve {
  ClusterLaw law;
  double pc = 0.0;
  std::vector<CurvePoint> points;
};

AnalyticCurve tabulate_curve(const ClusterLaw& law, std::span<const double> p_grid);

} // namespace cba
