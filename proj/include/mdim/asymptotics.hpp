#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace mdim {

// 50 significant decimal digits.
using Extended = boost::multiprecision::cpp_dec_float_50;

template <class Real>
struct AsymptoticConstants {
  Real rho1, rho_d1, rho_d2;  // rho(1), rho'(1), rho''(1)
  Real R1, R_d1, R_d2;        // R(1), R'(1), R''(1)
  Real mu, sigma2;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Singularity relation  (1 + (e^{y r} - 1)/y) r e^{1-r} - 1 - r = 0  and its
// partial derivatives in y and r.
template <class Real>
struct RhoRelation {
  Real value, dy, dr, dyy, dyr, drr;
};

template <class Real>
RhoRelation<Real> rho_relation(const Real& y, const Real& r) {
  using std::exp;
  const Real eyr = exp(y * r);
  const Real g = 1 + (eyr - 1) / y;
  const Real g_y = r * eyr / y - (eyr - 1) / (y * y);
  const Real g_r = eyr;
  const Real g_yy = r * r * eyr / y - 2 * r * eyr / (y * y) + 2 * (eyr - 1) / (y * y * y);
  const Real g_yr = r * eyr;
  const Real g_rr = y * eyr;
  const Real e1r = exp(1 - r);
  const Real h = r * e1r;
  const Real h_r = (1 - r) * e1r;
  const Real h_rr = (r - 2) * e1r;
  return {g * h - 1 - r,
          g_y * h,
          g_r * h + g * h_r - 1,
          g_yy * h,
          g_yr * h + g_y * h_r,
          g_rr * h + 2 * g_r * h_r + g * h_rr};
}

}  // namespace detail

// Positive root of the singularity relation for the mobile series, by Newton
// iteration safeguarded with bisection on [0.1, 2].
template <class Real>
Real solve_rho(const Real& y) {
  using std::abs;
  if (!(y >= Real(0.5) && y <= Real(1.5))) throw std::domain_error("solve_rho: y must lie in [0.5, 1.5]");
  Real lo = Real(0.1);
  Real hi = Real(2);
  const Real f_lo = detail::rho_relation(y, lo).value;
  if ((f_lo < 0) == (detail::rho_relation(y, hi).value < 0)) {
    throw ConvergenceError("solve_rho: relation does not change sign on [0.1, 2]");
  }
  const bool increasing = f_lo < 0;
  const Real tolerance = std::numeric_limits<Real>::epsilon() * 16;
  Real r = Real(0.58);
  for (int iter = 0; iter < 200; ++iter) {
    const auto rel = detail::rho_relation(y, r);
    if (rel.value == 0) return r;
    if ((rel.value < 0) == increasing) {
      lo = r;
    } else {
      hi = r;
    }
    Real next = r - rel.value / rel.dr;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (abs(next - r) <= tolerance * abs(r)) return next;
    r = next;
  }
  throw ConvergenceError("solve_rho: no convergence after 200 iterations");
}

template <class Real>
struct RhoDerivatives {
  Real first, second;
};

// rho'(1) and rho''(1) by implicit differentiation of the relation at y = 1.
template <class Real>
RhoDerivatives<Real> rho_derivatives_implicit() {
  const Real y = 1;
  const Real r = solve_rho(y);
  const auto rel = detail::rho_relation(y, r);
  const Real d1 = -rel.dy / rel.dr;
  const Real d2 = -(rel.dyy + 2 * rel.dyr * d1 + rel.drr * d1 * d1) / rel.dr;
  return {d1, d2};
}

// Five-point central differences of solve_rho around y = 1.
template <class Real>
RhoDerivatives<Real> rho_derivatives_finite_difference(const Real& step) {
  const Real h = step;
  const Real fm2 = solve_rho(Real(1) - 2 * h);
  const Real fm1 = solve_rho(Real(1) - h);
  const Real f0 = solve_rho(Real(1));
  const Real fp1 = solve_rho(Real(1) + h);
  const Real fp2 = solve_rho(Real(1) + 2 * h);
  const Real d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
  const Real d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
  return {d1, d2};
}

// Implicit-differentiation values, confirmed against finite differences with
// step 1e-3; throws ConvergenceError if they disagree by more than 1e-6.
template <class Real>
RhoDerivatives<Real> rho_derivatives() {
  using std::abs;
  const auto implicit = rho_derivatives_implicit<Real>();
  const auto fd = rho_derivatives_finite_difference<Real>(Real(1) / 1000);
  if (abs(implicit.first - fd.first) > Real(1e-6) || abs(implicit.second - fd.second) > Real(1e-6)) {
    throw ConvergenceError("rho derivatives: implicit and finite-difference values disagree");
  }
  return implicit;
}

// Singularity of the tree series R = rho/(1+rho) and the limiting mean and
// variance constants of the metric dimension of a uniform tree.
template <class Real>
AsymptoticConstants<Real> tree_constants() {
  AsymptoticConstants<Real> k;
  k.rho1 = solve_rho(Real(1));
  const auto d = rho_derivatives<Real>();
  k.rho_d1 = d.first;
  k.rho_d2 = d.second;
  const Real one_plus = 1 + k.rho1;
  k.R1 = k.rho1 / one_plus;
  k.R_d1 = k.rho_d1 / (one_plus * one_plus);
  k.R_d2 = k.rho_d2 / (one_plus * one_plus) - 2 * k.rho_d1 * k.rho_d1 / (one_plus * one_plus * one_plus);
  const Real ratio1 = k.R_d1 / k.R1;
  const Real ratio2 = k.R_d2 / k.R1;
  k.mu = -ratio1;
  k.sigma2 = -ratio2 - ratio1 + ratio1 * ratio1;
  return k;
}

// Result of summing the mobile series P(x, 1, 1) at x = rho(1).
struct TauCheck {
  std::size_t order = 0;
  double rho = 0;
  double partial_sum = 0;        // P(rho, 1, 1) truncated at `order`
  double extrapolated = 0;       // tail-corrected estimate of P(rho, 1, 1), expected 1
  double tau = 0;                // extrapolated - rho, expected (e-2)/(e-1)
  std::vector<double> partial_sums;  // indexed by order, entry n sums coefficients 0..n
};

// Univariate coefficients of P(x, 1, 1) = x (exp(P) - P) through `order`, in long double.
std::vector<long double> mobile_coefficients_at_unit(std::size_t order);

// Sums P(x, 1, 1) at x = scale * rho(1). At scale 1 the partial sums converge
// like order^(-1/2); the extrapolation removes that leading term.
TauCheck check_tau(std::size_t order = 4096, double scale = 1.0);

// Limiting constant C in E[beta(G(n, c/n))] = C n (1 + o(1)), closed form.
template <class Real>
Real gnp_constant_closed(const Real& c) {
  using std::exp;
  if (!(c >= 0)) throw std::domain_error("gnp_constant_closed: c must be >= 0");
  if (!(c < 1)) throw std::domain_error("gnp_constant_closed: c must be < 1");
  const Real emc = exp(-c);
  const Real thin = emc / (1 - c * emc);              // P(neighbour thin)
  const Real not_thin = (1 - (c + 1) * emc) / (1 - c * emc);
  const Real path_sum = c * thin;                      // sum_{k>=1} (c e^-c)^k
  return emc * (1 + c + c * c / 2 + path_sum / 2 - exp(c) + exp(c * not_thin) -
                c * c * not_thin * not_thin / 2);
}

template <class Real>
struct SeriesConstant {
  Real value;
  std::size_t important_terms = 0;  // last k used in the important-vertex sum
  std::size_t path_terms = 0;       // last k used in the path sum
};

// Same constant from the vertex-type sums: isolated vertices and leaves, minus
// important vertices of each degree k >= 3, minus one per path of each size k >= 2.
// Each sum stops once its next term is below tol.
template <class Real>
SeriesConstant<Real> gnp_constant_series(const Real& c, const Real& tol) {
  using std::exp;
  using std::pow;
  if (!(c > 0 && c < 1)) throw std::domain_error("gnp_constant_series: c must lie in (0, 1)");
  const Real emc = exp(-c);
  const Real not_thin = (1 - (c + 1) * emc) / (1 - c * emc);

  SeriesConstant<Real> out;
  Real important = 0;
  Real term_c = c * c * c / 6;  // c^k / k!
  Real q_pow = not_thin * not_thin * not_thin;
  std::size_t k = 3;
  for (;; ++k) {
    const Real term = term_c * (1 - q_pow);
    important += term;
    term_c *= c / Real(k + 1);
    q_pow *= not_thin;
    if (term_c * (1 - q_pow) < tol) break;
  }
  out.important_terms = k;

  Real paths = 0;
  const Real ratio = c * emc;
  Real path_term = ratio / 2;  // (1/2) c^(k-1) e^(-(k-1)c) at k = 2
  for (k = 2;; ++k) {
    paths += path_term;
    path_term *= ratio;
    if (path_term < tol) break;
  }
  out.path_terms = k;
  out.value = emc * (1 + c - important - paths);
  return out;
}

struct CurvePoint {
  double c;
  double value;
};

// gnp_constant_closed on c_min, c_min + step, ... <= c_max.
std::vector<CurvePoint> c_curve(double c_min, double c_max, double step);

}  // namespace mdim
