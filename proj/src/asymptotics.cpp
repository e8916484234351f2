#include "mdim/asymptotics.hpp"

#include <cmath>

namespace mdim {

namespace {

// Coefficients p_n x0^n of P(x0 t, 1, 1) from P = x (exp(P) - P): the
// coefficient of order n only needs exp(P) through order n - 1.
std::vector<long double> scaled_mobile_coefficients(std::size_t order, long double x0) {
  std::vector<long double> p(order + 1, 0.0L);
  std::vector<long double> e(order + 1, 0.0L);
  e[0] = 1.0L;
  for (std::size_t n = 1; n <= order; ++n) {
    p[n] = x0 * (e[n - 1] - p[n - 1]);
    long double acc = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) acc += static_cast<long double>(k) * p[k] * e[n - k];
    e[n] = acc / static_cast<long double>(n);
  }
  return p;
}

}  // namespace

std::vector<long double> mobile_coefficients_at_unit(std::size_t order) {
  return scaled_mobile_coefficients(order, 1.0L);
}

TauCheck check_tau(std::size_t order, double scale) {
  if (order < 4) throw std::invalid_argument("check_tau: order must be >= 4");
  TauCheck out;
  out.order = order;
  out.rho = solve_rho(1.0);
  const auto coeffs = scaled_mobile_coefficients(order, static_cast<long double>(scale) * out.rho);
  out.partial_sums.resize(order + 1);
  long double sum = 0.0L;
  for (std::size_t n = 0; n <= order; ++n) {
    sum += coeffs[n];
    out.partial_sums[n] = static_cast<double>(sum);
  }
  out.partial_sum = out.partial_sums[order];
  // Tail ~ a order^(-1/2): combine orders N and N/4.
  out.extrapolated = 2.0 * out.partial_sums[order] - out.partial_sums[order / 4];
  if (scale != 1.0) out.extrapolated = out.partial_sum;
  out.tau = out.extrapolated - scale * out.rho;
  return out;
}

std::vector<CurvePoint> c_curve(double c_min, double c_max, double step) {
  if (!(c_min >= 0 && c_min < c_max && c_max < 1)) {
    throw std::domain_error("c_curve: need 0 <= c_min < c_max < 1");
  }
  if (!(step > 0)) throw std::domain_error("c_curve: step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((c_max - c_min) / step + 1e-9)) + 1;
  std::vector<CurvePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double c = std::min(c_min + static_cast<double>(i) * step, c_max);
    out.push_back({c, gnp_constant_closed(c)});
  }
  return out;
}

}  // namespace mdim
