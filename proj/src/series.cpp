#include "mdim/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mdim {

namespace {

bool key_less(const UVPoly::Term& a, const UVPoly::Term& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); }

}  // namespace

UVPoly UVPoly::monomial(const mpq_class& c, int u_deg, int v_deg) {
  UVPoly p;
  if (c != 0) p.terms_.push_back({u_deg, v_deg, c});
  return p;
}

mpq_class UVPoly::coefficient(int u_deg, int v_deg) const {
  Term probe{u_deg, v_deg, 0};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
  if (it != terms_.end() && it->u == u_deg && it->v == v_deg) return it->coeff;
  return 0;
}

UVPoly& UVPoly::combine(const UVPoly& other, int sign) {
  if (other.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && key_less(*a, *b))) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || key_less(*b, *a)) {
      merged.push_back({b->u, b->v, sign > 0 ? b->coeff : mpq_class(-b->coeff)});
      ++b;
    } else {
      mpq_class c = sign > 0 ? mpq_class(a->coeff + b->coeff) : mpq_class(a->coeff - b->coeff);
      if (c != 0) merged.push_back({a->u, a->v, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

UVPoly& UVPoly::operator+=(const UVPoly& other) { return combine(other, +1); }
UVPoly& UVPoly::operator-=(const UVPoly& other) { return combine(other, -1); }

UVPoly& UVPoly::operator*=(const mpq_class& scalar) {
  if (scalar == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coeff *= scalar;
  }
  return *this;
}

UVPoly operator*(const UVPoly& a, const UVPoly& b) {
  UVPoly out;
  if (a.terms_.empty() || b.terms_.empty()) return out;
  std::vector<UVPoly::Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) products.push_back({x.u + y.u, x.v + y.v, x.coeff * y.coeff});
  }
  std::sort(products.begin(), products.end(), key_less);
  for (auto& t : products) {
    if (!out.terms_.empty() && out.terms_.back().u == t.u && out.terms_.back().v == t.v) {
      out.terms_.back().coeff += t.coeff;
    } else {
      if (!out.terms_.empty() && out.terms_.back().coeff == 0) out.terms_.pop_back();
      out.terms_.push_back(std::move(t));
    }
  }
  if (!out.terms_.empty() && out.terms_.back().coeff == 0) out.terms_.pop_back();
  return out;
}

bool UVPoly::operator==(const UVPoly& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& a = terms_[i];
    const auto& b = other.terms_[i];
    if (a.u != b.u || a.v != b.v || a.coeff != b.coeff) return false;
  }
  return true;
}

namespace {

mpq_class power(const mpq_class& base, int exponent) {
  mpq_class out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

mpq_class UVPoly::evaluate(const mpq_class& u, const mpq_class& v) const {
  mpq_class total = 0;
  for (const auto& t : terms_) total += t.coeff * power(u, t.u) * power(v, t.v);
  return total;
}

double UVPoly::evaluate(double u, double v) const {
  double total = 0.0;
  for (const auto& t : terms_) total += t.coeff.get_d() * std::pow(u, t.u) * std::pow(v, t.v);
  return total;
}

std::map<int, mpq_class> UVPoly::collapse_y() const {
  std::map<int, mpq_class> out;
  for (const auto& t : terms_) out[t.u - t.v] += t.coeff;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::string UVPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    first = false;
    out << t.coeff.get_str();
    if (t.u > 0) out << "*u" << (t.u > 1 ? "^" + std::to_string(t.u) : "");
    if (t.v > 0) out << "*v" << (t.v > 1 ? "^" + std::to_string(t.v) : "");
  }
  return out.str();
}

TruncatedSeries TruncatedSeries::monomial(std::size_t order, const mpq_class& c, std::size_t power, int u_deg,
                                          int v_deg) {
  TruncatedSeries s(order);
  if (power <= order) s.coeffs_[power] = UVPoly::monomial(c, u_deg, v_deg);
  return s;
}

std::size_t TruncatedSeries::valuation() const {
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    if (!coeffs_[n].is_zero()) return n;
  }
  return coeffs_.size();
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  const std::size_t top = std::min(order(), other.order());
  coeffs_.resize(top + 1);
  for (std::size_t n = 0; n <= top; ++n) coeffs_[n] += other.coeffs_[n];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  const std::size_t top = std::min(order(), other.order());
  coeffs_.resize(top + 1);
  for (std::size_t n = 0; n <= top; ++n) coeffs_[n] -= other.coeffs_[n];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const UVPoly& scalar) {
  for (auto& c : coeffs_) c = c * scalar;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t top = std::min(a.order(), b.order());
  TruncatedSeries out(top);
  const std::size_t va = a.valuation();
  const std::size_t vb = b.valuation();
  for (std::size_t i = va; i <= top; ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = vb; i + j <= top; ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::truncated(std::size_t new_order) const {
  TruncatedSeries out(new_order);
  for (std::size_t n = 0; n <= std::min(new_order, order()); ++n) out.coeffs_[n] = coeffs_[n];
  return out;
}

TruncatedSeries TruncatedSeries::shifted(std::size_t k) const {
  TruncatedSeries out(order());
  for (std::size_t n = 0; n + k <= order(); ++n) out.coeffs_[n + k] = coeffs_[n];
  return out;
}

TruncatedSeries TruncatedSeries::pointed() const {
  TruncatedSeries out(order());
  for (std::size_t n = 1; n <= order(); ++n) out.coeffs_[n] = coeffs_[n] * mpq_class(static_cast<long>(n));
  return out;
}

TruncatedSeries TruncatedSeries::exp() const {
  if (!coeffs_[0].is_zero()) throw std::domain_error("series exponential needs a zero constant term");
  // E' = A' E, i.e. n e_n = sum_k k a_k e_(n-k).
  TruncatedSeries out(order());
  out.coeffs_[0] = UVPoly::constant(1);
  std::vector<UVPoly> weighted(order() + 1);
  for (std::size_t k = 1; k <= order(); ++k) weighted[k] = coeffs_[k] * mpq_class(static_cast<long>(k));
  for (std::size_t n = 1; n <= order(); ++n) {
    UVPoly acc;
    for (std::size_t k = 1; k <= n; ++k) {
      if (weighted[k].is_zero() || out.coeffs_[n - k].is_zero()) continue;
      acc += weighted[k] * out.coeffs_[n - k];
    }
    out.coeffs_[n] = acc * mpq_class(1, static_cast<long>(n));
  }
  return out;
}

TruncatedSeries TruncatedSeries::compose(const TruncatedSeries& inner) const {
  if (!inner.coeffs_[0].is_zero()) throw std::domain_error("composition needs an inner series with zero constant term");
  const std::size_t top = std::min(order(), inner.order());
  const TruncatedSeries b = inner.truncated(top);
  // Horner: (((a_N) b + a_(N-1)) b + ...) + a_0.
  TruncatedSeries out(top);
  for (std::size_t m = top + 1; m-- > 0;) {
    out = out * b;
    out.coeffs_[0] += coeffs_[m];
  }
  return out;
}

std::vector<mpq_class> TruncatedSeries::at_unit() const {
  std::vector<mpq_class> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.evaluate(mpq_class(1), mpq_class(1)));
  return out;
}

namespace {

UVPoly poly(long num, long den, int u_deg, int v_deg) { return UVPoly::monomial(mpq_class(num, den), u_deg, v_deg); }

// exp(s) - 1 - s - s^2/2 (degree >= 3 part of the exponential).
TruncatedSeries exp_tail3(const TruncatedSeries& s) {
  auto e = s.exp();
  e.coeff(0) -= UVPoly::constant(1);
  return e - s - (s * s) * UVPoly::constant(mpq_class(1, 2));
}

}  // namespace

TruncatedSeries solve_mobiles(std::size_t order) {
  if (order < 1) throw std::invalid_argument("series order must be >= 1");
  const UVPoly one = UVPoly::constant(1);
  const UVPoly u = poly(1, 1, 1, 0);
  const UVPoly v = poly(1, 1, 0, 1);
  const auto minus_ux = TruncatedSeries::monomial(order, -1, 1, 1, 0);
  const auto e_minus_ux = minus_ux.exp();

  // (u-1)x + u(1-v)x^2
  TruncatedSeries base(order);
  base.coeff(1) = u - one;
  if (order >= 2) base.coeff(2) = u - poly(1, 1, 1, 1);
  // v + (1-v) exp(-ux)
  TruncatedSeries factor = e_minus_ux * (one - v);
  factor.coeff(0) += v;

  // Coefficient n of the right-hand side only uses coefficients < n of P, so
  // iteration k is exact through order k and need not go further.
  TruncatedSeries p(order);
  for (std::size_t k = 1; k <= order; ++k) {
    const auto pk = p.truncated(k);
    auto rhs = base.truncated(k) + ((factor.truncated(k) * pk.exp()).shifted(1)) - pk.shifted(1);
    p = rhs.truncated(order);
  }
  return p;
}

MobileParts split_mobiles(const TruncatedSeries& mobiles) {
  const std::size_t order = mobiles.order();
  const auto ux = TruncatedSeries::monomial(order, 1, 1, 1, 0);
  const auto exp_p = mobiles.exp();
  const auto p_minus_ux = mobiles - ux;
  const auto exp_p_minus_ux = p_minus_ux.exp();

  // U = v x (exp(P) - exp(P - ux) - ux)
  auto u_series = (exp_p - exp_p_minus_ux - ux).shifted(1) * poly(1, 1, 0, 1);
  // V = x (exp(P - ux) - 1 - P + ux)
  auto inner = exp_p_minus_ux - mobiles + ux;
  inner.coeff(0) -= UVPoly::constant(1);
  auto v_series = inner.shifted(1);
  return {std::move(u_series), std::move(v_series)};
}

RootedSpecialSeries rooted_special_series(const TruncatedSeries& mobiles, const MobileParts& parts) {
  const std::size_t order = mobiles.order();
  const auto& U = parts.root_at_leaf;
  const auto& V = parts.root_not_at_leaf;
  const UVPoly u = poly(1, 1, 1, 0);
  const UVPoly uv = poly(1, 1, 1, 1);
  const UVPoly two = UVPoly::constant(2);

  auto edge = TruncatedSeries::monomial(order, 1, 2, 1, 0);
  edge += U.shifted(1) * (u * two);
  edge += V.shifted(1) * (uv * two);
  edge += U * U;
  edge += V * V;
  edge += (U * V) * two;

  const auto ux = TruncatedSeries::monomial(order, 1, 1, 1, 0);
  auto vertex = ux;
  vertex += TruncatedSeries::monomial(order, 1, 2, 1, 0);
  vertex += U.shifted(1) * u;
  vertex += V.shifted(1) * uv;
  vertex += exp_tail3(mobiles - ux).shifted(1) * (UVPoly::constant(1) - poly(1, 1, 0, 1));
  vertex += exp_tail3(mobiles).shifted(1) * poly(1, 1, 0, 1);
  return {std::move(edge), std::move(vertex)};
}

TruncatedSeries special_series(const RootedSpecialSeries& rooted) {
  return rooted.vertex - rooted.edge_oriented * UVPoly::constant(mpq_class(1, 2));
}

TruncatedSeries tree_series(const TruncatedSeries& special) {
  const std::size_t order = special.order();
  TruncatedSeries geometric(order);  // x / (1 - x)
  for (std::size_t n = 1; n <= order; ++n) geometric.coeff(n) = UVPoly::constant(1);
  auto composed = special.compose(geometric);
  return composed - composed.shifted(1);
}

TruncatedSeries forest_series(const TruncatedSeries& trees) {
  const std::size_t order = trees.order();
  const auto ux = TruncatedSeries::monomial(order, 1, 1, 1, 0);
  auto non_isolated = (trees - ux).exp();
  auto isolated = ux.exp();
  isolated.coeff(0) -= UVPoly::constant(1);
  isolated *= poly(1, 1, 0, 1);
  isolated.coeff(0) += UVPoly::constant(1);
  return non_isolated * isolated;
}

SeriesSystem solve_series_system(std::size_t order) {
  auto mobiles = solve_mobiles(order);
  auto parts = split_mobiles(mobiles);
  auto rooted = rooted_special_series(mobiles, parts);
  auto special = special_series(rooted);
  auto trees = tree_series(special);
  auto forests = forest_series(trees);
  return {std::move(mobiles), std::move(parts), std::move(rooted), std::move(special), std::move(trees),
          std::move(forests)};
}

mpq_class BetaDistribution::mean() const {
  mpq_class m = 0;
  for (const auto& [beta, p] : pmf) m += p * beta;
  return m;
}

mpq_class BetaDistribution::variance() const {
  const mpq_class m = mean();
  mpq_class second = 0;
  for (const auto& [beta, p] : pmf) second += p * beta * beta;
  return second - m * m;
}

BetaDistribution beta_distribution(const TruncatedSeries& series, std::size_t n) {
  if (n > series.order()) {
    throw std::out_of_range("size " + std::to_string(n) + " exceeds series order " + std::to_string(series.order()));
  }
  BetaDistribution dist;
  dist.n = n;
  dist.pmf = series[n].collapse_y();
  // The forest correction would give 0 for a lone vertex.
  if (n == 1 && !dist.pmf.empty()) dist.pmf = {{1, mpq_class(1)}};
  mpq_class total = 0;
  for (const auto& [beta, weight] : dist.pmf) total += weight;
  if (total == 0) throw std::domain_error("series has no objects of size " + std::to_string(n));
  for (auto& [beta, weight] : dist.pmf) weight /= total;
  return dist;
}

}  // namespace mdim
