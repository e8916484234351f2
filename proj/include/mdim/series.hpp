#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mdim {

// Polynomial in (u, v) with exact rational coefficients. u marks leaves and v
// marks vertices incident to a leaf; terms are kept sorted by (u, v) with no
// zero coefficients.
class UVPoly {
 public:
  struct Term {
    int u = 0;
    int v = 0;
    mpq_class coeff;
  };

  UVPoly() = default;
  static UVPoly constant(const mpq_class& c) { return monomial(c, 0, 0); }
  static UVPoly monomial(const mpq_class& c, int u_deg, int v_deg);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  mpq_class coefficient(int u_deg, int v_deg) const;

  UVPoly& operator+=(const UVPoly& other);
  UVPoly& operator-=(const UVPoly& other);
  UVPoly& operator*=(const mpq_class& scalar);
  friend UVPoly operator+(UVPoly a, const UVPoly& b) { return a += b; }
  friend UVPoly operator-(UVPoly a, const UVPoly& b) { return a -= b; }
  friend UVPoly operator*(UVPoly a, const mpq_class& s) { return a *= s; }
  friend UVPoly operator*(const UVPoly& a, const UVPoly& b);
  UVPoly operator-() const { return *this * mpq_class(-1); }

  bool operator==(const UVPoly& other) const;

  mpq_class evaluate(const mpq_class& u, const mpq_class& v) const;
  double evaluate(double u, double v) const;

  // Substitutes u = y, v = 1/y: coefficient of y^k collects terms with u - v = k.
  std::map<int, mpq_class> collapse_y() const;

  std::string to_string() const;

 private:
  UVPoly& combine(const UVPoly& other, int sign);
  std::vector<Term> terms_;
};

// Exponential generating function in x truncated at a fixed order N, with
// UVPoly coefficients: coefficient n stands for [x^n] = count / n!.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1) {}

  // c * x^power * u^u_deg * v^v_deg
  static TruncatedSeries monomial(std::size_t order, const mpq_class& c, std::size_t power, int u_deg = 0,
                                  int v_deg = 0);

  std::size_t order() const { return coeffs_.size() - 1; }
  const UVPoly& operator[](std::size_t n) const { return coeffs_.at(n); }
  UVPoly& coeff(std::size_t n) { return coeffs_.at(n); }
  // Lowest n with a non-zero coefficient, or order() + 1 for the zero series.
  std::size_t valuation() const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const UVPoly& scalar);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const UVPoly& s) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  bool operator==(const TruncatedSeries& other) const { return coeffs_ == other.coeffs_; }

  TruncatedSeries truncated(std::size_t order) const;
  // Multiplication by x^k, dropping terms beyond the order.
  TruncatedSeries shifted(std::size_t k) const;
  // x d/dx
  TruncatedSeries pointed() const;
  // exp of a series with zero constant term; throws std::domain_error otherwise.
  TruncatedSeries exp() const;
  // this(inner(x)), inner must have zero constant term.
  TruncatedSeries compose(const TruncatedSeries& inner) const;

  // Coefficients after setting u = v = 1.
  std::vector<mpq_class> at_unit() const;

 private:
  std::vector<UVPoly> coeffs_;
};

inline constexpr std::size_t kDefaultSeriesOrder = 30;

// Mobile series P: the unique solution with zero constant term of
//   P = (u-1)x + u(1-v)x^2 + (v + (1-v)exp(-ux)) x exp(P) - xP,
// by exactly N fixed-point iterations.
TruncatedSeries solve_mobiles(std::size_t order);

struct MobileParts {
  TruncatedSeries root_at_leaf;      // U: root adjacent to a leaf
  TruncatedSeries root_not_at_leaf;  // V
};
MobileParts split_mobiles(const TruncatedSeries& mobiles);

struct RootedSpecialSeries {
  TruncatedSeries edge_oriented;  // one oriented edge marked
  TruncatedSeries vertex;         // one vertex marked
};
RootedSpecialSeries rooted_special_series(const TruncatedSeries& mobiles, const MobileParts& parts);

// Unrooted special trees: vertex-rooted minus half of edge-rooted.
TruncatedSeries special_series(const RootedSpecialSeries& rooted);

// All trees: (1-x) S(x/(1-x)), reinserting degree-2 vertices on every edge.
TruncatedSeries tree_series(const TruncatedSeries& special);

// Forests: exp(T - ux) (1 + v(exp(ux) - 1)); isolated vertices beyond the first
// carry u, the first carries u*v, so the y-exponent drops by one.
TruncatedSeries forest_series(const TruncatedSeries& trees);

struct SeriesSystem {
  TruncatedSeries mobiles;
  MobileParts parts;
  RootedSpecialSeries rooted;
  TruncatedSeries special;
  TruncatedSeries trees;
  TruncatedSeries forests;
};

SeriesSystem solve_series_system(std::size_t order = kDefaultSeriesOrder);

struct BetaDistribution {
  std::size_t n = 0;
  std::map<int, mpq_class> pmf;

  mpq_class mean() const;
  mpq_class variance() const;
};

// Exact law of the metric dimension from coefficient n of the tree or forest
// series, after u = y, v = 1/y.
BetaDistribution beta_distribution(const TruncatedSeries& series, std::size_t n);

}  // namespace mdim
