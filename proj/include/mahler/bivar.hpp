#pragma once

// Exact univariate and bivariate polynomials over the Gaussian rationals
// Q(i): reciprocal polynomials, resultants in y, the critical-point check.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mahler/real.hpp"

namespace mahler {

struct GaussRational {
  mpq_class re;
  mpq_class im;

  GaussRational() = default;
  GaussRational(long r) : re(r) {}  // NOLINT(google-explicit-constructor)
  GaussRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  static GaussRational i_unit() { return {0, 1}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussRational conj() const { return {re, -im}; }
  BigComplex to_complex(int prec) const;
  // "3", "-1/2", "(1/2+2i)", "i"
  std::string to_string() const;

  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);
  GaussRational operator-() const { return {-re, -im}; }
  bool operator==(const GaussRational& o) const { return re == o.re && im == o.im; }
};

GaussRational operator+(GaussRational a, const GaussRational& b);
GaussRational operator-(GaussRational a, const GaussRational& b);
GaussRational operator*(GaussRational a, const GaussRational& b);
GaussRational operator/(GaussRational a, const GaussRational& b);

// Univariate polynomial over Q(i), lowest degree first, no trailing zeros.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<GaussRational> coeffs);
  static UniPoly constant(const GaussRational& c);
  static UniPoly monomial(const GaussRational& c, int k);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<GaussRational>& coeffs() const { return c_; }
  GaussRational coeff(int k) const;
  const GaussRational& lead() const { return c_.back(); }

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator*(const GaussRational& s) const;
  UniPoly operator-() const;
  bool operator==(const UniPoly& o) const { return c_ == o.c_; }

  // Quotient and remainder; divisor must be nonzero.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;
  // Exact division; throws if the remainder is nonzero.
  UniPoly exact_div(const UniPoly& d) const;
  UniPoly derivative() const;
  UniPoly monic() const;
  GaussRational eval(const GaussRational& x) const;
  BigComplex eval(const BigComplex& x, int prec) const;
  std::vector<BigComplex> to_complex(int prec) const;
  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<GaussRational> c_;
};

// Monic gcd (zero if both are zero).
UniPoly gcd(UniPoly a, UniPoly b);
UniPoly squarefree_part(const UniPoly& p);
// Resultant of two univariate polynomials by the Euclidean algorithm.
GaussRational resultant(const UniPoly& a, const UniPoly& b);

class BiPoly {
 public:
  using Key = std::pair<int, int>;  // (x exponent, y exponent)

  BiPoly() = default;
  explicit BiPoly(std::map<Key, GaussRational> coeffs);
  static BiPoly x() { return BiPoly(std::map<Key, GaussRational>{{{1, 0}, 1}}); }
  static BiPoly y() { return BiPoly(std::map<Key, GaussRational>{{{0, 1}, 1}}); }
  static BiPoly constant(const GaussRational& c);

  const std::map<Key, GaussRational>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int deg_x() const { return deg_x_; }
  int deg_y() const { return deg_y_; }
  GaussRational coeff(int i, int j) const;
  void add_term(int i, int j, const GaussRational& c);
  // Coefficient of y^j as a polynomial in x; a_d(x) for j = deg_y.
  UniPoly coeff_y(int j) const;
  bool has_real_coefficients() const;

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly operator*(const GaussRational& s) const;
  bool operator==(const BiPoly& o) const { return c_ == o.c_; }

  // Mixed partial derivative d^{i+j} / dx^i dy^j.
  BiPoly partial(int i, int j) const;
  // x^{deg_x} y^{deg_y} conj(P)(1/x, 1/y).
  BiPoly reciprocal() const;
  // P(x^mx, y^my) times x^a y^b.
  BiPoly transformed(int mx, int my, int a = 0, int b = 0) const;

  BigComplex eval(const BigComplex& x, const BigComplex& y, int prec) const;
  // Coefficients of P(x0, y) in y, lowest first.
  std::vector<BigComplex> y_coeffs_at(const BigComplex& x0, int prec) const;
  // P(x0, y) with x0 exact.
  UniPoly at_x(const GaussRational& x0) const;

  std::string to_string() const;

 private:
  void refresh();
  std::map<Key, GaussRational> c_;
  int deg_x_ = -1;
  int deg_y_ = -1;
};

// The constant c with P* = c P, if any.
std::optional<GaussRational> is_asr(const BiPoly& p);

// Res_y(A, B) via the fraction-free determinant of the Sylvester matrix.
UniPoly resultant_y(const BiPoly& a, const BiPoly& b);
// Same quantity by evaluation at integer points, Euclidean resultants over
// Q(i) and Newton interpolation; an independent check of resultant_y.
UniPoly resultant_y_interpolated(const BiPoly& a, const BiPoly& b);

// R(x) = Res_y(P, dP/dy).
UniPoly critical_resultant(const BiPoly& p);

// P(x, x^n); throws Error(kDegenerate) if identically zero.
UniPoly substitute_curve(const BiPoly& p, int n);

struct HypothesisReport {
  bool pass = true;
  UniPoly resultant;
  std::vector<BigComplex> roots;  // of the squarefree part of R
  std::vector<double> margins;    // ||root| - 1|
  std::vector<std::size_t> offending;
};

// Fails iff the squarefree part of R(x) has a root within tol of the unit
// circle. Throws Error(kDegenerate) if R vanishes identically.
HypothesisReport hypothesis_check(const BiPoly& p, int prec);
HypothesisReport hypothesis_check(const BiPoly& p, int prec, const Real& tol);

}  // namespace mahler
