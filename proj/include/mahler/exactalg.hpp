#pragma once

// Exact integer combinatorics and sparse multivariate integer polynomials:
// Stirling numbers, partial Bell polynomials and the derived families
// Phi_{n,k}, Q_n and Psi_{r,a} used by the expansion coefficients.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mahler/real.hpp"

namespace mahler {

enum class VarFamily : std::uint8_t { kY = 0, kW = 1 };

// y_i (family Y, j unused) or w_{i,j} (family W).
struct IndexedVar {
  VarFamily family = VarFamily::kY;
  std::uint32_t i = 0;
  std::uint32_t j = 0;

  static IndexedVar y(std::uint32_t i) { return {VarFamily::kY, i, 0}; }
  static IndexedVar w(std::uint32_t i, std::uint32_t j) { return {VarFamily::kW, i, j}; }

  auto operator<=>(const IndexedVar&) const = default;
  std::string to_string() const;
};

// Sorted by variable, strictly positive exponents.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(IndexedVar v, unsigned e = 1);

  const std::vector<std::pair<IndexedVar, unsigned>>& factors() const { return factors_; }
  unsigned degree() const;
  unsigned exponent_of(const IndexedVar& v) const;
  bool is_one() const { return factors_.empty(); }

  Monomial operator*(const Monomial& o) const;
  bool operator==(const Monomial& o) const = default;

 private:
  std::vector<std::pair<IndexedVar, unsigned>> factors_;
};

// Graded lexicographic order: higher total degree first, then the larger
// exponent on the smallest variable where the two differ.
struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class IntPoly {
 public:
  using TermMap = std::map<Monomial, mpz_class, GradedLexGreater>;

  IntPoly() = default;
  explicit IntPoly(const mpz_class& constant);
  static IntPoly variable(IndexedVar v);
  static IntPoly term(const mpz_class& coeff, Monomial m);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  mpz_class coefficient(const Monomial& m) const;
  std::vector<IndexedVar> variables() const;
  // True when every monomial has total degree `d`.
  bool is_homogeneous(unsigned d) const;

  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator-=(const IntPoly& o);
  IntPoly& operator*=(const mpz_class& c);
  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  IntPoly operator*(const mpz_class& c) const;
  IntPoly operator-() const;
  bool operator==(const IntPoly& o) const = default;

  IntPoly pow(unsigned e) const;
  void add_term(const mpz_class& coeff, const Monomial& m);

  // Replaces every variable v by `image(v)` and expands.
  IntPoly substitute(const std::function<IntPoly(const IndexedVar&)>& image) const;

  // Canonical text form, e.g. "-w[0,1]^2*w[2,0] + 2*w[0,1]*w[1,0]*w[1,1]".
  std::string to_string() const;
  static IntPoly parse(const std::string& text);

 private:
  TermMap terms_;
};

mpz_class factorial(unsigned n);
mpz_class binomial(unsigned n, unsigned k);

// Unsigned Stirling numbers of the first kind, c(n,k).
mpz_class stirling_first(unsigned n, unsigned k);
// Stirling numbers of the second kind, S(n,k).
mpz_class stirling_second(unsigned n, unsigned k);

// Exponential partial Bell polynomial B_{n,k}(y_1, ..., y_{n-k+1}).
IntPoly bell_partial(unsigned n, unsigned k);

// Phi_{n,k}(y_0, ..., y_{n-k+1}).
IntPoly phi_poly(unsigned n, unsigned k);

// Q_n in w_{i,j}: the n-th implicit derivative numerator. Requires n >= 1.
IntPoly q_poly(unsigned n);

// Psi_{r,a} = Phi_{r-1,r-a+1}(1, Q_1, Q_2, ...). Requires 2 <= a <= r.
IntPoly psi_poly(unsigned r, unsigned a);

using Assignment = std::map<IndexedVar, BigComplex>;

// Throws Error(kInvalidArgument) if a variable of p is missing.
BigComplex eval_intpoly(const IntPoly& p, const Assignment& values, int prec);

// Numeric Phi_{n,k}(y[0], y[1], ...) for all n, k <= nmax, built on one table
// of partial Bell polynomial values. Used where the symbolic polynomials are
// too large to expand.
class PhiEvaluator {
 public:
  PhiEvaluator(std::span<const BigComplex> y, unsigned nmax, int prec);
  BigComplex operator()(unsigned n, unsigned k) const;
  // B_{n,k}(y[1], y[2], ...)
  const BigComplex& bell(unsigned n, unsigned k) const { return bell_[n][k]; }

 private:
  unsigned nmax_;
  int prec_;
  std::vector<BigComplex> y0_pow_;
  std::vector<std::vector<BigComplex>> bell_;
};

}  // namespace mahler
