#pragma once

// Configurable-precision real and complex numbers on top of MPFR.
//
// Precision is carried by every value. Binary operations produce a result at
// the larger of the two operand precisions; mixed operations with machine
// integers use the precision of the Real operand. Doubles only enter through
// the constructor and comparisons. There is no ambient default precision.

#include <mpfr.h>
#include <gmpxx.h>

#include <concepts>
#include <string>

namespace mahler {

inline constexpr int kDefaultPrecision = 256;

class Real {
 public:
  explicit Real(int prec = kDefaultPrecision);
  Real(long v, int prec);
  Real(int v, int prec) : Real(static_cast<long>(v), prec) {}
  Real(double v, int prec);
  Real(const mpz_class& v, int prec);
  Real(const mpq_class& v, int prec);
  static Real parse(const std::string& text, int prec);
  static Real pi(int prec);
  static Real ln2(int prec);
  static Real inf(int prec, int sign = 1);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  // Changes the precision in place, rounding the current value.
  void round_to(int prec);

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator+=(long o);
  Real& operator-=(long o);
  Real& operator*=(long o);
  Real& operator/=(long o);
  template <std::floating_point T> Real& operator+=(T) = delete;
  template <std::floating_point T> Real& operator-=(T) = delete;
  template <std::floating_point T> Real& operator*=(T) = delete;
  template <std::floating_point T> Real& operator/=(T) = delete;
  Real operator-() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  // Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent2() const;

  // Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits = 20) const;
  // Fixed notation with `decimals` digits after the point (round half even).
  std::string to_fixed(int decimals) const;

 private:
  mpfr_t v_;
  bool live() const { return v_->_mpfr_d != nullptr; }
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator-(long a, const Real& b);
Real operator/(long a, const Real& b);

// Doubles would otherwise convert silently to long.
template <std::floating_point T> Real operator+(const Real&, T) = delete;
template <std::floating_point T> Real operator-(const Real&, T) = delete;
template <std::floating_point T> Real operator*(const Real&, T) = delete;
template <std::floating_point T> Real operator/(const Real&, T) = delete;
template <std::floating_point T> Real operator*(T, const Real&) = delete;
template <std::floating_point T> Real operator-(T, const Real&) = delete;
template <std::floating_point T> Real operator/(T, const Real&) = delete;

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator<(const Real& a, double b);
bool operator>(const Real& a, double b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
Real hypot(const Real& a, const Real& b);
Real floor(const Real& x);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
// 2^-bits at the given precision.
Real epsilon_pow2(long bits, int prec);

class BigComplex {
 public:
  explicit BigComplex(int prec = kDefaultPrecision) : re(prec), im(prec) {}
  BigComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(double r, double i, int prec) : re(r, prec), im(i, prec) {}
  static BigComplex from_real(const Real& r) { return {r, Real(r.precision())}; }
  // exp(i*theta)
  static BigComplex unit(const Real& theta);

  int precision() const { return std::max(re.precision(), im.precision()); }

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  BigComplex& operator*=(const Real& o);
  BigComplex& operator/=(const Real& o);
  BigComplex& operator*=(long o);
  template <std::floating_point T> BigComplex& operator*=(T) = delete;
  BigComplex operator-() const { return {-re, -im}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  Real re;
  Real im;
};

BigComplex operator+(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigComplex& b);
BigComplex operator/(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const Real& b);
BigComplex operator*(const Real& a, const BigComplex& b);
BigComplex operator/(const BigComplex& a, const Real& b);
BigComplex operator*(const BigComplex& a, long b);
template <std::floating_point T> BigComplex operator*(const BigComplex&, T) = delete;

Real abs(const BigComplex& z);
Real norm(const BigComplex& z);  // |z|^2
Real arg(const BigComplex& z);
BigComplex conj(const BigComplex& z);
BigComplex inverse(const BigComplex& z);
BigComplex log(const BigComplex& z);  // principal branch
BigComplex exp(const BigComplex& z);
BigComplex sqrt(const BigComplex& z);  // principal branch
BigComplex pow(const BigComplex& z, long n);

}  // namespace mahler
