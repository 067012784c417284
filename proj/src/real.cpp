#include "mahler/real.hpp"

#include <algorithm>
#include <stdexcept>

namespace mahler {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

int checked_prec(int prec) {
  if (prec < MPFR_PREC_MIN || prec > 1 << 20) {
    throw std::invalid_argument("precision out of range: " + std::to_string(prec));
  }
  return prec;
}

}  // namespace

Real::Real(int prec) {
  mpfr_init2(v_, checked_prec(prec));
  mpfr_set_zero(v_, 1);
}

Real::Real(long v, int prec) {
  mpfr_init2(v_, checked_prec(prec));
  mpfr_set_si(v_, v, kRnd);
}

Real::Real(double v, int prec) {
  mpfr_init2(v_, checked_prec(prec));
  mpfr_set_d(v_, v, kRnd);
}

Real::Real(const mpz_class& v, int prec) {
  mpfr_init2(v_, checked_prec(prec));
  mpfr_set_z(v_, v.get_mpz_t(), kRnd);
}

Real::Real(const mpq_class& v, int prec) {
  mpfr_init2(v_, checked_prec(prec));
  mpfr_set_q(v_, v.get_mpq_t(), kRnd);
}

Real Real::parse(const std::string& text, int prec) {
  Real r(prec);
  if (mpfr_set_str(r.v_, text.c_str(), 10, kRnd) != 0) {
    throw std::invalid_argument("not a number: " + text);
  }
  return r;
}

Real Real::pi(int prec) {
  Real r(prec);
  mpfr_const_pi(r.v_, kRnd);
  return r;
}

Real Real::ln2(int prec) {
  Real r(prec);
  mpfr_const_log2(r.v_, kRnd);
  return r;
}

Real Real::inf(int prec, int sign) {
  Real r(prec);
  mpfr_set_inf(r.v_, sign);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRnd);
}

Real::Real(Real&& other) noexcept {
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (!live()) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, kRnd);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this == &other) return *this;
  if (live()) mpfr_clear(v_);
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
  return *this;
}

Real::~Real() {
  if (live()) mpfr_clear(v_);
}

void Real::round_to(int prec) { mpfr_prec_round(v_, checked_prec(prec), kRnd); }

long Real::exponent2() const {
  if (mpfr_zero_p(v_)) return MPFR_EMIN_MIN;
  return mpfr_get_exp(v_);
}

std::string Real::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RNe", std::max(digits - 1, 0), v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

std::string Real::to_fixed(int decimals) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RNf", decimals, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) round_to(o.precision());
  mpfr_add(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) round_to(o.precision());
  mpfr_sub(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) round_to(o.precision());
  mpfr_mul(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) round_to(o.precision());
  mpfr_div(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator+=(long o) {
  mpfr_add_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator/=(long o) {
  mpfr_div_si(v_, v_, o, kRnd);
  return *this;
}
Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.v_, v_, kRnd);
  return r;
}

namespace {

template <typename Op>
Real binary(const Real& a, const Real& b, Op op) {
  Real r(std::max(a.precision(), b.precision()));
  op(r.get(), a.get(), b.get(), kRnd);
  return r;
}

template <typename Op>
Real unary(const Real& a, Op op) {
  Real r(a.precision());
  op(r.get(), a.get(), kRnd);
  return r;
}

}  // namespace

Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }
Real operator+(const Real& a, long b) {
  Real r(a.precision());
  mpfr_add_si(r.get(), a.get(), b, kRnd);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r(a.precision());
  mpfr_sub_si(r.get(), a.get(), b, kRnd);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.precision());
  mpfr_mul_si(r.get(), a.get(), b, kRnd);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(a.precision());
  mpfr_div_si(r.get(), a.get(), b, kRnd);
  return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator-(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_sub(r.get(), a, b.get(), kRnd);
  return r;
}
Real operator/(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_div(r.get(), a, b.get(), kRnd);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log1p(const Real& x) { return unary(x, mpfr_log1p); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real atan2(const Real& y, const Real& x) { return binary(y, x, mpfr_atan2); }
Real pow(const Real& x, long n) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, kRnd);
  return r;
}
Real hypot(const Real& a, const Real& b) { return binary(a, b, mpfr_hypot); }
Real floor(const Real& x) {
  Real r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}
Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, kRnd);
  return r;
}
Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real epsilon_pow2(long bits, int prec) {
  Real r(1L, prec);
  mpfr_mul_2si(r.get(), r.get(), -bits, kRnd);
  return r;
}

BigComplex BigComplex::unit(const Real& theta) {
  BigComplex z(theta.precision());
  mpfr_sin_cos(z.im.get(), z.re.get(), theta.get(), kRnd);
  return z;
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
BigComplex& BigComplex::operator*=(const BigComplex& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}
BigComplex& BigComplex::operator/=(const BigComplex& o) {
  *this = *this / o;
  return *this;
}
BigComplex& BigComplex::operator*=(const Real& o) {
  re *= o;
  im *= o;
  return *this;
}
BigComplex& BigComplex::operator/=(const Real& o) {
  re /= o;
  im /= o;
  return *this;
}
BigComplex& BigComplex::operator*=(long o) {
  re *= o;
  im *= o;
  return *this;
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  // Smith-style scaling is unnecessary with MPFR's exponent range.
  Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
BigComplex operator*(const BigComplex& a, const Real& b) { return {a.re * b, a.im * b}; }
BigComplex operator*(const Real& a, const BigComplex& b) { return b * a; }
BigComplex operator/(const BigComplex& a, const Real& b) { return {a.re / b, a.im / b}; }
BigComplex operator*(const BigComplex& a, long b) { return {a.re * b, a.im * b}; }

Real abs(const BigComplex& z) { return hypot(z.re, z.im); }
Real norm(const BigComplex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const BigComplex& z) { return atan2(z.im, z.re); }
BigComplex conj(const BigComplex& z) { return {z.re, -z.im}; }
BigComplex inverse(const BigComplex& z) {
  Real d = norm(z);
  return {z.re / d, -z.im / d};
}
BigComplex log(const BigComplex& z) { return {log(abs(z)), arg(z)}; }
BigComplex exp(const BigComplex& z) {
  BigComplex u = BigComplex::unit(z.im);
  Real m = exp(z.re);
  return u * m;
}
BigComplex sqrt(const BigComplex& z) {
  if (z.is_zero()) return BigComplex(z.precision());
  Real r = abs(z);
  Real a = sqrt((r + abs(z.re)) / 2L);
  if (z.re.sign() >= 0) {
    return {a, z.im / (a * 2L)};
  }
  Real b = z.im.sign() < 0 ? -a : a;
  return {abs(z.im) / (a * 2L), b};
}
BigComplex pow(const BigComplex& z, long n) {
  if (n < 0) return pow(inverse(z), -n);
  BigComplex result(Real(1L, z.precision()), Real(z.precision()));
  BigComplex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

}  // namespace mahler
