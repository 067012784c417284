#include <doctest.h>

#include <random>

#include "mahler/real.hpp"

using namespace mahler;

TEST_CASE("precision is carried by values") {
  const Real a(1L, 64);
  const Real b(1L, 300);
  CHECK(a.precision() == 64);
  CHECK((a + b).precision() == 300);
  CHECK((b * 3L).precision() == 300);
  CHECK(Real::pi(128).precision() == 128);
  const BigComplex z(Real(1L, 64), Real(2L, 200));
  CHECK(z.precision() == 200);

  Real c = Real::pi(256);
  c.round_to(24);
  CHECK(c.precision() == 24);
  CHECK(c.to_double() == static_cast<double>(static_cast<float>(3.14159265358979)));
}

TEST_CASE("exact rationals and constants") {
  const int prec = 256;
  CHECK(Real(mpq_class(1, 3), prec) * 3L == Real(1L, prec));
  CHECK(Real(mpz_class("123456789012345678901234567890"), prec).to_string(30) ==
        "1.23456789012345678901234567890e+29");
  CHECK(Real::pi(prec).to_string(40) == "3.141592653589793238462643383279502884197e+00");
  CHECK(Real::ln2(prec).to_string(25) == "6.931471805599453094172321e-01");
  CHECK(abs(exp(log(Real::pi(prec))) - Real::pi(prec)) < epsilon_pow2(250, prec));
  CHECK(Real::parse("0.125", prec) == Real(mpq_class(1, 8), prec));
  CHECK_THROWS(Real::parse("abc", prec));
}

TEST_CASE("decimal output rounds half to even") {
  const int prec = 128;
  // 0.125 and 0.375 are exact binary ties at 2 decimals.
  CHECK(Real(mpq_class(1, 8), prec).to_fixed(2) == "0.12");
  CHECK(Real(mpq_class(3, 8), prec).to_fixed(2) == "0.38");
  CHECK(Real(mpq_class(-1, 8), prec).to_fixed(2) == "-0.12");
  CHECK(Real(mpq_class(5, 2), prec).to_fixed(0) == "2");
  CHECK(Real(mpq_class(7, 2), prec).to_fixed(0) == "4");
  CHECK(Real(mpq_class(1, 8), prec).to_string(2) == "1.2e-01");
  CHECK(Real(mpq_class(3, 8), prec).to_string(2) == "3.8e-01");
  // No "-0.00".
  CHECK(Real(mpq_class(-1, 1000), prec).to_fixed(2) == "0.00");
}

TEST_CASE("elementary identities at random points") {
  const int prec = 200;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Real tol = epsilon_pow2(190, prec);
  for (int k = 0; k < 50; ++k) {
    const Real x(u(rng), prec);
    const Real y(u(rng), prec);
    CHECK(abs(sin(x) * sin(x) + cos(x) * cos(x) - Real(1L, prec)) < tol);
    CHECK(abs(hypot(x, y) - sqrt(x * x + y * y)) < tol * 8L);
    CHECK(abs(atan2(sin(x), cos(x)) - x) < tol * 8L);
    CHECK(abs(log1p(abs(x)) - log(abs(x) + 1L)) < tol * 8L);
    CHECK(abs(ldexp(x, 5) - x * 32L) < tol);
    CHECK(floor(x) <= x);
    CHECK(x - floor(x) < 1.0);
    CHECK(max(x, y) >= min(x, y));
  }
}

TEST_CASE("complex arithmetic") {
  const int prec = 192;
  const Real tol = epsilon_pow2(180, prec);
  const BigComplex z(0.3, -1.7, prec);
  const BigComplex w(-2.5, 0.25, prec);
  CHECK(abs(z * w / w - z) < tol);
  CHECK(abs(z * inverse(z) - BigComplex(1.0, 0.0, prec)) < tol);
  CHECK(abs(exp(log(z)) - z) < tol);
  CHECK(abs(sqrt(z) * sqrt(z) - z) < tol);
  CHECK(abs(norm(z) - abs(z) * abs(z)) < tol);
  CHECK(abs(pow(z, 5) - z * z * z * z * z) < tol * 64L);
  CHECK(abs(pow(z, -2) * z * z - BigComplex(1.0, 0.0, prec)) < tol * 16L);
  CHECK(conj(z).im == -z.im);

  const Real pi = Real::pi(prec);
  const BigComplex u = BigComplex::unit(pi * 2L / 3L);
  CHECK(abs(pow(u, 3) - BigComplex(1.0, 0.0, prec)) < tol);
  CHECK(abs(abs(u) - Real(1L, prec)) < tol);
  CHECK(abs(arg(u) - pi * 2L / 3L) < tol);
  // Principal branch: arg in (-pi, pi].
  CHECK(abs(arg(BigComplex(-1.0, 0.0, prec)) - pi) < tol);
  CHECK(abs(log(BigComplex(-1.0, 0.0, prec)).im - pi) < tol);
}
