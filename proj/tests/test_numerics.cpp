#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "mahler/error.hpp"
#include "mahler/numerics.hpp"

using namespace mahler;

namespace {

std::vector<BigComplex> cpoly(std::initializer_list<double> re, int prec) {
  std::vector<BigComplex> c;
  for (double v : re) c.emplace_back(v, 0.0, prec);
  return c;
}

BigComplex sum_of(const std::vector<BigComplex>& v, int prec) {
  BigComplex s(prec);
  for (const auto& z : v) s += z;
  return s;
}

BigComplex product_of(const std::vector<BigComplex>& v, int prec) {
  BigComplex s(Real(1L, prec), Real(prec));
  for (const auto& z : v) s *= z;
  return s;
}

bool near(const BigComplex& a, const BigComplex& b, const Real& tol) { return abs(a - b) < tol; }

}  // namespace

TEST_CASE("polyroots on small inputs") {
  const int prec = 256;
  const Real tol = epsilon_pow2(240, prec);
  {
    const auto rs = polyroots(cpoly({1, 0, 1}, prec), prec);
    REQUIRE(rs.roots.size() == 2);
    const BigComplex i(0.0, 1.0, prec);
    const bool ok = (near(rs.roots[0], i, tol) && near(rs.roots[1], -i, tol)) ||
                    (near(rs.roots[1], i, tol) && near(rs.roots[0], -i, tol));
    CHECK(ok);
  }
  {
    const auto rs = polyroots(cpoly({1, 2}, prec), prec);
    REQUIRE(rs.roots.size() == 1);
    CHECK(near(rs.roots[0], BigComplex(-0.5, 0.0, prec), tol));
  }
  {
    // z^3 (z - 2)
    const auto rs = polyroots(cpoly({0, 0, 0, -2, 1}, prec), prec);
    REQUIRE(rs.roots.size() == 4);
    int zeros = 0;
    for (const auto& r : rs.roots) zeros += r.is_zero() ? 1 : 0;
    CHECK(zeros == 3);
  }
  CHECK_THROWS_AS(polyroots(cpoly({1, 0}, prec), prec), Error);
  CHECK_THROWS_AS(polyroots(cpoly({3}, prec), prec), Error);
}

TEST_CASE("polyroots satisfies Vieta relations on 1 + z + z^n") {
  const int prec = 256;
  for (int n : {3, 17, 64, 301}) {
    CAPTURE(n);
    std::vector<BigComplex> c(n + 1, BigComplex(prec));
    c[0] = BigComplex(1.0, 0.0, prec);
    c[1] = BigComplex(1.0, 0.0, prec);
    c[n] = BigComplex(1.0, 0.0, prec);
    const auto rs = polyroots(c, prec);
    REQUIRE(rs.roots.size() == static_cast<std::size_t>(n));
    const Real tol = epsilon_pow2(200, prec);
    CHECK(abs(sum_of(rs.roots, prec)) < tol);
    // prod roots = (-1)^n c0 / cn
    const BigComplex expected(n % 2 == 0 ? 1.0 : -1.0, 0.0, prec);
    CHECK(near(product_of(rs.roots, prec), expected, tol));
    for (const auto& r : rs.residuals) CHECK(r < epsilon_pow2(230, prec));
  }
}

TEST_CASE("polyroots on Wilkinson-type and multiple roots") {
  const int prec = 256;
  // (z - 1)(z - 2)...(z - 20)
  std::vector<BigComplex> c{BigComplex(1.0, 0.0, prec)};
  for (int k = 1; k <= 20; ++k) {
    std::vector<BigComplex> next(c.size() + 1, BigComplex(prec));
    for (std::size_t t = 0; t < c.size(); ++t) {
      next[t + 1] += c[t];
      next[t] -= c[t] * static_cast<long>(k);
    }
    c = std::move(next);
  }
  const auto rs = polyroots(c, prec);
  std::vector<double> re;
  for (const auto& r : rs.roots) {
    CHECK(abs(r.im) < 1e-40);
    const long nearest = std::lround(r.re.to_double());
    CHECK(abs(r.re - Real(nearest, prec)) < 1e-40);
    re.push_back(r.re.to_double());
  }
  std::sort(re.begin(), re.end());
  for (int k = 1; k <= 20; ++k) CHECK(std::lround(re[k - 1]) == k);

  // (z - 1)^2 (z + 2) = z^3 - 3z + 2
  const auto rm = polyroots(cpoly({2, -3, 0, 1}, prec), prec);
  int near_one = 0;
  for (const auto& r : rm.roots) near_one += abs(r - BigComplex(1.0, 0.0, prec)) < 1e-30 ? 1 : 0;
  CHECK(near_one == 2);
}

TEST_CASE("polyroots with Gaussian coefficients is deterministic") {
  const int prec = 192;
  std::vector<BigComplex> c;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k <= 25; ++k) c.emplace_back(u(rng), u(rng), prec);
  const auto a = polyroots(c, prec);
  const auto b = polyroots(c, prec);
  for (std::size_t k = 0; k < a.roots.size(); ++k) {
    CHECK(a.roots[k].re.to_string(50) == b.roots[k].re.to_string(50));
    CHECK(a.roots[k].im.to_string(50) == b.roots[k].im.to_string(50));
    CHECK(a.residuals[k] < epsilon_pow2(170, prec));
  }
}

TEST_CASE("Bernoulli numbers and zeta values") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == mpq_class(-1, 2));
  CHECK(bernoulli(2) == mpq_class(1, 6));
  CHECK(bernoulli(4) == mpq_class(-1, 30));
  CHECK(bernoulli(12) == mpq_class(-691, 2730));
  CHECK(bernoulli(7) == 0);
  const int prec = 256;
  CHECK(zeta(0, prec) == Real(mpq_class(-1, 2), prec));
  CHECK(zeta(-1, prec) == Real(mpq_class(-1, 12), prec));
  CHECK(zeta(-2, prec).is_zero());
  for (long s : {2L, 3L, 4L, 5L, 10L, 21L, 40L, 300L}) {
    CAPTURE(s);
    Real ref(prec);
    mpfr_zeta_ui(ref.get(), static_cast<unsigned long>(s), MPFR_RNDN);
    CHECK(abs(zeta(s, prec) - ref) < epsilon_pow2(250, prec));
  }
  CHECK_THROWS_AS(zeta(1, prec), Error);
}

TEST_CASE("polylogarithm special values") {
  const int prec = 256;
  const Real tol = epsilon_pow2(245, prec);
  const Real pi = Real::pi(prec);
  const BigComplex one(1.0, 0.0, prec);
  CHECK(abs(polylog_unit(2, one, prec).re - pi * pi / 6L) < tol);
  CHECK(abs(polylog_unit(2, one, prec).im) < tol);
  const BigComplex xi = BigComplex::unit(pi * 2L / 3L);
  CHECK(abs(polylog_unit(2, xi, prec).re + pi * pi / 18L) < tol);
  CHECK(abs(polylog_unit(2, conj(xi), prec).re + pi * pi / 18L) < tol);
  CHECK(polylog_unit(5, BigComplex(prec), prec).is_zero());
  // Li2(-1) = -pi^2/12
  CHECK(abs(polylog_unit(2, -one, prec).re + pi * pi / 12L) < tol);
  // Im Li2(e^{i pi/3}) = Cl2(pi/3)
  CHECK(abs(polylog_unit_angle(2, pi / 3L, prec).im -
            Real::parse("1.01494160640965362502120255427452028594168930753029979201748910677659", prec)) <
        epsilon_pow2(220, prec));
  CHECK_THROWS_AS(polylog_unit(1, one, prec), Error);
  CHECK_THROWS_AS(polylog_unit(2, BigComplex(1.1, 0.0, prec), prec), Error);
}

TEST_CASE("polylogarithm against brute-force series") {
  // Li3(e^{0.7 i}) from a million terms in double precision.
  std::complex<double> direct = 0;
  for (long n = 1000000; n >= 1; --n) {
    const double nd = static_cast<double>(n);
    direct += std::polar(1.0 / (nd * nd * nd), 0.7 * nd);
  }
  const BigComplex li = polylog_unit_angle(3, Real(0.7, 53), 53);
  CHECK(std::abs(li.re.to_double() - direct.real()) < 1e-11);
  CHECK(std::abs(li.im.to_double() - direct.imag()) < 1e-11);

  // |z| = 0.8 lies in the log-series region; a long direct sum at high
  // precision is an independent oracle.
  const int prec = 192;
  for (int k : {2, 3, 6}) {
    const BigComplex z = BigComplex::unit(Real(2.1, prec)) * Real(0.8, prec);
    BigComplex s(prec + 30), zn = z;
    for (long n = 1; n <= 900; ++n) {
      s += zn / pow(Real(n, prec + 30), k);
      zn *= z;
    }
    CAPTURE(k);
    CHECK(abs(polylog_unit(k, z, prec) - s) < epsilon_pow2(185, prec));
  }
}

TEST_CASE("polylogarithm invariants") {
  const int prec = 192;
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> ang(-3.14, 3.14);
  std::uniform_real_distribution<double> rad(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + t % 5;
    const BigComplex z = BigComplex::unit(Real(ang(rng), prec)) * Real(std::sqrt(rad(rng)), prec);
    const BigComplex a = polylog_unit(k, z, prec);
    const BigComplex b = polylog_unit(k, conj(z), prec);
    CHECK(abs(a - conj(b)) < epsilon_pow2(180, prec));
    // Doubling precision changes the value by less than the error bound.
    const BigComplex hi = polylog_unit(k, z, 2 * prec);
    CHECK(abs(a - hi) < epsilon_pow2(prec - 8, 2 * prec));
  }
  // Angle and point forms agree on the circle.
  for (double phi : {0.3, 1.9, 3.1, -2.5}) {
    const BigComplex z = BigComplex::unit(Real(phi, prec));
    CHECK(abs(polylog_unit(4, z, prec) - polylog_unit_angle(4, Real(phi, prec), prec)) <
          epsilon_pow2(180, prec));
  }
  CHECK(abs(polylog_unit_angle(3, Real(0L, prec), prec).re - zeta(3, prec)) < epsilon_pow2(185, prec));
}

TEST_CASE("angle reduction") {
  const int prec = 128;
  const Real pi = Real::pi(prec);
  CHECK(abs(reduce_angle(-pi / 2L) - pi * 3L / 2L) < epsilon_pow2(120, prec));
  CHECK(abs(reduce_angle(pi * 7L) - pi) < epsilon_pow2(120, prec));
  CHECK(reduce_angle(Real(0L, prec)).is_zero());
}
