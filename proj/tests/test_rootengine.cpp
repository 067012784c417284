#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mahler/error.hpp"
#include "mahler/rootengine.hpp"

using namespace mahler;

namespace {

BiPoly poly(std::initializer_list<std::tuple<int, int, long>> terms) {
  std::map<BiPoly::Key, GaussRational> m;
  for (const auto& [i, j, c] : terms) m[{i, j}] += GaussRational(c);
  return BiPoly(std::move(m));
}

const BiPoly kOnePlusXPlusY = poly({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}});
const BiPoly kTwoPlusXPlusY = poly({{0, 0, 2}, {1, 0, 1}, {0, 1, 1}});
const BiPoly kQuadratic = poly({{0, 2, 1}, {1, 1, 1}, {0, 0, 1}});  // y^2 + xy + 1
const BiPoly kSqrt = poly({{0, 2, 1}, {1, 0, -1}});                 // y^2 - x
const BiPoly kProduct = poly({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});

double angle_dist(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
  return std::min(d, 2 * std::numbers::pi - d);
}

// The root of P(x, .) nearest to `guess`.
BigComplex root_near(const BiPoly& p, const BigComplex& x, const BigComplex& guess, int prec) {
  auto r = roots_at(p, x, prec);
  std::size_t best = 0;
  for (std::size_t j = 1; j < r.size(); ++j) {
    if (abs(r[j] - guess) < abs(r[best] - guess)) best = j;
  }
  return r[best];
}

// k-th derivative of the branch through (x, y) by central differences.
BigComplex central_difference(const BiPoly& p, const BigComplex& x, const BigComplex& y, int k,
                              const Real& h, int prec) {
  BigComplex acc(prec);
  mpz_class binom = 1;
  for (int j = 0; j <= k; ++j) {
    // offset (j - k/2) h
    const Real off = h * Real(mpq_class(2 * j - k, 2), prec);
    const BigComplex v = root_near(p, x + BigComplex::from_real(off), y, prec);
    BigComplex term = v * Real(binom, prec);
    if ((k - j) % 2 == 1) term = -term;
    acc += term;
    binom = binom * (k - j) / (j + 1);
  }
  return acc / pow(h, k);
}

}  // namespace

TEST_CASE("roots_at examples") {
  const int prec = 128;
  const BigComplex x0(0.3, -0.7, prec);
  const auto r = roots_at(kOnePlusXPlusY, x0, prec);
  REQUIRE(r.size() == 1);
  CHECK(abs(r[0] + x0 + BigComplex(1.0, 0.0, prec)) < 1e-35);

  const auto s = roots_at(kSqrt, BigComplex(1.0, 0.0, prec), prec);
  REQUIRE(s.size() == 2);
  CHECK(abs(abs(s[0].re) - Real(1L, prec)) < 1e-35);
  CHECK(abs(s[0] + s[1]) < 1e-35);

  const auto q = roots_at(kQuadratic, BigComplex(prec), prec);
  REQUIRE(q.size() == 2);
  CHECK(abs(q[0].re) < 1e-35);
  CHECK(abs(abs(q[0].im) - Real(1L, prec)) < 1e-35);

  CHECK_THROWS_AS(roots_at(kProduct, BigComplex(-1.0, 0.0, prec), prec), Error);
}

TEST_CASE("tracking 1 + x + y") {
  const int prec = 96;
  const auto tr = track_roots(kOnePlusXPlusY, 256, prec);
  REQUIRE(tr.size() == 1);
  for (std::size_t k = 0; k < tr[0].angles.size(); k += 17) {
    const double t = tr[0].angles[k];
    CHECK(abs(tr[0].values[k]).to_double() == doctest::Approx(std::abs(2 * std::cos(t / 2))).epsilon(1e-12));
  }
  REQUIRE(tr[0].crossings.size() == 2);
  CHECK(angle_dist(tr[0].crossings[0].angle, 2 * std::numbers::pi / 3) < 1e-10);
  CHECK(tr[0].crossings[0].direction == -1);
  CHECK(angle_dist(tr[0].crossings[1].angle, 4 * std::numbers::pi / 3) < 1e-10);
  CHECK(tr[0].crossings[1].direction == 1);
}

TEST_CASE("tracking degenerate and simple cases") {
  const int prec = 96;
  const auto prod = track_roots(kProduct, 64, prec);
  REQUIRE(prod.size() == 1);
  for (const auto& arc : prod[0].arcs) CHECK(arc.cls == Modulus::kOnCircle);

  const auto lin = track_roots(poly({{0, 1, 1}, {1, 0, -2}}), 64, prec);
  REQUIRE(lin.size() == 1);
  REQUIRE(lin[0].arcs.size() == 1);
  CHECK(lin[0].arcs[0].cls == Modulus::kOutside);
  CHECK(lin[0].crossings.empty());

  // 2 + x + y touches the circle at x = -1 without crossing.
  const auto touch = track_roots(kTwoPlusXPlusY, 64, prec);
  REQUIRE(touch[0].crossings.size() == 1);
  CHECK(touch[0].crossings[0].direction == 0);
  CHECK(angle_dist(touch[0].crossings[0].angle, std::numbers::pi) < 1e-8);

  const auto quad = track_roots(kQuadratic, 128, prec);
  CHECK(quad.size() == 2);
}

TEST_CASE("exceptional set of 1 + x + y") {
  const int prec = 256;
  const auto e = exceptional_set(kOnePlusXPlusY, prec);
  REQUIRE(e.size() == 2);
  const Real pi = Real::pi(prec);
  const Real tol = epsilon_pow2(200, prec);
  // Sorted by angle of alpha: (xi, 1/xi) first.
  CHECK(abs(e[0].alpha.angle - pi * 2L / 3L) < tol);
  CHECK(abs(e[0].beta.angle - pi * 4L / 3L) < tol);
  CHECK(e[0].sign == -1);
  CHECK(e[0].order == 1);
  CHECK(abs(e[1].alpha.angle - pi * 4L / 3L) < tol);
  CHECK(abs(e[1].beta.angle - pi * 2L / 3L) < tol);
  CHECK(e[1].sign == 1);
  CHECK(e[1].order == 1);
  // b_1 at (1/xi, xi) is sqrt(3)/2 + i/2.
  CHECK(abs(e[1].b[0].re - sqrt(Real(3L, prec)) / 2L) < tol);
  CHECK(abs(e[1].b[0].im - Real(0.5, prec)) < tol);
}

TEST_CASE("exceptional sets that are empty or have sign zero") {
  const int prec = 192;
  CHECK(exceptional_set(kProduct, prec).empty());
  CHECK(exceptional_set(poly({{0, 1, 1}, {1, 0, -1}}), prec).empty());
  CHECK(exceptional_set(poly({{0, 1, 1}, {1, 0, -2}}), prec).empty());
  const auto e = exceptional_set(kTwoPlusXPlusY, prec);
  REQUIRE(e.size() == 1);
  CHECK(abs(e[0].alpha.angle - Real::pi(prec)) < 1e-50);
  CHECK(e[0].sign == 0);
  CHECK(e[0].order == 2);
}

TEST_CASE("signs agree with local crossing direction") {
  const int prec = 192;
  const Real h = epsilon_pow2(30, prec);
  for (const BiPoly* p : {&kOnePlusXPlusY, &kQuadratic, &kTwoPlusXPlusY}) {
    const auto e = exceptional_set(*p, prec);
    CHECK(!e.empty());
    for (const auto& ep : e) {
      CHECK(crossing_direction(*p, ep.alpha.value, ep.beta.value, h, prec) == ep.sign);
    }
  }
  CHECK(exceptional_set(kQuadratic, prec).size() == 4);
}

TEST_CASE("conjugation reverses the sign on real polynomials") {
  const int prec = 192;
  for (const auto& ep : exceptional_set(kOnePlusXPlusY, prec)) {
    const auto s = sign_at(kOnePlusXPlusY, conj(ep.alpha.value), conj(ep.beta.value), prec);
    CHECK(s.sign == -ep.sign);
  }
}

TEST_CASE("Maclaurin coefficients") {
  const int prec = 192;
  const BigComplex one(1.0, 0.0, prec);
  const auto b = maclaurin_b(poly({{0, 1, 1}, {1, 0, -1}}), one, one, 5, prec);
  CHECK(abs(b[0].re) < 1e-50);
  CHECK(abs(b[0].im - Real(1L, prec)) < 1e-50);
  for (int k = 1; k < 5; ++k) CHECK(abs(b[k]) < 1e-50);
  // y^2 - x on the branch sqrt(x): f(t) = i t / 2.
  const auto c = maclaurin_b(kSqrt, one, one, 4, prec);
  CHECK(abs(c[0].im - Real(0.5, prec)) < 1e-50);
  CHECK(abs(c[1]) < 1e-50);
}

TEST_CASE("implicit derivatives") {
  const int prec = 256;
  const BigComplex x0(0.2, 0.9, prec);
  const BigComplex y0 = -(x0 + BigComplex(1.0, 0.0, prec));
  const auto d = implicit_derivs(kOnePlusXPlusY, x0, y0, 3, prec);
  CHECK(abs(d[0] + BigComplex(1.0, 0.0, prec)) < 1e-60);
  CHECK(abs(d[1]) < 1e-60);

  const BigComplex one(1.0, 0.0, prec);
  const auto s = implicit_derivs(kSqrt, one, one, 4, prec);
  CHECK(abs(s[0].re - Real(0.5, prec)) < 1e-60);
  CHECK(abs(s[1].re + Real(0.25, prec)) < 1e-60);
  CHECK(abs(s[2].re - Real(0.375, prec)) < 1e-60);
  CHECK(abs(s[3].re + Real(0.9375, prec)) < 1e-60);

  CHECK_THROWS_AS(implicit_derivs(kSqrt, BigComplex(prec), BigComplex(prec), 2, prec), Error);
}

TEST_CASE("implicit derivatives match finite differences of tracked roots") {
  const int prec = 256;
  const Real h = epsilon_pow2(40, prec);
  for (const BiPoly* p : {&kOnePlusXPlusY, &kSqrt, &kQuadratic}) {
    for (double t : {0.4, 2.0, 5.1}) {
      const BigComplex x = BigComplex::unit(Real(t, prec));
      for (const auto& y : roots_at(*p, x, prec)) {
        const auto d = implicit_derivs(*p, x, y, 4, prec);
        for (int k = 1; k <= 4; ++k) {
          const BigComplex fd = central_difference(*p, x, y, k, h, prec);
          const Real scale = max(abs(d[k - 1]), Real(1L, prec));
          CAPTURE(k);
          CHECK(abs(fd - d[k - 1]) / scale < 1e-6);
        }
      }
    }
  }
}
