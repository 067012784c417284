#include <doctest.h>

#include <cmath>

#include "mahler/error.hpp"
#include "mahler/exactalg.hpp"
#include "mahler/expansion.hpp"
#include "mahler/numerics.hpp"

using namespace mahler;

namespace {

BiPoly poly(std::initializer_list<std::tuple<int, int, long>> terms) {
  std::map<BiPoly::Key, GaussRational> m;
  for (const auto& [i, j, c] : terms) m[{i, j}] += GaussRational(c);
  return BiPoly(std::move(m));
}

const BiPoly kOnePlusXPlusY = poly({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}});
const BiPoly kQuadratic = poly({{0, 2, 1}, {1, 1, 1}, {0, 0, 1}});  // y^2 + xy + 1
const BiPoly kProduct = poly({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("root series of sqrt(x) at 1") {
  const int prec = 192;
  const BigComplex one(1.0, 0.0, prec);
  const auto t = root_series(poly({{0, 2, 1}, {1, 0, -1}}), one, one, 8, prec);
  // binomial(1/2, k)
  mpq_class c = 1;
  for (int k = 0; k <= 8; ++k) {
    CHECK(abs(t[k].re - Real(c, prec)) < 1e-50);
    CHECK(abs(t[k].im) < 1e-50);
    c = c * (mpq_class(1, 2) - k) / (k + 1);
  }
}

TEST_CASE("Omega examples") {
  const int prec = 256;
  const BigComplex alpha = BigComplex::unit(Real(0.7, prec));
  const BigComplex beta = -(alpha + BigComplex(1.0, 0.0, prec));
  // Psi_{2,2} = -w_{1,0}, so Omega = -alpha / beta for 1 + x + y.
  CHECK(abs(omega_eval(kOnePlusXPlusY, 2, 2, alpha, beta, prec) + alpha / beta) < 1e-70);

  // At (1/xi, xi): (-1)^b sum_j c(j, b) S(r-1, j) xi^j with b = r - a + 1.
  const Real pi = Real::pi(prec);
  const BigComplex xi = BigComplex::unit(pi * 2L / 3L);
  for (int r = 2; r <= 8; ++r) {
    for (int a = 2; a <= r; ++a) {
      const int b = r - a + 1;
      BigComplex expected(prec);
      for (int j = b; j <= r - 1; ++j) {
        expected += pow(xi, j) * Real(mpz_class(stirling_first(j, b) * stirling_second(r - 1, j)), prec);
      }
      if (b % 2 == 1) expected = -expected;
      CAPTURE(r);
      CAPTURE(a);
      CHECK(abs(omega_eval(kOnePlusXPlusY, r, a, conj(xi), xi, prec) - expected) < 1e-60);
    }
  }
  CHECK(code_of([&] { omega_eval(kOnePlusXPlusY, 3, 4, alpha, beta, prec); }) == ErrorCode::kInvalidArgument);
  // dP/dy = 2y vanishes at (0, 0) on y^2 - x.
  CHECK(code_of([&] {
          omega_eval(poly({{0, 2, 1}, {1, 0, -1}}), 3, 2, BigComplex(prec), BigComplex(prec), prec);
        }) == ErrorCode::kDegenerate);
}

TEST_CASE("Omega via Psi equals phi / rho^(r-1) built from Q-based derivatives") {
  const int prec = 256;
  for (double t : {0.3, 1.7, 4.0}) {
    const BigComplex x = BigComplex::unit(Real(t, prec));
    for (const auto& y : roots_at(kQuadratic, x, prec)) {
      const auto d = implicit_derivs(kQuadratic, x, y, 4, prec);
      Assignment vals;
      vals.emplace(IndexedVar::y(0), y);
      BigComplex xp = x;
      for (int k = 1; k <= 4; ++k) {
        vals.emplace(IndexedVar::y(k), d[k - 1] * xp);
        xp *= x;
      }
      for (int r = 2; r <= 5; ++r) {
        for (int a = 2; a <= r; ++a) {
          const BigComplex phi = eval_intpoly(phi_poly(r - 1, r - a + 1), vals, prec);
          const BigComplex expected = phi / pow(y, r - 1);
          CAPTURE(r);
          CAPTURE(a);
          CHECK(abs(omega_eval(kQuadratic, r, a, x, y, prec) - expected) < 1e-60);
        }
      }
    }
  }
}

TEST_CASE("symbolic and series routes for Omega agree") {
  const int prec = 256;
  const BiPoly p = poly({{0, 2, 2}, {1, 1, -1}, {2, 0, 1}, {0, 1, 3}, {0, 0, 1}});
  for (double t : {0.9, 2.6}) {
    const BigComplex x = BigComplex::unit(Real(t, prec));
    for (const auto& y : roots_at(p, x, prec)) {
      for (int r = 2; r <= 9; ++r) {
        for (int a = 2; a <= r; ++a) {
          const BigComplex s = omega_eval(p, r, a, x, y, prec);
          const BigComplex q = omega_eval_series(p, r, a, x, y, prec);
          CHECK(abs(s - q) / max(abs(s), Real(1L, prec)) < 1e-60);
        }
      }
    }
  }
}

TEST_CASE("primitive part in y") {
  CHECK(primitive_part_y(kProduct).to_string() == "y + 1");
  CHECK(primitive_part_y(kOnePlusXPlusY * poly({{0, 0, 1}, {1, 0, 1}})).to_string() == "y + x + 1");
  CHECK(primitive_part_y(kOnePlusXPlusY).to_string() == "y + x + 1");
}

TEST_CASE("expansion context for 1 + x + y") {
  const int prec = 256;
  const ExpansionContext ctx(kOnePlusXPlusY, prec);
  REQUIRE(ctx.points().size() == 2);
  REQUIRE(ctx.modulus());
  CHECK(*ctx.modulus() == 3);
  CHECK(ctx.coefficient(2, 1).to_fixed(10) == "0.3022998940");
  CHECK(ctx.coefficient(3, 2).to_fixed(10) == "-0.9068996821");
  CHECK(ctx.coefficient(4, 3).to_fixed(10) == "0.1564663299");
  CHECK(ctx.coefficient(7, 3).to_fixed(10) == "165.1438848791");
  CHECK(code_of([&] { ctx.coefficient(1, 1); }) == ErrorCode::kInvalidArgument);
  for (int r = 2; r <= 10; ++r) {
    for (long n = 1; n <= 6; ++n) {
      CHECK(abs(ctx.coefficient(r, n) - ctx.coefficient(r, n + 3)) < 1e-20);
    }
  }
  // An x-only factor does not change the expansion.
  const ExpansionContext scaled(kOnePlusXPlusY * poly({{0, 0, 2}, {1, 0, 1}}), prec);
  CHECK(abs(scaled.coefficient(5, 2) - ctx.coefficient(5, 2)) < 1e-60);
}

TEST_CASE("null and failing cases") {
  const int prec = 192;
  CHECK(coefficient(kProduct, 2, 5, prec).is_zero());
  CHECK(coefficient(poly({{0, 1, 1}, {1, 0, -1}}), 4, 3, prec).is_zero());
  // (y - 1)^2 = x - 1 has a torus zero at (1, 1) where dP/dy vanishes.
  const BiPoly cusp = poly({{0, 2, 1}, {0, 1, -2}, {0, 0, 2}, {1, 0, -1}});
  CHECK(code_of([&] { ExpansionContext ctx(cusp, prec); }) == ErrorCode::kHypothesis);
}

TEST_CASE("closed form for 1 + x + y") {
  const int prec = 256;
  const Real pi = Real::pi(prec);
  const Real boyd = sqrt(Real(3L, prec)) * pi / 18L;
  CHECK(abs(coefficient_1xy(2, 1, prec) - boyd) < 1e-70);
  CHECK(abs(coefficient_1xy(2, 3, prec) - boyd) < 1e-70);
  CHECK(abs(coefficient_1xy(2, 2, prec) + boyd * 3L) < 1e-70);
  CHECK(coefficient_1xy(4, 3, prec).to_fixed(10) == "0.1564663299");
  const ExpansionContext ctx(kOnePlusXPlusY, prec);
  for (int r = 2; r <= 20; ++r) {
    for (long n = 1; n <= 3; ++n) {
      const Real a = ctx.coefficient(r, n);
      const Real b = coefficient_1xy(r, n, prec);
      CHECK(abs(a - b) / max(abs(b), Real(1L, prec)) < 1e-20);
    }
  }
}

TEST_CASE("closed forms for c_2 and c_3") {
  const int prec = 256;
  const Real pi = Real::pi(prec);
  const Real sqrt3 = sqrt(Real(3L, prec));
  for (long n = 1; n <= 4; ++n) {
    const auto [c2, c3] = closed_c2_c3(kOnePlusXPlusY, n, prec);
    const Real theta = pi * (2L * ((n + 1) % 3)) / 3L;
    const BigComplex li2 = polylog_unit_angle(2, theta, prec);
    const BigComplex li3 = polylog_unit_angle(3, theta, prec);
    CHECK(abs(c2 + sqrt3 / pi * li2.re) < 1e-60);
    CHECK(abs(c3 - (li3.im * 2L - sqrt3 * li2.re) / pi) < 1e-60);
  }
  CHECK(closed_c2_c3(kOnePlusXPlusY, 1, prec).second.to_fixed(10) == "-0.1850879776");

  const BiPoly others[] = {kQuadratic, poly({{0, 2, 1}, {1, 1, 2}, {1, 0, 1}, {0, 0, 1}}),
                           poly({{0, 1, 2}, {1, 0, 2}, {0, 0, 1}})};
  for (const auto& p : others) {
    const ExpansionContext ctx(p, prec);
    CAPTURE(p.to_string());
    CHECK(!ctx.points().empty());
    for (long n = 1; n <= 5; ++n) {
      const auto [c2, c3] = closed_c2_c3(ctx, n);
      CHECK(abs(c2 - ctx.coefficient(2, n)) < 1e-20);
      CHECK(abs(c3 - ctx.coefficient(3, n)) < 1e-20);
    }
  }
}

TEST_CASE("coefficient tables and partial sums") {
  const int prec = 256;
  const ExpansionContext ctx(kOnePlusXPlusY, prec);
  const CoefficientTable t = build_coefficient_table(ctx, 5);
  CHECK(t.entries.size() == 12);
  CHECK(t.modulus == 3);
  CHECK(partial_sum(t, 1, 61).is_zero());
  CHECK(abs(partial_sum(t, 2, 61) - t.at(2, 1) / 3721L) < 1e-70);
  CHECK(std::abs(partial_sum(t, 2, 61).to_double() - 0.3022998940 / 3721) < 1e-13);
  CHECK(code_of([&] { partial_sum(t, 6, 61); }) == ErrorCode::kInvalidArgument);

  const CoefficientTable par = build_coefficient_table(ctx, 5, {}, 3);
  for (const auto& [key, v] : t.entries) CHECK(par.entries.at(key) == v);
}

TEST_CASE("Richardson extrapolation") {
  const int prec = 128;
  std::vector<long> ns{10, 20, 30, 40};
  std::vector<Real> v;
  for (long n : ns) v.push_back(Real(2L, prec) + Real(mpq_class(3, n), prec) - Real(mpq_class(5, n * n), prec));
  CHECK(abs(richardson_limit(ns, v, 2) - Real(2L, prec)) < 1e-30);
  CHECK(abs(richardson_limit(ns, v, 3) - Real(2L, prec)) < 1e-30);
  CHECK(abs(richardson_limit(ns, v, 1) - Real(2L, prec)) > 1e-3);
}

TEST_CASE("empirical coefficients along n = 1 mod 3") {
  const int prec = 256;
  const ExpansionContext ctx(kOnePlusXPlusY, prec);
  const std::vector<long> ns{61, 121, 181, 241, 301};
  const auto e2 = empirical_coefficient(ctx, 2, 1, 3, ns);
  const double col2[] = {0.2989282502, 0.3006826863, 0.3012379282, 0.3015096124, 0.3016706736};
  for (std::size_t i = 0; i < ns.size(); ++i) CHECK(std::abs(e2.sequence[i].to_double() - col2[i]) < 1e-9);
  CHECK(e2.order == 4);
  const Real c2 = ctx.coefficient(2, 1);
  CHECK(abs(e2.limit - c2) < abs(e2.sequence.back() - c2) / 1000L);

  const auto e3 = empirical_coefficient(ctx, 3, 1, 3, ns);
  CHECK(std::abs(e3.sequence.front().to_double() + 0.2056702769) < 1e-9);
  CHECK(std::abs(e3.sequence.back().to_double() + 0.1893953380) < 1e-9);
  CHECK(abs(e3.limit - ctx.coefficient(3, 1)) < 1e-5);

  CHECK(code_of([&] { empirical_coefficient(ctx, 2, 1, 3, {61, 62}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { empirical_coefficient(ctx, 2, 1, 3, {121, 61}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("singular exponent fit") {
  const int prec = 128;
  std::vector<long> ns;
  for (long n = 40; n <= 120; n += 4) ns.push_back(n);
  for (long n = 41; n <= 120; n += 4) ns.push_back(n);
  std::sort(ns.begin(), ns.end());
  const SingularFit fit = fit_singular_exponent(kOnePlusXPlusY, ns, 3, prec);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(fit.amplitude.size() == 3);
  CHECK(fit.amplitude.at(2) < 0);
  CHECK(code_of([&] { fit_singular_exponent(kProduct, {10, 11, 12, 13}, 2, prec); }) ==
        ErrorCode::kDegenerate);
}
