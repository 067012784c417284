#include <doctest.h>

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "mahler/error.hpp"
#include "mahler/exactalg.hpp"

using namespace mahler;

namespace {

// Number of set partitions of {0..n-1} into exactly k blocks, by brute force
// over restricted growth strings.
long count_partitions(int n, int k) {
  long count = 0;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int maxv) {
    if (pos == n) {
      if (maxv + 1 == k) ++count;
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      a[pos] = v;
      rec(pos + 1, std::max(maxv, v));
    }
  };
  if (n == 0) return k == 0 ? 1 : 0;
  a[0] = 0;
  rec(1, 0);
  return count;
}

// Number of permutations of n elements with exactly k cycles.
long count_cycles(int n, int k) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  long count = 0;
  do {
    std::vector<bool> seen(n, false);
    int cycles = 0;
    for (int i = 0; i < n; ++i) {
      if (seen[i]) continue;
      ++cycles;
      for (int j = i; !seen[j]; j = p[j]) seen[j] = true;
    }
    if (cycles == k) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

mpq_class eval_q(const IntPoly& p, const std::map<IndexedVar, mpq_class>& vals) {
  mpq_class sum = 0;
  for (const auto& [m, c] : p.terms()) {
    mpq_class t = c;
    for (const auto& [v, e] : m.factors()) {
      auto it = vals.find(v);
      mpq_class x = it == vals.end() ? mpq_class(0) : it->second;
      for (unsigned k = 0; k < e; ++k) t *= x;
    }
    sum += t;
  }
  return sum;
}

IntPoly P(const std::string& s) { return IntPoly::parse(s); }

}  // namespace

TEST_CASE("stirling numbers agree with brute-force counts") {
  for (int n = 0; n <= 7; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(stirling_second(n, k) == count_partitions(n, k));
      if (n > 0) CHECK(stirling_first(n, k) == count_cycles(n, k));
    }
  }
  CHECK(stirling_first(0, 0) == 1);
  CHECK(stirling_second(4, 2) == 7);
  CHECK(stirling_first(5, 2) == 50);
  CHECK(stirling_second(3, 5) == 0);
}

TEST_CASE("partial Bell polynomials") {
  CHECK(bell_partial(0, 0) == IntPoly(1));
  CHECK(bell_partial(3, 0).is_zero());
  CHECK(bell_partial(3, 2) == P("3*y[1]*y[2]"));
  CHECK(bell_partial(4, 2) == P("3*y[2]^2 + 4*y[1]*y[3]"));
  CHECK(bell_partial(5, 5) == P("y[1]^5"));
  // Setting all y_i = 1 counts set partitions.
  for (unsigned n = 1; n <= 9; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      mpz_class total = 0;
      const IntPoly b = bell_partial(n, k);
      for (const auto& [m, c] : b.terms()) total += c;
      CHECK(total == stirling_second(n, k));
    }
  }
}

TEST_CASE("Phi_{n,k} small table") {
  const std::map<std::pair<unsigned, unsigned>, std::string> table = {
      {{0, 0}, "y[0]^0"},
      {{1, 1}, "y[1]"},
      {{2, 1}, "y[0]*y[1] + y[0]*y[2] - y[1]^2"},
      {{2, 2}, "y[1]^2"},
      {{3, 1}, "y[0]^2*y[1] + 3*y[0]^2*y[2] + y[0]^2*y[3] - 3*y[0]*y[1]^2 - 3*y[0]*y[1]*y[2] + "
               "2*y[1]^3"},
      {{3, 2}, "3*y[0]*y[1]^2 + 3*y[0]*y[1]*y[2] - 3*y[1]^3"},
      {{3, 3}, "y[1]^3"},
      {{4, 1}, "y[0]^3*y[1] + 7*y[0]^3*y[2] + 6*y[0]^3*y[3] + y[0]^3*y[4] - 7*y[0]^2*y[1]^2 - "
               "18*y[0]^2*y[1]*y[2] - 4*y[0]^2*y[1]*y[3] - 3*y[0]^2*y[2]^2 + 12*y[0]*y[1]^3 + "
               "12*y[0]*y[1]^2*y[2] - 6*y[1]^4"},
      {{4, 2}, "7*y[0]^2*y[1]^2 + 18*y[0]^2*y[1]*y[2] + 4*y[0]^2*y[1]*y[3] + 3*y[0]^2*y[2]^2 - "
               "18*y[0]*y[1]^2*y[2] - 18*y[0]*y[1]^3 + 11*y[1]^4"},
      {{4, 3}, "6*y[0]*y[1]^2*y[2] + 6*y[0]*y[1]^3 - 6*y[1]^4"},
      {{4, 4}, "y[1]^4"},
  };
  for (unsigned n = 0; n <= 4; ++n) {
    for (unsigned k = 0; k <= 4; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      auto it = table.find({n, k});
      if (it == table.end()) {
        CHECK(phi_poly(n, k).is_zero());
      } else if (n == 0) {
        CHECK(phi_poly(n, k) == IntPoly(1));
      } else {
        CHECK(phi_poly(n, k) == P(it->second));
      }
    }
  }
}

TEST_CASE("Phi_{n,k} is homogeneous of degree n") {
  for (unsigned n = 1; n <= 12; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(phi_poly(n, k).is_homogeneous(n));
    }
  }
}

TEST_CASE("Phi_{10,1} term count") { CHECK(phi_poly(10, 1).size() == 138); }

TEST_CASE("Q_n first members") {
  CHECK(q_poly(1) == P("-w[1,0]"));
  CHECK(q_poly(2) == P("-w[0,1]^2*w[2,0] + 2*w[0,1]*w[1,0]*w[1,1] - w[0,2]*w[1,0]^2"));
  CHECK_THROWS_AS(q_poly(0), Error);
}

TEST_CASE("Q_n variables and degree constraints") {
  for (unsigned n = 1; n <= 6; ++n) {
    const IntPoly q = q_poly(n);
    CHECK(q.is_homogeneous(2 * n - 1));
    for (const auto& v : q.variables()) {
      CHECK(v.family == VarFamily::kW);
      CHECK(v.i + v.j <= n);
      CHECK(!(v.i == 0 && v.j == 0));
    }
  }
}

// y^(n) = Q_n / w01^(2n-1) where w_ij are the partial derivatives of F at a
// point of F(x, y) = 0.
TEST_CASE("Q_n reproduces implicit derivatives") {
  SUBCASE("y^2 - x at (4, 2): y = sqrt(x)") {
    std::map<IndexedVar, mpq_class> w = {
        {IndexedVar::w(1, 0), -1}, {IndexedVar::w(0, 1), 4}, {IndexedVar::w(0, 2), 2}};
    mpq_class coeff(1, 2);  // (1/2)(1/2 - 1)...(1/2 - n + 1)
    for (unsigned n = 1; n <= 7; ++n) {
      if (n > 1) coeff *= mpq_class(3 - 2 * static_cast<int>(n), 2);
      // x^(1/2 - n) at x = 4 is 2 / 4^n
      mpq_class expected = coeff * 2;
      for (unsigned k = 0; k < n; ++k) expected /= 4;
      mpq_class den = 1;
      for (unsigned k = 0; k < 2 * n - 1; ++k) den *= 4;
      CAPTURE(n);
      CHECK(eval_q(q_poly(n), w) / den == expected);
    }
  }
  SUBCASE("x*y - 1 at (2, 1/2): y = 1/x") {
    std::map<IndexedVar, mpq_class> w = {
        {IndexedVar::w(1, 0), mpq_class(1, 2)}, {IndexedVar::w(0, 1), 2}, {IndexedVar::w(1, 1), 1}};
    mpz_class fact = 1;
    for (unsigned n = 1; n <= 7; ++n) {
      fact *= n;
      mpq_class expected = fact;  // (-1)^n n! / x^(n+1)
      if (n % 2 == 1) expected = -expected;
      for (unsigned k = 0; k <= n; ++k) expected /= 2;
      mpq_class den = 1;
      for (unsigned k = 0; k < 2 * n - 1; ++k) den *= 2;
      CAPTURE(n);
      CHECK(eval_q(q_poly(n), w) / den == expected);
    }
  }
  SUBCASE("y - x^3 at (1, 1)") {
    std::map<IndexedVar, mpq_class> w = {{IndexedVar::w(1, 0), -3},
                                         {IndexedVar::w(0, 1), 1},
                                         {IndexedVar::w(2, 0), -6},
                                         {IndexedVar::w(3, 0), -6}};
    const std::vector<int> expected = {0, 3, 6, 6, 0, 0, 0};
    for (unsigned n = 1; n <= 6; ++n) {
      CAPTURE(n);
      CHECK(eval_q(q_poly(n), w) == expected[n]);
    }
  }
}

TEST_CASE("Psi_{r,a} small table") {
  const std::map<std::pair<unsigned, unsigned>, std::string> table = {
      {{2, 2}, "-w[1,0]"},
      {{3, 2}, "w[1,0]^2"},
      {{3, 3}, "-w[0,1]^2*w[2,0] + 2*w[0,1]*w[1,0]*w[1,1] - w[0,2]*w[1,0]^2 - w[1,0]^2 - w[1,0]"},
      {{4, 2}, "-w[1,0]^3"},
      {{4, 3}, "3*w[0,1]^2*w[1,0]*w[2,0] - 6*w[0,1]*w[1,0]^2*w[1,1] + 3*w[0,2]*w[1,0]^3 + "
               "3*w[1,0]^3 + 3*w[1,0]^2"},
      {{4, 4}, "-w[0,1]^4*w[3,0] + 3*w[0,1]^3*w[1,0]*w[2,1] + 3*w[0,1]^3*w[1,1]*w[2,0] - "
               "3*w[0,1]^2*w[1,0]^2*w[1,2] - 3*w[0,1]^2*w[0,2]*w[1,0]*w[2,0] - "
               "6*w[0,1]^2*w[1,0]*w[1,1]^2 + 9*w[0,1]*w[0,2]*w[1,0]^2*w[1,1] + "
               "w[0,1]*w[0,3]*w[1,0]^3 - 3*w[0,2]^2*w[1,0]^3 - 3*w[0,1]^2*w[1,0]*w[2,0] + "
               "6*w[0,1]*w[1,0]^2*w[1,1] - 3*w[0,2]*w[1,0]^3 - 3*w[0,1]^2*w[2,0] + "
               "6*w[0,1]*w[1,0]*w[1,1] - 3*w[0,2]*w[1,0]^2 - 2*w[1,0]^3 - 3*w[1,0]^2 - w[1,0]"},
  };
  for (const auto& [key, text] : table) {
    CAPTURE(key.first);
    CAPTURE(key.second);
    CHECK(psi_poly(key.first, key.second) == P(text));
  }
  CHECK_THROWS_AS(psi_poly(3, 1), Error);
  CHECK_THROWS_AS(psi_poly(3, 4), Error);
}

TEST_CASE("IntPoly text round trip") {
  for (unsigned r = 2; r <= 6; ++r) {
    for (unsigned a = 2; a <= r; ++a) {
      const IntPoly p = psi_poly(r, a);
      CHECK(IntPoly::parse(p.to_string()) == p);
    }
  }
  CHECK(P("\xE2\x88\x92" "2*w[1,0]") == P("-2*w[1,0]"));
  CHECK(P("3") == IntPoly(3));
  CHECK(P("2*y[1]*3") == P("6*y[1]"));
  CHECK_THROWS_AS(P("w[1]"), Error);
  CHECK_THROWS_AS(P(""), Error);
  CHECK_THROWS_AS(P("y[1] y[2]"), Error);
}

TEST_CASE("IntPoly arithmetic") {
  const IntPoly a = P("y[1] + y[2]");
  CHECK(a.pow(2) == P("y[1]^2 + 2*y[1]*y[2] + y[2]^2"));
  CHECK((a - a).is_zero());
  CHECK(a.substitute([](const IndexedVar& v) { return IntPoly(v.i); }) == IntPoly(3));
  CHECK(P("y[1]^2 + y[2]").to_string() == "y[1]^2 + y[2]");
}

TEST_CASE("numeric Phi and Bell evaluation match the symbolic forms") {
  const int prec = 128;
  std::vector<BigComplex> y;
  Assignment vals;
  for (unsigned m = 0; m <= 8; ++m) {
    y.emplace_back(0.3 + 0.1 * m, -0.2 + 0.05 * m * m, prec);
    vals.emplace(IndexedVar::y(m), y.back());
  }
  PhiEvaluator ev(y, 8, prec);
  const Real tol = epsilon_pow2(100, prec);
  for (unsigned n = 0; n <= 8; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      const BigComplex sym = eval_intpoly(phi_poly(n, k), vals, prec);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(abs(sym - ev(n, k)) < tol);
      const BigComplex bs = eval_intpoly(bell_partial(n, k), vals, prec);
      CHECK(abs(bs - ev.bell(n, k)) < tol);
    }
  }
  CHECK_THROWS_AS(eval_intpoly(P("y[9]"), vals, prec), Error);
}
