#include "mahler/exactalg.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>

#include "mahler/error.hpp"

namespace mahler {

// ---------------------------------------------------------------------------
// Variables and monomials

std::string IndexedVar::to_string() const {
  if (family == VarFamily::kY) return "y[" + std::to_string(i) + "]";
  return "w[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

Monomial::Monomial(IndexedVar v, unsigned e) {
  if (e > 0) factors_.emplace_back(v, e);
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& [v, e] : factors_) d += e;
  return d;
}

unsigned Monomial::exponent_of(const IndexedVar& v) const {
  for (const auto& [u, e] : factors_) {
    if (u == v) return e;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin();
  auto b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return r;
}

bool GradedLexGreater::operator()(const Monomial& a, const Monomial& b) const {
  const unsigned da = a.degree();
  const unsigned db = b.degree();
  if (da != db) return da > db;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  const std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (fa[k].first != fb[k].first) return fa[k].first < fb[k].first;
    if (fa[k].second != fb[k].second) return fa[k].second > fb[k].second;
  }
  return false;
}

// ---------------------------------------------------------------------------
// IntPoly

IntPoly::IntPoly(const mpz_class& constant) {
  if (constant != 0) terms_.emplace(Monomial(), constant);
}

IntPoly IntPoly::variable(IndexedVar v) { return term(1, Monomial(v)); }

IntPoly IntPoly::term(const mpz_class& coeff, Monomial m) {
  IntPoly p;
  if (coeff != 0) p.terms_.emplace(std::move(m), coeff);
  return p;
}

mpz_class IntPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

std::vector<IndexedVar> IntPoly::variables() const {
  std::vector<IndexedVar> vars;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m.factors()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool IntPoly::is_homogeneous(unsigned d) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return t.first.degree() == d; });
}

void IntPoly::add_term(const mpz_class& coeff, const Monomial& m) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(c, m);
  return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(-c, m);
  return *this;
}

IntPoly& IntPoly::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, v] : terms_) v *= c;
  }
  return *this;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  IntPoly r = *this;
  r += o;
  return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
  IntPoly r = *this;
  r -= o;
  return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  IntPoly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) r.add_term(ca * cb, ma * mb);
  }
  return r;
}

IntPoly IntPoly::operator*(const mpz_class& c) const {
  IntPoly r = *this;
  r *= c;
  return r;
}

IntPoly IntPoly::operator-() const { return *this * mpz_class(-1); }

IntPoly IntPoly::pow(unsigned e) const {
  IntPoly result(1);
  IntPoly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

IntPoly IntPoly::substitute(const std::function<IntPoly(const IndexedVar&)>& image) const {
  std::map<IndexedVar, std::vector<IntPoly>> powers;
  auto power_of = [&](const IndexedVar& v, unsigned e) -> const IntPoly& {
    auto& list = powers[v];
    if (list.empty()) {
      list.emplace_back(1);
      list.push_back(image(v));
    }
    while (list.size() <= e) list.push_back(list.back() * list[1]);
    return list[e];
  };
  IntPoly result;
  for (const auto& [m, c] : terms_) {
    IntPoly t(c);
    for (const auto& [v, e] : m.factors()) {
      t = t * power_of(v, e);
      if (t.is_zero()) break;
    }
    result += t;
  }
  return result;
}

std::string IntPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const mpz_class mag = abs(c);
    bool need_star = false;
    if (m.is_one() || mag != 1) {
      out << mag.get_str();
      need_star = true;
    }
    for (const auto& [v, e] : m.factors()) {
      if (need_star) out << '*';
      out << v.to_string();
      if (e != 1) out << '^' << e;
      need_star = true;
    }
  }
  return out.str();
}

namespace {

class IntPolyParser {
 public:
  explicit IntPolyParser(std::string text) : s_(normalize(std::move(text))) {}

  IntPoly parse() {
    IntPoly result;
    skip();
    if (at_end()) error("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1 : 1;
        skip();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      first = false;
      auto [coeff, mono] = term();
      result.add_term(coeff * sign, mono);
      skip();
    }
    return result;
  }

 private:
  static std::string normalize(std::string t) {
    // U+2212 MINUS SIGN
    const std::string minus = "\xE2\x88\x92";
    for (std::size_t p = t.find(minus); p != std::string::npos; p = t.find(minus, p)) {
      t.replace(p, minus.size(), "-");
    }
    return t;
  }

  std::pair<mpz_class, Monomial> term() {
    mpz_class coeff = 1;
    Monomial mono;
    bool any = false;
    while (true) {
      skip();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        coeff *= integer();
      } else if (peek() == 'y' || peek() == 'w') {
        mono = mono * factor();
      } else {
        error("expected coefficient or variable");
      }
      any = true;
      skip();
      if (peek() == '*') {
        get();
        continue;
      }
      break;
    }
    if (!any) error("empty term");
    return {coeff, mono};
  }

  Monomial factor() {
    const char fam = get();
    expect('[');
    const unsigned i = static_cast<unsigned>(integer().get_ui());
    unsigned j = 0;
    if (fam == 'w') {
      expect(',');
      j = static_cast<unsigned>(integer().get_ui());
    }
    expect(']');
    unsigned e = 1;
    skip();
    if (peek() == '^') {
      get();
      e = static_cast<unsigned>(integer().get_ui());
    }
    const IndexedVar v = fam == 'w' ? IndexedVar::w(i, j) : IndexedVar::y(i);
    return Monomial(v, e);
  }

  mpz_class integer() {
    skip();
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) error("expected integer");
    return mpz_class(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip();
    if (get() != c) error(std::string("expected '") + c + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() { return at_end() ? '\0' : s_[pos_++]; }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kInvalidArgument,
         "IntPoly parse error at position " + std::to_string(pos_) + ": " + what);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

IntPoly IntPoly::parse(const std::string& text) { return IntPolyParser(text).parse(); }

// ---------------------------------------------------------------------------
// Combinatorial tables

mpz_class factorial(unsigned n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace {

// Triangular table grown on demand by a recurrence; guarded for concurrent use.
class StirlingTable {
 public:
  explicit StirlingTable(bool first_kind) : first_kind_(first_kind) { rows_.push_back({1}); }

  mpz_class get(unsigned n, unsigned k) {
    if (k > n) return 0;
    std::lock_guard<std::mutex> lock(mu_);
    while (rows_.size() <= n) {
      const unsigned m = static_cast<unsigned>(rows_.size());  // building row m
      const auto& prev = rows_.back();
      std::vector<mpz_class> row(m + 1);
      for (unsigned j = 1; j <= m; ++j) {
        const mpz_class left = prev[j - 1];
        const mpz_class up = j < m ? prev[j] : mpz_class(0);
        // c(m,j) = c(m-1,j-1) + (m-1) c(m-1,j);  S(m,j) = S(m-1,j-1) + j S(m-1,j)
        row[j] = left + (first_kind_ ? mpz_class(m - 1) : mpz_class(j)) * up;
      }
      rows_.push_back(std::move(row));
    }
    return rows_[n][k];
  }

 private:
  bool first_kind_;
  std::mutex mu_;
  std::vector<std::vector<mpz_class>> rows_;
};

StirlingTable& first_table() {
  static StirlingTable t(true);
  return t;
}

StirlingTable& second_table() {
  static StirlingTable t(false);
  return t;
}

template <typename Key>
class PolyCache {
 public:
  template <typename Make>
  IntPoly get(const Key& key, Make make) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    IntPoly value = make();
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(value)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<Key, IntPoly> cache_;
};

}  // namespace

mpz_class stirling_first(unsigned n, unsigned k) { return first_table().get(n, k); }

mpz_class stirling_second(unsigned n, unsigned k) { return second_table().get(n, k); }

// ---------------------------------------------------------------------------
// Bell, Phi, Q, Psi

namespace {

void bell_enumerate(unsigned n, unsigned idx, unsigned max_idx, unsigned count_left,
                    unsigned weight_left, std::vector<unsigned>& js, IntPoly& out) {
  if (idx > max_idx) {
    if (count_left != 0 || weight_left != 0) return;
    mpz_class denom = 1;
    Monomial mono;
    for (unsigned i = 1; i <= max_idx; ++i) {
      const unsigned j = js[i];
      if (j == 0) continue;
      mpz_class fi = factorial(i);
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), fi.get_mpz_t(), j);
      denom *= factorial(j) * p;
      mono = mono * Monomial(IndexedVar::y(i), j);
    }
    out.add_term(factorial(n) / denom, mono);
    return;
  }
  const unsigned cap = std::min(count_left, weight_left / idx);
  for (unsigned j = 0; j <= cap; ++j) {
    js[idx] = j;
    bell_enumerate(n, idx + 1, max_idx, count_left - j, weight_left - j * idx, js, out);
  }
  js[idx] = 0;
}

}  // namespace

IntPoly bell_partial(unsigned n, unsigned k) {
  if (k > n) return {};
  if (k == 0) return n == 0 ? IntPoly(1) : IntPoly();
  static PolyCache<std::pair<unsigned, unsigned>> cache;
  return cache.get({n, k}, [n, k] {
    IntPoly out;
    const unsigned max_idx = n - k + 1;
    std::vector<unsigned> js(max_idx + 1, 0);
    bell_enumerate(n, 1, max_idx, k, n, js, out);
    return out;
  });
}

IntPoly phi_poly(unsigned n, unsigned k) {
  if (k > n) return {};
  static PolyCache<std::pair<unsigned, unsigned>> cache;
  return cache.get({n, k}, [n, k] {
    IntPoly out;
    const IntPoly y0 = IntPoly::variable(IndexedVar::y(0));
    for (unsigned i = k; i <= n; ++i) {
      const mpz_class c1 = stirling_first(i, k);
      if (c1 == 0) continue;
      const IntPoly y0pow = y0.pow(n - i);
      for (unsigned j = i; j <= n; ++j) {
        const mpz_class s2 = stirling_second(n, j);
        if (s2 == 0) continue;
        const IntPoly b = bell_partial(j, i);
        if (b.is_zero()) continue;
        mpz_class c = c1 * s2;
        if ((i - k) % 2 == 1) c = -c;
        out += (y0pow * b) * c;
      }
    }
    return out;
  });
}

namespace {

struct QSearch {
  unsigned n;
  std::vector<std::pair<unsigned, unsigned>> cells;  // (i, j), i descending
  std::vector<unsigned> e;
  IntPoly out;

  void emit() {
    // b_{n,e} = (-1)^{2n-1-e01} n! (2n-2-e01)! e01! / prod e_ij! (i! j!)^e_ij
    unsigned e01 = 0;
    mpq_class denom = 1;
    Monomial mono;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (e[c] == 0) continue;
      const auto [i, j] = cells[c];
      if (i == 0 && j == 1) e01 = e[c];
      mpz_class ij = factorial(i) * factorial(j);
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), ij.get_mpz_t(), e[c]);
      denom *= mpq_class(factorial(e[c]) * p);
      mono = mono * Monomial(IndexedVar::w(i, j), e[c]);
    }
    mpq_class b(factorial(n) * factorial(2 * n - 2 - e01) * factorial(e01));
    b /= denom;
    b.canonicalize();
    if (b.get_den() != 1) {
      fail(ErrorCode::kNonConvergence,
           "non-integral coefficient in Q_" + std::to_string(n) + ": " + b.get_str());
    }
    mpz_class coeff = b.get_num();
    if ((2 * n - 1 - e01) % 2 == 1) coeff = -coeff;
    out.add_term(coeff, mono);
  }

  void dfs(std::size_t c, unsigned count_left, unsigned isum_left, unsigned jsum_left) {
    if (count_left == 0) {
      if (isum_left == 0 && jsum_left == 0) emit();
      return;
    }
    // Every remaining factor carries i + j >= 1.
    if (count_left > isum_left + jsum_left) return;
    if (c == cells.size()) return;
    const auto [i, j] = cells[c];
    unsigned cap = count_left;
    if (i > 0) cap = std::min(cap, isum_left / i);
    if (j > 0) cap = std::min(cap, jsum_left / j);
    for (unsigned k = cap + 1; k-- > 0;) {
      e[c] = k;
      dfs(c + 1, count_left - k, isum_left - k * i, jsum_left - k * j);
    }
    e[c] = 0;
  }
};

}  // namespace

IntPoly q_poly(unsigned n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "q_poly requires n >= 1");
  static PolyCache<unsigned> cache;
  return cache.get(n, [n] {
    QSearch s{n, {}, {}, {}};
    for (unsigned i = n + 1; i-- > 0;) {
      for (unsigned j = 2 * n - 1; j-- > 0;) {
        if (i == 0 && j == 0) continue;
        s.cells.emplace_back(i, j);
      }
    }
    s.e.assign(s.cells.size(), 0);
    s.dfs(0, 2 * n - 1, n, 2 * n - 2);
    return s.out;
  });
}

IntPoly psi_poly(unsigned r, unsigned a) {
  if (a < 2 || a > r) {
    fail(ErrorCode::kInvalidArgument,
         "psi_poly requires 2 <= a <= r (got r=" + std::to_string(r) + ", a=" + std::to_string(a) +
             ")");
  }
  static PolyCache<std::pair<unsigned, unsigned>> cache;
  return cache.get({r, a}, [r, a] {
    const IntPoly phi = phi_poly(r - 1, r - a + 1);
    return phi.substitute([](const IndexedVar& v) {
      if (v.i == 0) return IntPoly(1);
      return q_poly(v.i);
    });
  });
}

BigComplex eval_intpoly(const IntPoly& p, const Assignment& values, int prec) {
  std::map<IndexedVar, std::vector<BigComplex>> powers;
  auto power_of = [&](const IndexedVar& v, unsigned e) -> const BigComplex& {
    auto& list = powers[v];
    if (list.empty()) {
      auto it = values.find(v);
      if (it == values.end()) {
        fail(ErrorCode::kInvalidArgument, "no value assigned to " + v.to_string());
      }
      list.emplace_back(Real(1L, prec), Real(prec));
      list.push_back(it->second);
    }
    while (list.size() <= e) list.push_back(list.back() * list[1]);
    return list[e];
  };
  BigComplex sum(prec);
  for (const auto& [m, c] : p.terms()) {
    BigComplex t(Real(c, prec), Real(prec));
    for (const auto& [v, e] : m.factors()) t *= power_of(v, e);
    sum += t;
  }
  return sum;
}

PhiEvaluator::PhiEvaluator(std::span<const BigComplex> y, unsigned nmax, int prec)
    : nmax_(nmax), prec_(prec) {
  auto yv = [&](unsigned m) -> BigComplex {
    if (m < y.size()) return y[m];
    return BigComplex(prec);
  };
  const BigComplex y0 = yv(0);
  y0_pow_.reserve(nmax + 1);
  y0_pow_.emplace_back(Real(1L, prec), Real(prec));
  for (unsigned k = 1; k <= nmax; ++k) y0_pow_.push_back(y0_pow_.back() * y0);

  bell_.assign(nmax + 1, {});
  for (unsigned n = 0; n <= nmax; ++n) bell_[n].assign(n + 1, BigComplex(prec));
  bell_[0][0] = BigComplex(Real(1L, prec), Real(prec));
  std::vector<BigComplex> ys;
  ys.reserve(nmax + 1);
  for (unsigned m = 0; m <= nmax; ++m) ys.push_back(yv(m));
  // B_{n,k} = sum_{m=1}^{n-k+1} C(n-1, m-1) y_m B_{n-m,k-1}
  for (unsigned n = 1; n <= nmax; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      BigComplex acc(prec);
      for (unsigned m = 1; m <= n - k + 1; ++m) {
        const BigComplex& b = bell_[n - m][k - 1];
        if (b.is_zero() || ys[m].is_zero()) continue;
        acc += ys[m] * b * Real(binomial(n - 1, m - 1), prec);
      }
      bell_[n][k] = std::move(acc);
    }
  }
}

BigComplex PhiEvaluator::operator()(unsigned n, unsigned k) const {
  if (n > nmax_) fail(ErrorCode::kInvalidArgument, "PhiEvaluator: n exceeds table size");
  BigComplex sum(prec_);
  if (k > n) return sum;
  for (unsigned i = k; i <= n; ++i) {
    const mpz_class c1 = stirling_first(i, k);
    if (c1 == 0) continue;
    for (unsigned j = i; j <= n; ++j) {
      const mpz_class s2 = stirling_second(n, j);
      if (s2 == 0) continue;
      mpz_class c = c1 * s2;
      if ((i - k) % 2 == 1) c = -c;
      sum += bell_[j][i] * y0_pow_[n - i] * Real(c, prec_);
    }
  }
  return sum;
}

}  // namespace mahler
