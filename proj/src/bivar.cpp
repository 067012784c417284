#include "mahler/bivar.hpp"

#include <algorithm>
#include <sstream>

#include "mahler/error.hpp"
#include "mahler/numerics.hpp"

namespace mahler {

// ---------------------------------------------------------------------------
// GaussRational

BigComplex GaussRational::to_complex(int prec) const {
  return {Real(re, prec), Real(im, prec)};
}

std::string GaussRational::to_string() const {
  if (im == 0) return re.get_str();
  std::string imag;
  if (im == 1) {
    imag = "i";
  } else if (im == -1) {
    imag = "-i";
  } else {
    imag = im.get_str() + "i";
  }
  if (re == 0) return "(" + imag + ")";
  return "(" + re.get_str() + (im > 0 ? "+" : "") + imag + ")";
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  mpq_class r = re * o.re - im * o.im;
  mpq_class i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (o.is_zero()) fail(ErrorCode::kInvalidArgument, "division by zero in Q(i)");
  const mpq_class n = o.re * o.re + o.im * o.im;
  mpq_class r = (re * o.re + im * o.im) / n;
  mpq_class i = (im * o.re - re * o.im) / n;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(std::vector<GaussRational> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::constant(const GaussRational& c) { return UniPoly({c}); }

UniPoly UniPoly::monomial(const GaussRational& c, int k) {
  std::vector<GaussRational> v(k + 1);
  v[k] = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

GaussRational UniPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return {};
  return c_[k];
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<GaussRational> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k < c_.size()) r[k] += c_[k];
    if (k < o.c_.size()) r[k] += o.c_[k];
  }
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<GaussRational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t a = 0; a < c_.size(); ++a) {
    if (c_[a].is_zero()) continue;
    for (std::size_t b = 0; b < o.c_.size(); ++b) r[a + b] += c_[a] * o.c_[b];
  }
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const GaussRational& s) const {
  std::vector<GaussRational> r = c_;
  for (auto& v : r) v *= s;
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-() const { return *this * GaussRational(-1); }

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
  if (d.is_zero()) fail(ErrorCode::kInvalidArgument, "polynomial division by zero");
  if (degree() < d.degree()) return {UniPoly(), *this};
  std::vector<GaussRational> rem = c_;
  std::vector<GaussRational> quot(degree() - d.degree() + 1);
  const GaussRational inv_lead = GaussRational(1) / d.lead();
  for (int k = degree(); k >= d.degree(); --k) {
    if (rem[k].is_zero()) continue;
    const GaussRational q = rem[k] * inv_lead;
    quot[k - d.degree()] = q;
    for (int m = 0; m <= d.degree(); ++m) rem[k - d.degree() + m] -= q * d.c_[m];
  }
  return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::exact_div(const UniPoly& d) const {
  auto [q, r] = divmod(d);
  if (!r.is_zero()) fail(ErrorCode::kNonConvergence, "inexact polynomial division");
  return q;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<GaussRational> r(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) r[k - 1] = c_[k] * GaussRational(static_cast<long>(k));
  return UniPoly(std::move(r));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return {};
  return *this * (GaussRational(1) / lead());
}

GaussRational UniPoly::eval(const GaussRational& x) const {
  GaussRational acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

BigComplex UniPoly::eval(const BigComplex& x, int prec) const {
  const auto c = to_complex(prec);
  return horner(c, x);
}

std::vector<BigComplex> UniPoly::to_complex(int prec) const {
  std::vector<BigComplex> r;
  r.reserve(c_.size());
  for (const auto& v : c_) r.push_back(v.to_complex(prec));
  return r;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    if (c_[k].is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << c_[k].to_string();
    if (k >= 1) out << '*' << var;
    if (k >= 2) out << '^' << k;
  }
  return out.str();
}

UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UniPoly squarefree_part(const UniPoly& p) {
  if (p.degree() <= 0) return p;
  const UniPoly g = gcd(p, p.derivative());
  return p.exact_div(g).monic();
}

GaussRational resultant(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int m = a.degree();
  const int n = b.degree();
  if (n == 0) {
    GaussRational r(1);
    for (int k = 0; k < m; ++k) r *= b.lead();
    return r;
  }
  if (m == 0) {
    GaussRational r(1);
    for (int k = 0; k < n; ++k) r *= a.lead();
    return r;
  }
  // Res(a, b) = (-1)^{mn} Res(b, a) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r)
  const UniPoly r = a.divmod(b).second;
  if (r.is_zero()) return {};
  GaussRational f = resultant(b, r);
  for (int k = 0; k < m - r.degree(); ++k) f *= b.lead();
  if ((m * n) % 2 == 1) f = -f;
  return f;
}

// ---------------------------------------------------------------------------
// BiPoly

BiPoly::BiPoly(std::map<Key, GaussRational> coeffs) : c_(std::move(coeffs)) {
  std::erase_if(c_, [](const auto& kv) { return kv.second.is_zero(); });
  for (const auto& [k, v] : c_) {
    if (k.first < 0 || k.second < 0) {
      fail(ErrorCode::kInvalidArgument, "negative exponent in BiPoly (normalize Laurent input)");
    }
  }
  refresh();
}

BiPoly BiPoly::constant(const GaussRational& c) {
  return BiPoly(std::map<Key, GaussRational>{{{0, 0}, c}});
}

void BiPoly::refresh() {
  deg_x_ = -1;
  deg_y_ = -1;
  for (const auto& [k, v] : c_) {
    deg_x_ = std::max(deg_x_, k.first);
    deg_y_ = std::max(deg_y_, k.second);
  }
}

GaussRational BiPoly::coeff(int i, int j) const {
  auto it = c_.find({i, j});
  return it == c_.end() ? GaussRational() : it->second;
}

void BiPoly::add_term(int i, int j, const GaussRational& c) {
  if (i < 0 || j < 0) fail(ErrorCode::kInvalidArgument, "negative exponent in BiPoly");
  if (c.is_zero()) return;
  auto [it, inserted] = c_.emplace(Key{i, j}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
  refresh();
}

UniPoly BiPoly::coeff_y(int j) const {
  std::vector<GaussRational> v(std::max(deg_x_, 0) + 1);
  for (const auto& [k, c] : c_) {
    if (k.second == j) v[k.first] = c;
  }
  return UniPoly(std::move(v));
}

bool BiPoly::has_real_coefficients() const {
  return std::all_of(c_.begin(), c_.end(), [](const auto& kv) { return kv.second.is_real(); });
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly r = *this;
  for (const auto& [k, c] : o.c_) r.add_term(k.first, k.second, c);
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const { return *this + o * GaussRational(-1); }

BiPoly BiPoly::operator*(const BiPoly& o) const {
  std::map<Key, GaussRational> r;
  for (const auto& [ka, ca] : c_) {
    for (const auto& [kb, cb] : o.c_) r[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  }
  return BiPoly(std::move(r));
}

BiPoly BiPoly::operator*(const GaussRational& s) const {
  std::map<Key, GaussRational> r;
  for (const auto& [k, c] : c_) r[k] = c * s;
  return BiPoly(std::move(r));
}

BiPoly BiPoly::partial(int i, int j) const {
  std::map<Key, GaussRational> r;
  for (const auto& [k, c] : c_) {
    if (k.first < i || k.second < j) continue;
    mpz_class f = 1;
    for (int t = 0; t < i; ++t) f *= k.first - t;
    for (int t = 0; t < j; ++t) f *= k.second - t;
    r[{k.first - i, k.second - j}] = c * GaussRational(mpq_class(f));
  }
  return BiPoly(std::move(r));
}

BiPoly BiPoly::reciprocal() const {
  std::map<Key, GaussRational> r;
  for (const auto& [k, c] : c_) r[{deg_x_ - k.first, deg_y_ - k.second}] = c.conj();
  return BiPoly(std::move(r));
}

BiPoly BiPoly::transformed(int mx, int my, int a, int b) const {
  std::map<Key, GaussRational> r;
  for (const auto& [k, c] : c_) r[{k.first * mx + a, k.second * my + b}] = c;
  return BiPoly(std::move(r));
}

BigComplex BiPoly::eval(const BigComplex& x, const BigComplex& y, int prec) const {
  const auto cy = y_coeffs_at(x, prec);
  return horner(cy, y);
}

std::vector<BigComplex> BiPoly::y_coeffs_at(const BigComplex& x0, int prec) const {
  std::vector<BigComplex> out;
  out.reserve(std::max(deg_y_, 0) + 1);
  for (int j = 0; j <= std::max(deg_y_, 0); ++j) {
    const UniPoly a = coeff_y(j);
    out.push_back(a.is_zero() ? BigComplex(prec) : a.eval(x0, prec));
  }
  return out;
}

UniPoly BiPoly::at_x(const GaussRational& x0) const {
  std::vector<GaussRational> v(std::max(deg_y_, 0) + 1);
  for (int j = 0; j <= deg_y_; ++j) v[j] = coeff_y(j).eval(x0);
  return UniPoly(std::move(v));
}

std::string BiPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Descending total degree, then descending y exponent.
  std::vector<std::pair<Key, GaussRational>> terms(c_.begin(), c_.end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = a.first.first + a.first.second;
    const int db = b.first.first + b.first.second;
    if (da != db) return da > db;
    return a.first.second > b.first.second;
  });
  for (const auto& [k, c] : terms) {
    GaussRational coef = c;
    const bool negative_real = c.is_real() && c.re < 0;
    if (!first) out << (negative_real ? " - " : " + ");
    else if (negative_real) out << '-';
    if (negative_real) coef = -c;
    first = false;
    const bool unit = coef == GaussRational(1);
    std::string mono;
    auto append = [&mono](const std::string& s) {
      if (!mono.empty()) mono += '*';
      mono += s;
    };
    if (k.first == 1) append("x");
    if (k.first > 1) append("x^" + std::to_string(k.first));
    if (k.second == 1) append("y");
    if (k.second > 1) append("y^" + std::to_string(k.second));
    if (mono.empty()) {
      out << coef.to_string();
    } else if (unit) {
      out << mono;
    } else {
      out << coef.to_string() << '*' << mono;
    }
  }
  return out.str();
}

std::optional<GaussRational> is_asr(const BiPoly& p) {
  if (p.is_zero()) fail(ErrorCode::kInvalidArgument, "is_asr of the zero polynomial");
  const BiPoly r = p.reciprocal();
  const auto& [key, lead] = *p.terms().begin();
  const GaussRational c = r.coeff(key.first, key.second) / lead;
  if (c.is_zero()) return std::nullopt;
  if (r == p * c) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Resultants

namespace {

// Coefficients in y of P, highest first, as polynomials in x.
std::vector<UniPoly> y_rows(const BiPoly& p) {
  std::vector<UniPoly> r;
  for (int j = p.deg_y(); j >= 0; --j) r.push_back(p.coeff_y(j));
  return r;
}

UniPoly power(const UniPoly& p, int e) {
  UniPoly r = UniPoly::constant(1);
  for (int k = 0; k < e; ++k) r = r * p;
  return r;
}

}  // namespace

UniPoly resultant_y(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int m = a.deg_y();
  const int n = b.deg_y();
  if (m == 0 && n == 0) fail(ErrorCode::kInvalidArgument, "resultant_y: both arguments constant in y");
  if (n == 0) return power(b.coeff_y(0), m);
  if (m == 0) return power(a.coeff_y(0), n);

  const int size = m + n;
  std::vector<std::vector<UniPoly>> mat(size, std::vector<UniPoly>(size));
  const auto ra = y_rows(a);
  const auto rb = y_rows(b);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) mat[r][r + k] = ra[k];
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) mat[n + r][r + k] = rb[k];
  }

  // Fraction-free (Bareiss) elimination over Q(i)[x].
  bool negate = false;
  UniPoly prev = UniPoly::constant(1);
  for (int k = 0; k < size - 1; ++k) {
    if (mat[k][k].is_zero()) {
      int swap_row = -1;
      for (int r = k + 1; r < size; ++r) {
        if (!mat[r][k].is_zero()) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return {};
      std::swap(mat[k], mat[swap_row]);
      negate = !negate;
    }
    for (int r = k + 1; r < size; ++r) {
      for (int c = k + 1; c < size; ++c) {
        mat[r][c] = (mat[k][k] * mat[r][c] - mat[r][k] * mat[k][c]).exact_div(prev);
      }
      mat[r][k] = UniPoly();
    }
    prev = mat[k][k];
  }
  UniPoly det = mat[size - 1][size - 1];
  return negate ? -det : det;
}

UniPoly resultant_y_interpolated(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int m = a.deg_y();
  const int n = b.deg_y();
  if (m == 0 && n == 0) fail(ErrorCode::kInvalidArgument, "resultant_y: both arguments constant in y");
  const int bound = n * std::max(a.deg_x(), 0) + m * std::max(b.deg_x(), 0);
  const UniPoly lead_a = a.coeff_y(m);
  const UniPoly lead_b = b.coeff_y(n);

  std::vector<GaussRational> nodes;
  std::vector<GaussRational> values;
  for (long t = 0; static_cast<int>(nodes.size()) <= bound; ++t) {
    const GaussRational x0((t % 2 == 0) ? t / 2 : -(t + 1) / 2);
    if (lead_a.eval(x0).is_zero() || lead_b.eval(x0).is_zero()) continue;
    nodes.push_back(x0);
    values.push_back(resultant(a.at_x(x0), b.at_x(x0)));
  }

  // Newton divided differences, then expansion into the monomial basis.
  const std::size_t count = nodes.size();
  std::vector<GaussRational> dd = values;
  for (std::size_t level = 1; level < count; ++level) {
    for (std::size_t k = count - 1; k >= level; --k) {
      dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - level]);
    }
  }
  UniPoly result = UniPoly::constant(dd[count - 1]);
  for (std::size_t k = count - 1; k-- > 0;) {
    result = result * UniPoly({-nodes[k], GaussRational(1)}) + UniPoly::constant(dd[k]);
  }
  return result;
}

UniPoly critical_resultant(const BiPoly& p) {
  if (p.deg_y() < 1) fail(ErrorCode::kInvalidArgument, "critical_resultant requires deg_y >= 1");
  return resultant_y(p, p.partial(0, 1));
}

UniPoly substitute_curve(const BiPoly& p, int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "substitute_curve requires n >= 1");
  std::vector<GaussRational> v(std::max(p.deg_x(), 0) + static_cast<std::size_t>(n) * std::max(p.deg_y(), 0) + 1);
  for (const auto& [k, c] : p.terms()) v[k.first + static_cast<std::size_t>(n) * k.second] += c;
  UniPoly r(std::move(v));
  if (r.is_zero()) {
    fail(ErrorCode::kDegenerate,
         "P(x, x^" + std::to_string(n) + ") vanishes identically (P is a multiple of y - x^n)");
  }
  return r;
}

HypothesisReport hypothesis_check(const BiPoly& p, int prec) {
  return hypothesis_check(p, prec, epsilon_pow2(prec / 2, prec));
}

HypothesisReport hypothesis_check(const BiPoly& p, int prec, const Real& tol) {
  HypothesisReport rep;
  rep.resultant = critical_resultant(p);
  if (rep.resultant.is_zero()) {
    fail(ErrorCode::kDegenerate, "degenerate resultant: P and dP/dy share a factor");
  }
  const UniPoly sf = squarefree_part(rep.resultant);
  if (sf.degree() < 1) return rep;
  const RootSet rs = polyroots(sf, prec);
  for (std::size_t k = 0; k < rs.roots.size(); ++k) {
    const Real margin = abs(abs(rs.roots[k]) - Real(1L, prec));
    rep.roots.push_back(rs.roots[k]);
    rep.margins.push_back(margin.to_double());
    if (margin < tol) {
      rep.offending.push_back(k);
      rep.pass = false;
    }
  }
  return rep;
}

}  // namespace mahler
