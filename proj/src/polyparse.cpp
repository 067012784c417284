#include "mahler/polyparse.hpp"

#include <cctype>
#include <climits>
#include <map>

#include "mahler/error.hpp"

namespace mahler {

namespace {

using Laurent = std::map<std::pair<long, long>, GaussRational>;

void add_to(Laurent& acc, const std::pair<long, long>& k, const GaussRational& c) {
  auto it = acc.find(k);
  if (it == acc.end()) {
    if (!c.is_zero()) acc.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) acc.erase(it);
}

Laurent mul(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) add_to(out, {ka.first + kb.first, ka.second + kb.second}, ca * cb);
  }
  return out;
}

Laurent constant(const GaussRational& c) {
  Laurent out;
  add_to(out, {0, 0}, c);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(normalize_minus(s)) {}

  Laurent parse() {
    Laurent e = expr();
    skip_ws();
    if (pos_ < s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  // U+2212 becomes '-'; positions are reported in the rewritten string, which
  // only differs after a U+2212.
  static std::string normalize_minus(const std::string& s) {
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s.compare(k, 3, "\xE2\x88\x92") == 0) {
        out += '-';
        k += 2;
      } else {
        out += s[k];
      }
    }
    return out;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kInvalidArgument, "syntax error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  int peek() {
    skip_ws();
    return pos_ < s_.size() ? static_cast<unsigned char>(s_[pos_]) : -1;
  }

  Laurent expr() {
    Laurent acc;
    bool first = true;
    while (true) {
      int c = peek();
      int sign = 1;
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      first = false;
      for (const auto& [k, v] : term()) add_to(acc, k, sign < 0 ? -v : v);
    }
    return acc;
  }

  bool starts_atom(int c) const {
    return c == '(' || c == 'x' || c == 'y' || c == 'i' || c == '.' || (c >= '0' && c <= '9');
  }

  Laurent term() {
    Laurent acc = factor();
    while (true) {
      const int c = peek();
      if (c == '*') {
        ++pos_;
        acc = mul(acc, factor());
      } else if (c == '/') {
        ++pos_;
        const std::size_t at = pos_;
        acc = mul(acc, invert(factor(), at));
      } else if (starts_atom(c)) {
        acc = mul(acc, factor());
      } else {
        return acc;
      }
    }
  }

  Laurent invert(const Laurent& d, std::size_t at) {
    if (d.size() != 1) {
      pos_ = at;
      error(d.empty() ? "division by zero" : "division by a sum");
    }
    const auto& [k, c] = *d.begin();
    Laurent out;
    out.emplace(std::make_pair(-k.first, -k.second), GaussRational(1) / c);
    return out;
  }

  Laurent factor() {
    const int c = peek();
    if (c == '-' || c == '+') {
      ++pos_;
      Laurent f = factor();
      if (c == '-') {
        for (auto& [k, v] : f) v = -v;
      }
      return f;
    }
    const std::size_t at = pos_;
    Laurent base = atom();
    if (peek() != '^') return base;
    ++pos_;
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected integer exponent");
    long e = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      e = e * 10 + (s_[pos_++] - '0');
      if (e > 100000) error("exponent too large");
    }
    if (neg) base = invert(base, at);
    Laurent out = constant(1);
    for (long k = 0; k < e; ++k) out = mul(out, base);
    return out;
  }

  Laurent atom() {
    const int c = peek();
    if (c == '(') {
      ++pos_;
      Laurent e = expr();
      if (peek() != ')') error("expected ')'");
      ++pos_;
      return e;
    }
    if (c == 'x' || c == 'y') {
      ++pos_;
      Laurent out;
      out.emplace(c == 'x' ? std::make_pair(1L, 0L) : std::make_pair(0L, 1L), GaussRational(1));
      return out;
    }
    if (c == 'i') {
      ++pos_;
      return constant(GaussRational::i_unit());
    }
    if (c == '.' || (c >= '0' && c <= '9')) return constant(number());
    if (c < 0) error("unexpected end of input");
    error("unexpected '" + std::string(1, static_cast<char>(c)) + "'");
  }

  GaussRational number() {
    std::string digits;
    std::size_t scale = 0;
    bool dot = false;
    while (pos_ < s_.size()) {
      const char ch = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        digits += ch;
        if (dot) ++scale;
      } else if (ch == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) error("malformed number");
    mpq_class v(mpz_class(digits, 10), 1);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    v /= den;
    return GaussRational(v);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

ParsedPoly normalize(const Laurent& l) {
  if (l.empty()) fail(ErrorCode::kInvalidArgument, "zero polynomial");
  long min_i = 0, min_j = 0;
  for (const auto& [k, c] : l) {
    min_i = std::min(min_i, k.first);
    min_j = std::min(min_j, k.second);
  }
  std::map<BiPoly::Key, GaussRational> m;
  for (const auto& [k, c] : l) {
    const long i = k.first - min_i, j = k.second - min_j;
    if (i > INT_MAX / 2 || j > INT_MAX / 2) fail(ErrorCode::kInvalidArgument, "degree too large");
    m.emplace(BiPoly::Key{static_cast<int>(i), static_cast<int>(j)}, c);
  }
  return {BiPoly(std::move(m)), static_cast<int>(-min_i), static_cast<int>(-min_j)};
}

mpq_class parse_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return mpq_class(mpz_class(std::to_string(v.get<long long>())));
  if (!v.is_string()) fail(ErrorCode::kInvalidArgument, "coefficient must be an integer or a \"p/q\" string");
  mpq_class q;
  if (q.set_str(v.get<std::string>(), 10) != 0) {
    fail(ErrorCode::kInvalidArgument, "malformed rational \"" + v.get<std::string>() + "\"");
  }
  if (q.get_den() == 0) fail(ErrorCode::kInvalidArgument, "zero denominator");
  q.canonicalize();
  return q;
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

}  // namespace

ParsedPoly parse_poly(const std::string& expr) { return normalize(Parser(expr).parse()); }

ParsedPoly parse_poly_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    fail(ErrorCode::kInvalidArgument, "expected {\"terms\": [...]}");
  }
  Laurent l;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("i") || !t.contains("j") || !t.contains("re") ||
        !t["i"].is_number_integer() || !t["j"].is_number_integer()) {
      fail(ErrorCode::kInvalidArgument, "each term needs integer \"i\", \"j\" and \"re\"");
    }
    const mpq_class re = parse_rational(t["re"]);
    const mpq_class im = t.contains("im") ? parse_rational(t["im"]) : mpq_class(0);
    add_to(l, {t["i"].get<long>(), t["j"].get<long>()}, GaussRational(re, im));
  }
  return normalize(l);
}

nlohmann::json poly_to_json(const BiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : p.terms()) {
    terms.push_back({{"i", k.first}, {"j", k.second}, {"re", rational_string(c.re)}, {"im", rational_string(c.im)}});
  }
  return {{"terms", terms}};
}

}  // namespace mahler
