#include "mahler/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "mahler/error.hpp"
#include "mahler/exactalg.hpp"
#include "mahler/numerics.hpp"

namespace mahler {

namespace {

// Largest r for which OmegaRoute::kAuto expands Psi_{r,a} symbolically.
constexpr int kSymbolicMaxR = 10;

// R_a: real part for even a, imaginary part for odd a.
const Real& part(int a, const BigComplex& z) { return a % 2 == 0 ? z.re : z.im; }

void check_ra(int r, int a) {
  if (r < 2 || a < 2 || a > r) {
    fail(ErrorCode::kInvalidArgument,
         "Omega needs 2 <= a <= r, got r = " + std::to_string(r) + ", a = " + std::to_string(a));
  }
}

BigComplex p01_at(const BiPoly& p, const BigComplex& alpha, const BigComplex& beta, int prec) {
  BigComplex v = p.partial(0, 1).eval(alpha, beta, prec);
  if (abs(v) < epsilon_pow2(prec / 2, prec)) {
    fail(ErrorCode::kDegenerate, "dP/dy vanishes at the evaluation point");
  }
  return v;
}

// x^k rho^{(k)}(x) at x = alpha, k = 0..order.
std::vector<BigComplex> scaled_derivatives(const BiPoly& p, const BigComplex& alpha,
                                           const BigComplex& beta, int order, int prec) {
  const auto t = root_series(p, alpha, beta, order, prec);
  std::vector<BigComplex> out;
  out.reserve(t.size());
  BigComplex apow(Real(1L, prec), Real(prec));
  for (int k = 0; k <= order; ++k) {
    out.push_back(t[k] * apow * Real(factorial(static_cast<unsigned>(k)), prec));
    apow *= alpha;
  }
  return out;
}

BigComplex omega_from_derivs(const std::vector<BigComplex>& y, int r, int a, int prec) {
  const PhiEvaluator phi(std::span<const BigComplex>(y.data(), static_cast<std::size_t>(r)),
                         static_cast<unsigned>(r - 1), prec);
  return phi(static_cast<unsigned>(r - 1), static_cast<unsigned>(r - a + 1)) / pow(y[0], r - 1);
}

template <typename F>
void parallel_for(std::size_t count, int jobs, F&& body) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  const std::size_t j = static_cast<std::size_t>(jobs);
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < j; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < count; k += j) body(k);
    }));
  }
  for (auto& w : workers) w.get();
}

// Angle of beta / alpha^n in [0, 2pi), with guard bits for large n.
Real ratio_angle(const ExceptionalPoint& pt, long n, int prec) {
  const int wp = prec + 64;
  Real a = pt.alpha.angle;
  a.round_to(wp);
  Real b = pt.beta.angle;
  b.round_to(wp);
  Real t = reduce_angle(b - a * n);
  t.round_to(prec);
  return t;
}

}  // namespace

std::vector<BigComplex> root_series(const BiPoly& p, const BigComplex& alpha,
                                    const BigComplex& beta, int order, int prec) {
  const int d = p.deg_y();
  if (d < 1) fail(ErrorCode::kInvalidArgument, "root_series needs deg_y >= 1");
  // A_j(h) = [y^j] P(alpha + h, y) as a polynomial in h, truncated at h^order.
  std::vector<std::vector<BigComplex>> A(d + 1, std::vector<BigComplex>(order + 1, BigComplex(prec)));
  for (const auto& [key, c] : p.terms()) {
    const auto [i, j] = key;
    const BigComplex cc = c.to_complex(prec);
    for (int m = 0; m <= std::min(i, order); ++m) {
      A[j][m] += cc * pow(alpha, i - m) * Real(binomial(i, m), prec);
    }
  }
  BigComplex py(prec);
  {
    BigComplex bp(Real(1L, prec), Real(prec));
    for (int j = 1; j <= d; ++j) {
      py += A[j][0] * bp * static_cast<long>(j);
      bp *= beta;
    }
  }
  if (abs(py) < epsilon_pow2(prec / 2, prec)) fail(ErrorCode::kDegenerate, "dP/dy vanishes at the base point");

  std::vector<BigComplex> t(order + 1, BigComplex(prec));
  t[0] = beta;
  for (int k = 1; k <= order; ++k) {
    // [h^k] sum_j A_j(h) Y(h)^j with Y = t_0 + ... + t_{k-1} h^{k-1}.
    std::vector<BigComplex> ypow(k + 1, BigComplex(prec));
    ypow[0] = BigComplex(Real(1L, prec), Real(prec));
    BigComplex ek(prec);
    for (int j = 0; j <= d; ++j) {
      if (j > 0) {
        std::vector<BigComplex> next(k + 1, BigComplex(prec));
        for (int u = 0; u <= k; ++u) {
          if (ypow[u].is_zero()) continue;
          for (int v = 0; u + v <= k && v < k; ++v) next[u + v] += ypow[u] * t[v];
        }
        ypow = std::move(next);
      }
      for (int m = 0; m <= k; ++m) ek += A[j][m] * ypow[k - m];
    }
    t[k] = -(ek / py);
  }
  return t;
}

BigComplex omega_eval(const BiPoly& p, int r, int a, const BigComplex& alpha,
                      const BigComplex& beta, int prec) {
  check_ra(r, a);
  const BigComplex p01 = p01_at(p, alpha, beta, prec);
  const IntPoly psi = psi_poly(static_cast<unsigned>(r), static_cast<unsigned>(a));
  const BigComplex beta_inv = inverse(beta);
  Assignment values;
  for (const IndexedVar& v : psi.variables()) {
    const int i = static_cast<int>(v.i), j = static_cast<int>(v.j);
    BigComplex w = p.partial(i, j).eval(alpha, beta, prec) / p01 * pow(alpha, i);
    w *= j == 0 ? beta_inv : pow(beta, j - 1);
    values.emplace(v, std::move(w));
  }
  return eval_intpoly(psi, values, prec);
}

BigComplex omega_eval_series(const BiPoly& p, int r, int a, const BigComplex& alpha,
                             const BigComplex& beta, int prec) {
  check_ra(r, a);
  const int wp = prec + 64;
  BigComplex al = alpha, be = beta;
  al.re.round_to(wp), al.im.round_to(wp), be.re.round_to(wp), be.im.round_to(wp);
  BigComplex v = omega_from_derivs(scaled_derivatives(p, al, be, r - 1, wp), r, a, wp);
  v.re.round_to(prec);
  v.im.round_to(prec);
  return v;
}

BiPoly primitive_part_y(const BiPoly& p) {
  if (p.is_zero()) return p;
  UniPoly g;
  for (int j = 0; j <= p.deg_y(); ++j) {
    const UniPoly c = p.coeff_y(j);
    if (!c.is_zero()) g = g.is_zero() ? c.monic() : gcd(g, c);
  }
  if (g.degree() < 1) return p;
  BiPoly out;
  for (int j = 0; j <= p.deg_y(); ++j) {
    const UniPoly c = p.coeff_y(j);
    if (c.is_zero()) continue;
    const UniPoly q = c.exact_div(g);
    for (int i = 0; i <= q.degree(); ++i) {
      if (!q.coeff(i).is_zero()) out.add_term(i, j, q.coeff(i));
    }
  }
  return out;
}

ExpansionContext::ExpansionContext(const BiPoly& p, int prec, OmegaRoute route)
    : poly_(primitive_part_y(p)), prec_(prec), route_(route) {
  if (poly_.deg_y() >= 1) points_ = exceptional_set(poly_, prec);
  if (!points_.empty()) {
    const HypothesisReport h = hypothesis_check(poly_, prec);
    if (!h.pass) {
      fail(ErrorCode::kHypothesis,
           "P and dP/dy have a common zero over the unit circle; the expansion does not apply");
    }
  }
  derivs_.resize(points_.size());
  const Real two_pi = Real::pi(prec) * 2L;
  const Real tol = epsilon_pow2(prec / 2, prec);
  for (int m = 1; m <= 1000; ++m) {
    bool ok = true;
    for (const auto& pt : points_) {
      const Real q = pt.alpha.angle * static_cast<long>(m) / two_pi;
      if (abs(q - floor(q + Real(0.5, prec))) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) {
      modulus_ = m;
      break;
    }
  }
}

const std::vector<BigComplex>& ExpansionContext::scaled_derivs(std::size_t point, int order) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& d = derivs_[point];
  if (static_cast<int>(d.size()) <= order) {
    const int wp = prec_ + 64;
    BigComplex al = points_[point].alpha.value, be = points_[point].beta.value;
    al.re.round_to(wp), al.im.round_to(wp), be.re.round_to(wp), be.im.round_to(wp);
    // Grow in steps so repeated requests for r, r+1, ... do not redo the series.
    d = scaled_derivatives(poly_, al, be, std::max(order, 2 * static_cast<int>(d.size())), wp);
  }
  return d;
}

BigComplex ExpansionContext::omega(std::size_t point, int r, int a) const {
  check_ra(r, a);
  const ExceptionalPoint& pt = points_.at(point);
  const bool symbolic = route_ == OmegaRoute::kSymbolic || (route_ == OmegaRoute::kAuto && r <= kSymbolicMaxR);
  if (symbolic) return omega_eval(poly_, r, a, pt.alpha.value, pt.beta.value, prec_);
  // The cached vector only grows; copy the prefix under the lock's guarantee.
  std::vector<BigComplex> y;
  {
    const auto& d = scaled_derivs(point, r - 1);
    std::lock_guard<std::mutex> lock(mu_);
    y.assign(d.begin(), d.begin() + r);
  }
  BigComplex v = omega_from_derivs(y, r, a, prec_ + 64);
  v.re.round_to(prec_);
  v.im.round_to(prec_);
  return v;
}

Real ExpansionContext::coefficient(int r, long n) const {
  if (r < 2) fail(ErrorCode::kInvalidArgument, "coefficients start at r = 2");
  Real total(prec_);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const ExceptionalPoint& pt = points_[k];
    if (pt.sign == 0) continue;
    const Real theta = ratio_angle(pt, n, prec_);
    Real inner(prec_);
    for (int a = 2; a <= r; ++a) {
      const BigComplex om = omega(k, r, a);
      const BigComplex li = polylog_unit_angle(a, theta, prec_);
      inner += part(a + 1, om) * part(a, li);
    }
    if (pt.sign > 0) {
      total += inner;
    } else {
      total -= inner;
    }
  }
  return total / Real::pi(prec_);
}

Real coefficient(const BiPoly& p, int r, long n, int prec) {
  return ExpansionContext(p, prec).coefficient(r, n);
}

Real coefficient_1xy(int r, long n, int prec) {
  if (r < 2) fail(ErrorCode::kInvalidArgument, "coefficients start at r = 2");
  const Real pi = Real::pi(prec);
  const long cls = (((n + 1) % 3) + 3) % 3;
  const Real theta = pi * (2L * cls) / 3L;
  const Real sqrt3 = sqrt(Real(3L, prec));
  Real total(prec);
  for (int a = 2; a <= r; ++a) {
    const int b = r + 1 - a;
    // sum_j c(j, b) S(r-1, j) R_{a+1}(xi^j) = (re_part + im_part * sqrt3) / 2
    mpz_class re_part = 0, im_part = 0;
    for (int j = b; j <= r - 1; ++j) {
      const mpz_class w = stirling_first(j, b) * stirling_second(r - 1, j);
      if ((a + 1) % 2 == 0) {
        re_part += j % 3 == 0 ? mpz_class(2 * w) : mpz_class(-w);
      } else {
        if (j % 3 == 1) im_part += w;
        if (j % 3 == 2) im_part -= w;
      }
    }
    const Real weight = (Real(re_part, prec) + Real(im_part, prec) * sqrt3) / 2L;
    Real term = weight * part(a, polylog_unit_angle(a, theta, prec));
    if (b % 2 == 1) term = -term;
    total += term;
  }
  return total * 2L / pi;
}

std::pair<Real, Real> closed_c2_c3(const ExpansionContext& ctx, long n) {
  const int prec = ctx.precision();
  const BiPoly& p = ctx.poly();
  Real c2(prec), c3(prec);
  for (const auto& pt : ctx.points()) {
    if (pt.sign == 0) continue;
    const BigComplex& x = pt.alpha.value;
    const BigComplex& y = pt.beta.value;
    auto d = [&](int i, int j) { return p.partial(i, j).eval(x, y, prec); };
    const BigComplex p10 = d(1, 0), p01 = d(0, 1), p20 = d(2, 0), p11 = d(1, 1), p02 = d(0, 2);
    const BigComplex f = -(x * p10) / (y * p01);
    const BigComplex g = (-(p20 / p01) + p10 * p11 * 2L / (p01 * p01) -
                          p02 * p10 * p10 / (p01 * p01 * p01)) *
                             (x * x / y) +
                         f - f * f;
    const Real theta = ratio_angle(pt, n, prec);
    const BigComplex li2 = polylog_unit_angle(2, theta, prec);
    const BigComplex li3 = polylog_unit_angle(3, theta, prec);
    Real t2 = f.im * li2.re;
    Real t3 = (f * f).im * li2.re + g.re * li3.im;
    if (pt.sign < 0) {
      t2 = -t2;
      t3 = -t3;
    }
    c2 += t2;
    c3 += t3;
  }
  const Real pi = Real::pi(prec);
  return {c2 / pi, c3 / pi};
}

std::pair<Real, Real> closed_c2_c3(const BiPoly& p, long n, int prec) {
  return closed_c2_c3(ExpansionContext(p, prec), n);
}

const Real& CoefficientTable::at(int r, long n) const {
  const long key = modulus ? ((n % *modulus) + *modulus) % *modulus : n;
  const auto it = entries.find({r, key});
  if (it == entries.end()) {
    fail(ErrorCode::kInvalidArgument,
         "coefficient table has no entry for r = " + std::to_string(r) + ", n = " + std::to_string(n));
  }
  return it->second;
}

CoefficientTable build_coefficient_table(const ExpansionContext& ctx, int rmax,
                                         const std::vector<long>& ns, int jobs) {
  CoefficientTable table{ctx.poly(), ctx.modulus(), ctx.precision(), {}};
  struct Task {
    int r;
    long key;
    long n;
  };
  std::vector<Task> tasks;
  if (ctx.modulus()) {
    const long m = *ctx.modulus();
    for (int r = 2; r <= rmax; ++r) {
      for (long c = 0; c < m; ++c) tasks.push_back({r, c, c == 0 ? m : c});
    }
  } else {
    if (ns.empty()) fail(ErrorCode::kInvalidArgument, "no modulus found: explicit n values are required");
    for (int r = 2; r <= rmax; ++r) {
      for (long n : ns) tasks.push_back({r, n, n});
    }
  }
  std::vector<Real> values(tasks.size(), Real(ctx.precision()));
  std::vector<bool> consistent(tasks.size(), true);
  const Real tol = epsilon_pow2(ctx.precision() / 2, ctx.precision());
  parallel_for(tasks.size(), jobs, [&](std::size_t k) {
    values[k] = ctx.coefficient(tasks[k].r, tasks[k].n);
    if (ctx.modulus()) {
      const Real other = ctx.coefficient(tasks[k].r, tasks[k].n + *ctx.modulus());
      consistent[k] = abs(other - values[k]) <= tol * max(abs(values[k]), Real(1L, ctx.precision()));
    }
  });
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (!consistent[k]) {
      fail(ErrorCode::kNonConvergence, "c_r(n) differs between two members of residue class " +
                                           std::to_string(tasks[k].key));
    }
    table.entries.emplace(std::make_pair(tasks[k].r, tasks[k].key), std::move(values[k]));
  }
  return table;
}

Real partial_sum(const CoefficientTable& table, int k, long n) {
  Real s(table.precision);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "partial sums need n >= 1");
  Real npow(1L, table.precision);
  npow *= n;
  for (int r = 2; r <= k; ++r) {
    npow *= n;
    s += table.at(r, n) / npow;
  }
  return s;
}

std::vector<MeasureResult> delta_sweep(const BiPoly& p, const std::vector<long>& ns,
                                       const MeasureResult& base, int prec,
                                       const MeasureOptions& opts) {
  std::vector<MeasureResult> out(ns.size());
  MeasureOptions inner = opts;
  inner.jobs = 1;
  parallel_for(ns.size(), opts.jobs, [&](std::size_t k) {
    if (ns[k] < 1 || ns[k] > std::numeric_limits<int>::max()) {
      fail(ErrorCode::kInvalidArgument, "n out of range");
    }
    out[k] = delta_n(p, static_cast<int>(ns[k]), base, prec, inner);
  });
  return out;
}

Real richardson_limit(const std::vector<long>& ns, const std::vector<Real>& values, int order) {
  if (ns.size() != values.size() || ns.empty()) fail(ErrorCode::kInvalidArgument, "richardson: bad input");
  order = std::min<int>(order, static_cast<int>(ns.size()) - 1);
  const std::size_t first = ns.size() - static_cast<std::size_t>(order) - 1;
  const int prec = values[0].precision();
  std::vector<Real> h, t;
  for (std::size_t k = first; k < ns.size(); ++k) {
    h.push_back(Real(mpq_class(1, ns[k]), prec));
    t.push_back(values[k]);
  }
  // Neville's scheme evaluated at h = 0.
  for (int level = 1; level <= order; ++level) {
    for (int i = 0; i + level <= order; ++i) {
      const int j = i + level;
      t[i] = (h[i] * t[i + 1] - h[j] * t[i]) / (h[i] - h[j]);
    }
  }
  return t[0];
}

EmpiricalResult empirical_coefficient(const ExpansionContext& ctx, int k, long n_class, int modulus,
                                      const std::vector<long>& n_list, const MeasureOptions& opts) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "empirical coefficients start at k = 2");
  if (modulus < 1 || n_list.empty()) fail(ErrorCode::kInvalidArgument, "need a modulus and at least one n");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (((n_list[i] - n_class) % modulus + modulus) % modulus != 0) {
      fail(ErrorCode::kInvalidArgument, "n = " + std::to_string(n_list[i]) + " is not in the residue class");
    }
    if (i > 0 && n_list[i] <= n_list[i - 1]) fail(ErrorCode::kInvalidArgument, "n values must increase");
  }
  const int prec = ctx.precision();
  const MeasureResult base = mahler_bivariate(ctx.poly(), prec, opts);
  const auto deltas = delta_sweep(ctx.poly(), n_list, base, prec, opts);
  EmpiricalResult res{n_list, {}, Real(prec), std::min(4, static_cast<int>(n_list.size()) - 1)};
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const long n = n_list[i];
    Real v = deltas[i].value;
    Real npow(1L, prec);
    npow *= n;
    for (int r = 2; r < k; ++r) {
      npow *= n;
      v -= ctx.coefficient(r, n) / npow;
    }
    res.sequence.push_back(v * pow(Real(n, prec), k));
  }
  res.limit = richardson_limit(n_list, res.sequence, res.order);
  return res;
}

SingularFit fit_singular_exponent(const BiPoly& p, const std::vector<long>& ns, int modulus,
                                  int prec, const MeasureOptions& opts) {
  if (modulus < 1) fail(ErrorCode::kInvalidArgument, "modulus must be positive");
  const MeasureResult base = mahler_bivariate(p, prec, opts);
  const auto deltas = delta_sweep(p, ns, base, prec, opts);
  SingularFit fit;
  fit.modulus = modulus;
  fit.ns = ns;
  std::map<long, std::vector<std::pair<double, double>>> by_class;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double d = deltas[i].value.to_double();
    fit.deltas.push_back(d);
    const bool use = abs(deltas[i].value) > deltas[i].error_bound * 10L && d != 0;
    fit.used.push_back(use);
    if (use) by_class[ns[i] % modulus].emplace_back(std::log(static_cast<double>(ns[i])), std::log(std::abs(d)));
  }
  // Pooled slope with one intercept per class; classes need two points.
  double sxy = 0, sxx = 0;
  std::size_t points = 0;
  for (const auto& [cls, pts] : by_class) {
    if (pts.size() < 2) continue;
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) mx += x, my += y;
    mx /= pts.size();
    my /= pts.size();
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    points += pts.size();
  }
  if (points < 3 || sxx <= 0) fail(ErrorCode::kDegenerate, "Delta_n is below the noise floor");
  fit.slope = sxy / sxx;
  for (const auto& [cls, pts] : by_class) {
    if (pts.size() < 2) continue;
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) mx += x, my += y;
    mx /= pts.size();
    my /= pts.size();
    // Sign from the largest member of the class.
    double sign = 1;
    for (std::size_t i = ns.size(); i-- > 0;) {
      if (fit.used[i] && ns[i] % modulus == cls) {
        sign = fit.deltas[i] < 0 ? -1 : 1;
        break;
      }
    }
    fit.amplitude[cls] = sign * std::exp(my - fit.slope * mx);
  }
  return fit;
}

}  // namespace mahler
