#include "mahler/mahler.hpp"

#include <algorithm>

#include "mahler/error.hpp"
#include "mahler/numerics.hpp"
#include "mahler/quadrature.hpp"
#include "mahler/rootengine.hpp"

namespace mahler {

namespace {

Real default_target(const MeasureOptions& opts, int prec) {
  return opts.target_err ? *opts.target_err : epsilon_pow2(prec / 2 + 8, prec);
}

Real log_plus(const Real& r) {
  if (r > 1.0) return log(r);
  return Real(r.precision());
}

// Unit-circle roots of q as angles in [0, 2pi).
void circle_angles(const UniPoly& q, int prec, std::vector<Real>& out) {
  if (q.degree() < 1) return;
  const UniPoly sf = squarefree_part(q);
  if (sf.degree() < 1) return;
  const Real tol = epsilon_pow2(prec / 2, prec);
  for (const auto& z : polyroots(sf, prec).roots) {
    if (abs(abs(z) - Real(1L, prec)) < tol) out.push_back(reduce_angle(arg(z)));
  }
}

// roots_at, except that nodes close to a zero of a_d on the circle (graded
// panels get arbitrarily close) fall back to the raw coefficient vector.
std::vector<BigComplex> roots_near_singular(const BiPoly& p, const BigComplex& x, int prec) {
  try {
    return roots_at(p, x, prec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerate) throw;
  }
  std::vector<BigComplex> c = p.y_coeffs_at(x, prec);
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  if (c.size() < 2) return {};
  return polyroots(c, prec).roots;
}

QuadratureOptions quad_options(const MeasureOptions& opts, const Real& target) {
  QuadratureOptions q;
  q.target_err = target;
  q.jobs = opts.jobs;
  q.max_panels = opts.max_panels;
  return q;
}

}  // namespace

const char* to_string(MeasureMethod m) {
  return m == MeasureMethod::kJensen ? "jensen" : "quadrature";
}

MeasureResult mahler_univariate(const UniPoly& p, int prec) {
  if (p.is_zero()) fail(ErrorCode::kInvalidArgument, "Mahler measure of the zero polynomial");
  // Strip the x^k factor; zero roots contribute nothing.
  int low = 0;
  while (p.coeff(low).is_zero()) ++low;
  std::vector<GaussRational> c(p.coeffs().begin() + low, p.coeffs().end());
  const UniPoly q(std::move(c));
  MeasureResult res{abs(q.lead().to_complex(prec)), Real(prec), MeasureMethod::kJensen, 0};
  res.value = log(res.value);
  if (q.degree() >= 1) {
    const RootSet rs = polyroots(q, prec);
    for (std::size_t k = 0; k < rs.roots.size(); ++k) {
      const Real r = abs(rs.roots[k]);
      res.value += log_plus(r);
      // log+ is 1-Lipschitz in |z| for |z| >= 1.
      if (r + rs.radii[k] > 1.0) res.error_bound += rs.radii[k];
    }
  }
  res.error_bound += epsilon_pow2(prec - 16, prec) * static_cast<long>(q.degree() + 1);
  return res;
}

std::vector<Real> quadrature_breaks(const BiPoly& p, int prec) {
  std::vector<Real> out;
  const int d = p.deg_y();
  if (d < 1) return out;
  const UniPoly tor = resultant_y(p, p.reciprocal());
  if (!tor.is_zero()) {
    circle_angles(tor, prec, out);
  } else if (!is_asr(p)) {
    // P and P* share a factor: locate crossings by tracking instead. For
    // a.s.r. P roots pair as rho <-> 1/conj(rho), so they can only leave the
    // circle where two of them collide, which the critical resultant covers.
    try {
      for (const auto& tr : track_roots(p, 512, prec)) {
        for (const auto& c : tr.crossings) out.push_back(Real(c.angle, prec));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kHypothesis) throw;
    }
  }
  circle_angles(p.coeff_y(d), prec, out);
  if (d >= 2) {
    const UniPoly crit = critical_resultant(p);
    if (!crit.is_zero()) circle_angles(crit, prec, out);
  }
  std::sort(out.begin(), out.end(), [](const Real& a, const Real& b) { return a < b; });
  const Real sep = epsilon_pow2(prec / 2, prec);
  std::vector<Real> uniq;
  for (auto& a : out) {
    if (uniq.empty() || a - uniq.back() > sep) uniq.push_back(std::move(a));
  }
  return uniq;
}

MeasureResult mahler_bivariate(const BiPoly& p, int prec, const MeasureOptions& opts) {
  if (p.is_zero()) fail(ErrorCode::kInvalidArgument, "Mahler measure of the zero polynomial");
  const int d = p.deg_y();
  if (d == 0) return mahler_univariate(p.coeff_y(0), prec);

  const MeasureResult lead = mahler_univariate(p.coeff_y(d), prec);
  const Real two_pi = Real::pi(prec) * 2L;
  std::vector<Real> breaks = quadrature_breaks(p, prec);
  breaks.push_back(Real(0L, prec));
  breaks.push_back(two_pi);

  auto integrand = [&](const Real& t) {
    Real s(prec);
    for (const auto& y : roots_near_singular(p, BigComplex::unit(t), prec)) s += log_plus(abs(y));
    return s;
  };
  const Real target = default_target(opts, prec) * two_pi;
  const QuadratureResult q = integrate(integrand, std::move(breaks), quad_options(opts, target), prec);
  MeasureResult res{lead.value + q.value / two_pi, lead.error_bound + q.error_bound / two_pi,
                    MeasureMethod::kQuadrature, q.panels};
  return res;
}

MeasureResult mahler_curve(const BiPoly& p, int n, int prec, const MeasureOptions& opts) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "curve exponent n must be positive");
  const UniPoly u = substitute_curve(p, n);
  if (u.degree() <= opts.jensen_max_degree) return mahler_univariate(u, prec);

  // Sparse evaluation of log|P(e^{it}, e^{int})|.
  std::vector<std::pair<long, BigComplex>> terms;
  for (const auto& [key, c] : p.terms()) {
    terms.emplace_back(static_cast<long>(key.first) + static_cast<long>(n) * key.second,
                       c.to_complex(prec));
  }
  auto integrand = [&](const Real& t) {
    BigComplex s(prec);
    for (const auto& [e, c] : terms) s += c * BigComplex::unit(t * e);
    return log(abs(s));
  };
  const Real two_pi = Real::pi(prec) * 2L;
  const int pieces = std::max(16, u.degree() / 4);
  std::vector<Real> breaks;
  for (int k = 0; k <= pieces; ++k) breaks.push_back(two_pi * static_cast<long>(k) / static_cast<long>(pieces));
  const Real target = default_target(opts, prec) * two_pi;
  QuadratureOptions qo = quad_options(opts, target);
  qo.max_panels = std::max(qo.max_panels, 8 * pieces);
  const QuadratureResult q = integrate(integrand, std::move(breaks), qo, prec);
  return {q.value / two_pi, q.error_bound / two_pi, MeasureMethod::kQuadrature, q.panels};
}

MeasureResult delta_n(const BiPoly& p, int n, const MeasureResult& base, int prec,
                      const MeasureOptions& opts) {
  const MeasureResult curve = mahler_curve(p, n, prec, opts);
  return {curve.value - base.value, curve.error_bound + base.error_bound, curve.method,
          curve.panels + base.panels};
}

MeasureResult delta_n(const BiPoly& p, int n, int prec, const MeasureOptions& opts) {
  return delta_n(p, n, mahler_bivariate(p, prec, opts), prec, opts);
}

}  // namespace mahler
