#include "mahler/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "mahler/error.hpp"
#include "mahler/simd/aberth_kernels.hpp"

namespace mahler {

void horner(std::span<const BigComplex> coeffs, const BigComplex& z, BigComplex& p,
            BigComplex& dp) {
  const int prec = z.precision();
  p = BigComplex(prec);
  dp = BigComplex(prec);
  for (std::size_t c = coeffs.size(); c-- > 0;) {
    dp *= z;
    dp += p;
    p *= z;
    p += coeffs[c];
  }
}

BigComplex horner(std::span<const BigComplex> coeffs, const BigComplex& z) {
  BigComplex p(z.precision());
  for (std::size_t c = coeffs.size(); c-- > 0;) {
    p *= z;
    p += coeffs[c];
  }
  return p;
}

namespace {

using cd = std::complex<double>;

struct Seed {
  double log_r;
  double angle;
};

// Initial approximations on circles whose radii come from the upper convex
// hull of (k, log|c_k|).
std::vector<Seed> hull_seeds(std::span<const BigComplex> c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<std::pair<int, double>> pts;
  for (int k = 0; k <= d; ++k) {
    if (c[k].is_zero()) continue;
    pts.emplace_back(k, log(abs(c[k])).to_double());
  }
  std::vector<std::pair<int, double>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      const double cross =
          (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
      if (cross >= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  std::vector<Seed> seeds;
  seeds.reserve(d);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int k0 = hull[h].first;
    const int k1 = hull[h + 1].first;
    const int m = k1 - k0;
    const double log_r = (hull[h].second - hull[h + 1].second) / m;
    for (int j = 0; j < m; ++j) {
      const double angle = 2 * std::numbers::pi * (j + 0.25) / m + 2 * std::numbers::pi * k0 / d + 0.4;
      seeds.push_back({log_r, angle});
    }
  }
  return seeds;
}

// Jacobi-style Aberth iteration in double precision. Returns false if the
// iteration fails to settle or leaves the representable range.
bool aberth_double(std::span<const BigComplex> c, const std::vector<Seed>& seeds,
                   std::vector<cd>& roots) {
  const std::size_t d = c.size() - 1;
  for (const auto& s : seeds) {
    if (std::abs(s.log_r) > 600) return false;
  }
  double scale_log = 0;
  {
    // Normalize by the largest coefficient.
    double mx = -1e300;
    for (const auto& v : c) {
      if (!v.is_zero()) mx = std::max(mx, log(abs(v)).to_double());
    }
    scale_log = mx;
  }
  std::vector<double> cr(d + 1), ci(d + 1), rr(d + 1), ri(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    if (c[k].is_zero()) {
      cr[k] = ci[k] = 0;
      continue;
    }
    const Real sc = exp(Real(-scale_log, c[k].precision()));
    cr[k] = (c[k].re * sc).to_double();
    ci[k] = (c[k].im * sc).to_double();
    if (!std::isfinite(cr[k]) || !std::isfinite(ci[k])) return false;
  }
  for (std::size_t k = 0; k <= d; ++k) {
    rr[k] = cr[d - k];
    ri[k] = ci[d - k];
  }

  roots.resize(d);
  for (std::size_t k = 0; k < d; ++k) roots[k] = std::polar(std::exp(seeds[k].log_r), seeds[k].angle);

  const simd::Isa isa = simd::active_isa();
  std::vector<double> zr(d), zi(d), sr(d), si(d);
  std::vector<bool> frozen(d, false);
  std::vector<double> xr, xi, pr, pi, dr, di;
  std::vector<std::size_t> inner, outer;
  for (int iter = 0; iter < 2000; ++iter) {
    for (std::size_t k = 0; k < d; ++k) {
      zr[k] = roots[k].real();
      zi[k] = roots[k].imag();
    }
    simd::aberth_sums(isa, d, zr.data(), zi.data(), sr.data(), si.data());

    inner.clear();
    outer.clear();
    for (std::size_t k = 0; k < d; ++k) {
      if (frozen[k]) continue;
      (std::abs(roots[k]) <= 1.0 ? inner : outer).push_back(k);
    }
    if (inner.empty() && outer.empty()) return true;

    std::vector<cd> newton(d);
    auto run = [&](const std::vector<std::size_t>& idx, bool reversed) {
      const std::size_t m = idx.size();
      if (m == 0) return;
      xr.resize(m);
      xi.resize(m);
      pr.resize(m);
      pi.resize(m);
      dr.resize(m);
      di.resize(m);
      for (std::size_t t = 0; t < m; ++t) {
        const cd x = reversed ? 1.0 / roots[idx[t]] : roots[idx[t]];
        xr[t] = x.real();
        xi[t] = x.imag();
      }
      simd::horner_batch(isa, reversed ? rr.data() : cr.data(), reversed ? ri.data() : ci.data(),
                         d + 1, m, xr.data(), xi.data(), pr.data(), pi.data(), dr.data(), di.data());
      for (std::size_t t = 0; t < m; ++t) {
        const cd p(pr[t], pi[t]);
        const cd dp(dr[t], di[t]);
        const cd z = roots[idx[t]];
        if (!reversed) {
          newton[idx[t]] = p == 0.0 ? cd(0) : p / dp;
        } else {
          // p(z) = z^d q(1/z): p/p' = z / (d - w q'(w)/q(w))
          const cd w(xr[t], xi[t]);
          newton[idx[t]] = p == 0.0 ? cd(0) : z / (static_cast<double>(d) - w * dp / p);
        }
      }
    };
    run(inner, false);
    run(outer, true);

    bool any_active = false;
    for (std::size_t k = 0; k < d; ++k) {
      if (frozen[k]) continue;
      const cd n = newton[k];
      const cd corr = n / (1.0 - n * cd(sr[k], si[k]));
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) return false;
      roots[k] -= corr;
      if (std::abs(corr) <= 4e-16 * std::max(std::abs(roots[k]), 1e-300)) {
        frozen[k] = true;
      } else {
        any_active = true;
      }
    }
    if (!any_active) return true;
  }
  // Stalled: usually clustered or multiple roots. The seeds are still useful.
  return true;
}

struct PolishResult {
  bool converged = true;
};

// Gauss-Seidel Aberth iteration at full precision.
PolishResult aberth_mp(std::span<const BigComplex> c, std::vector<BigComplex>& z, int prec,
                       int max_iter) {
  const std::size_t d = z.size();
  std::vector<bool> frozen(d, false);
  const Real tol = epsilon_pow2(prec - 8, prec);
  const Real tiny = epsilon_pow2(prec * 2, prec);
  const Real one(1L, prec);
  BigComplex p(prec), dp(prec);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool any_active = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (frozen[i]) continue;
      horner(c, z[i], p, dp);
      if (p.is_zero()) {
        frozen[i] = true;
        continue;
      }
      const BigComplex n = p / dp;
      BigComplex s(prec);
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        const BigComplex diff = z[i] - z[j];
        if (diff.is_zero()) continue;
        s += inverse(diff);
      }
      const BigComplex corr = n / (BigComplex(one, Real(prec)) - n * s);
      if (!corr.is_finite()) return {false};
      z[i] -= corr;
      if (abs(corr) <= tol * max(abs(z[i]), tiny)) {
        frozen[i] = true;
      } else {
        any_active = true;
      }
    }
    if (!any_active) return {true};
  }
  return {false};
}

}  // namespace

RootSet polyroots(std::span<const BigComplex> coeffs, int prec) {
  if (coeffs.empty() || coeffs.back().is_zero()) {
    fail(ErrorCode::kInvalidArgument, "polyroots: leading coefficient is zero");
  }
  std::size_t low = 0;
  while (coeffs[low].is_zero()) ++low;
  const std::size_t total = coeffs.size() - 1;
  if (total == 0) fail(ErrorCode::kInvalidArgument, "polyroots: constant polynomial");

  std::vector<BigComplex> c;
  c.reserve(coeffs.size() - low);
  for (std::size_t k = low; k < coeffs.size(); ++k) {
    BigComplex v = coeffs[k];
    v.re.round_to(prec);
    v.im.round_to(prec);
    c.push_back(std::move(v));
  }
  const std::size_t d = c.size() - 1;

  RootSet rs;
  rs.leading = c.back();
  for (std::size_t k = 0; k < low; ++k) {
    rs.roots.emplace_back(prec);
    rs.residuals.emplace_back(prec);
    rs.radii.emplace_back(prec);
  }
  if (d == 0) return rs;

  std::vector<BigComplex> z;
  if (d == 1) {
    z.push_back(-(c[0] / c[1]));
  } else {
    const auto seeds = hull_seeds(c);
    std::vector<cd> droots;
    if (aberth_double(c, seeds, droots)) {
      for (const auto& r : droots) z.emplace_back(r.real(), r.imag(), prec);
      if (!aberth_mp(c, z, prec, 100).converged) {
        // Slow linear convergence near multiple roots; continue longer.
        aberth_mp(c, z, prec, 400);
      }
    } else {
      for (const auto& s : seeds) {
        const Real r = exp(Real(s.log_r, prec));
        z.push_back(BigComplex::unit(Real(s.angle, prec)) * r);
      }
      if (!aberth_mp(c, z, prec, 3000).converged) {
        fail(ErrorCode::kNonConvergence,
             "polyroots: Aberth iteration did not converge (degree " + std::to_string(d) + ")");
      }
    }
  }

  BigComplex p(prec), dp(prec);
  const Real dd(static_cast<long>(d), prec);
  const Real slack = epsilon_pow2(prec / 4, prec);
  // Horner rounding: |fl(p) - p| <= 2 d u sum |c_k| |z|^k, u = 2^-prec; doubled
  // for complex arithmetic. Near a multiple root this dominates |fl(p)|.
  const Real unit_err = epsilon_pow2(prec - 2, prec) * static_cast<long>(2 * d);
  std::vector<Real> abs_c;
  for (const auto& v : c) abs_c.push_back(abs(v));
  for (auto& root : z) {
    horner(c, root, p, dp);
    const Real az = abs(root);
    Real magnitude = abs_c[d];
    for (std::size_t k = d; k-- > 0;) magnitude = magnitude * az + abs_c[k];
    const Real p_bound = abs(p) + unit_err * magnitude;
    Real radius = dp.is_zero() ? Real::inf(prec) : dd * p_bound / abs(dp);
    Real residual = abs(p);
    // Residual of the full polynomial including the stripped zero roots.
    if (low > 0) residual *= pow(abs(root), static_cast<long>(low));
    if (radius > slack * max(abs(root), Real(1L, prec))) {
      fail(ErrorCode::kNonConvergence, "polyroots: root not resolved (inclusion radius " +
                                           radius.to_string(4) + ")");
    }
    rs.roots.push_back(std::move(root));
    rs.residuals.push_back(std::move(residual));
    rs.radii.push_back(std::move(radius));
  }
  return rs;
}

RootSet polyroots(const UniPoly& p, int prec) {
  const auto c = p.to_complex(prec);
  return polyroots(c, prec);
}

Real reduce_angle(const Real& phi) {
  const int prec = phi.precision();
  const Real two_pi = Real::pi(prec) * 2L;
  Real r = phi - floor(phi / two_pi) * two_pi;
  if (r >= two_pi) r -= two_pi;
  if (r.sign() < 0) r += two_pi;
  return r;
}

}  // namespace mahler
