#include "mahler/rootengine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "mahler/error.hpp"
#include "mahler/exactalg.hpp"
#include "mahler/numerics.hpp"

namespace mahler {

UnitPoint UnitPoint::from_angle(const Real& angle) {
  Real a = reduce_angle(angle);
  BigComplex v = BigComplex::unit(a);
  return {std::move(a), std::move(v)};
}

UnitPoint UnitPoint::from_value(const BigComplex& z) { return from_angle(arg(z)); }

const char* to_string(Modulus m) {
  switch (m) {
    case Modulus::kInside:
      return "inside";
    case Modulus::kOutside:
      return "outside";
    case Modulus::kOnCircle:
      return "on-circle";
  }
  return "?";
}

std::vector<BigComplex> roots_at(const BiPoly& p, const BigComplex& x0, int prec) {
  const int d = p.deg_y();
  if (d < 1) return {};
  const auto c = p.y_coeffs_at(x0, prec);
  Real scale(prec);
  for (const auto& v : c) scale = max(scale, abs(v));
  if (abs(c[d]) <= scale * epsilon_pow2(prec / 2, prec)) {
    fail(ErrorCode::kDegenerate, "leading coefficient a_d vanishes at x = " + x0.re.to_string(12) +
                                     " + " + x0.im.to_string(12) + "i");
  }
  if (d == 1) return {-(c[0] / c[1])};
  if (d == 2) {
    // Avoid cancellation: q = -(b + sgn * sqrt(b^2 - 4ac)) / 2
    const BigComplex disc = sqrt(c[1] * c[1] - c[2] * c[0] * 4L);
    BigComplex plus = c[1] + disc;
    BigComplex minus = c[1] - disc;
    const BigComplex q = (abs(plus) >= abs(minus) ? plus : minus) * Real(mpq_class(-1, 2), prec);
    if (q.is_zero()) return {BigComplex(prec), BigComplex(prec)};
    return {q / c[2], c[0] / q};
  }
  return polyroots(c, prec).roots;
}

namespace {

double dist(const BigComplex& a, const BigComplex& b) { return abs(a - b).to_double(); }

// Permutation of `next` matching `prev` by nearest neighbour, if unambiguous.
std::optional<std::vector<BigComplex>> match(const std::vector<BigComplex>& predicted,
                                             const std::vector<BigComplex>& next) {
  const std::size_t d = next.size();
  std::vector<BigComplex> out(d, BigComplex(next[0].precision()));
  std::vector<bool> used(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    double best = INFINITY, second = INFINITY;
    std::size_t arg_best = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double dd = dist(predicted[i], next[j]);
      if (dd < best) {
        second = best;
        best = dd;
        arg_best = j;
      } else if (dd < second) {
        second = dd;
      }
    }
    if (used[arg_best]) return std::nullopt;
    if (d > 1 && !(best < 0.25 * second)) return std::nullopt;
    used[arg_best] = true;
    out[i] = next[arg_best];
  }
  return out;
}

class Tracker {
 public:
  Tracker(const BiPoly& p, int prec) : p_(p), prec_(prec) {}

  std::vector<BigComplex> at(double t) const {
    return roots_at(p_, BigComplex::unit(Real(t, prec_)), prec_);
  }

  // Continues the ordered roots `prev` at angle t0 to angle t1.
  std::vector<BigComplex> advance(const std::vector<BigComplex>& prev, double t0, double t1,
                                  int depth = 0) const {
    auto next = at(t1);
    check_separation(next, t1);
    if (auto m = match(prev, next)) return *m;
    if (depth > 40) {
      fail(ErrorCode::kHypothesis, "root tracking failed to separate branches near t = " +
                                       std::to_string(t1));
    }
    const double mid = 0.5 * (t0 + t1);
    auto half = advance(prev, t0, mid, depth + 1);
    return advance(half, mid, t1, depth + 1);
  }

  // The root at angle t nearest to `guess`.
  BigComplex nearest(double t, const BigComplex& guess) const {
    auto r = at(t);
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double dd = dist(r[j], guess);
      if (dd < bd) {
        bd = dd;
        best = j;
      }
    }
    return r[best];
  }

 private:
  void check_separation(const std::vector<BigComplex>& r, double t) const {
    const Real tiny = epsilon_pow2(prec_ / 4, prec_);
    for (std::size_t a = 0; a < r.size(); ++a) {
      for (std::size_t b = a + 1; b < r.size(); ++b) {
        if (abs(r[a] - r[b]) < tiny) {
          fail(ErrorCode::kHypothesis,
               "root collision at t = " + std::to_string(t) + " (critical point on the circle)");
        }
      }
    }
  }

  const BiPoly& p_;
  int prec_;
};

double wrap(double t) {
  const double two_pi = 2 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  return t < 0 ? t + two_pi : t;
}

}  // namespace

std::vector<RootTrajectory> track_roots(const BiPoly& p, int grid_size, int prec) {
  const int d = p.deg_y();
  if (d < 1) return {};
  if (grid_size < 8) fail(ErrorCode::kInvalidArgument, "track_roots: grid too small");
  const Tracker tr(p, prec);
  const Real tol_on = epsilon_pow2(prec / 2, prec);
  const Real one(1L, prec);
  const double step = 2 * std::numbers::pi / grid_size;

  std::vector<RootTrajectory> out(d);
  std::vector<BigComplex> cur = tr.at(0.5 * step);
  for (int j = 0; j < d; ++j) out[j].branch = j;
  for (int k = 0; k <= grid_size; ++k) {
    const double t = (k + 0.5) * step;
    if (k > 0) cur = tr.advance(cur, t - step, t);
    for (int j = 0; j < d; ++j) {
      out[j].angles.push_back(t);
      out[j].values.push_back(cur[j]);
    }
  }

  auto classify = [&](const BigComplex& z, Real* excess) {
    Real h = abs(z) - one;
    if (excess != nullptr) *excess = h;
    if (abs(h) <= tol_on) return Modulus::kOnCircle;
    return h.sign() < 0 ? Modulus::kInside : Modulus::kOutside;
  };

  for (auto& traj : out) {
    const std::size_t n = traj.angles.size();
    std::vector<Modulus> cls(n);
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) {
      Real ex(prec);
      cls[k] = classify(traj.values[k], &ex);
      h[k] = ex.to_double();
    }
    // Arcs of constant classification.
    std::size_t start = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (k == n || cls[k] != cls[start]) {
        traj.arcs.push_back({traj.angles[start], traj.angles[k - 1], cls[start]});
        start = k;
      }
    }
    // Sign changes of |rho| - 1: bisect for the crossing angle.
    for (std::size_t k = 1; k < n; ++k) {
      const bool flip = (cls[k - 1] == Modulus::kInside && cls[k] == Modulus::kOutside) ||
                        (cls[k - 1] == Modulus::kOutside && cls[k] == Modulus::kInside);
      if (!flip) continue;
      double ta = traj.angles[k - 1], tb = traj.angles[k];
      BigComplex ra = traj.values[k - 1], rb = traj.values[k];
      for (int it = 0; it < 60 && tb - ta > 1e-14; ++it) {
        const double tm = 0.5 * (ta + tb);
        BigComplex guess = (ra + rb) * Real(0.5, prec);
        BigComplex rm = tr.nearest(tm, guess);
        const Modulus cm = classify(rm, nullptr);
        if (cm == Modulus::kOnCircle) {
          ta = tb = tm;
          ra = rb = rm;
          break;
        }
        if (cm == cls[k - 1]) {
          ta = tm;
          ra = std::move(rm);
        } else {
          tb = tm;
          rb = std::move(rm);
        }
      }
      const int dir = cls[k - 1] == Modulus::kInside ? 1 : -1;
      traj.crossings.push_back({wrap(0.5 * (ta + tb)), dir, ra});
    }
    // Tangential touches: local minima of ||rho| - 1| without a sign change.
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (cls[k] == Modulus::kOnCircle || cls[k - 1] != cls[k] || cls[k + 1] != cls[k]) continue;
      const double a0 = std::abs(h[k - 1]), a1 = std::abs(h[k]), a2 = std::abs(h[k + 1]);
      if (!(a1 < a0 && a1 <= a2) || a1 > 4 * step) continue;
      double lo = traj.angles[k - 1], hi = traj.angles[k + 1];
      const double g = 0.5 * (std::sqrt(5.0) - 1);
      BigComplex anchor = traj.values[k];
      auto excess = [&](double t, BigComplex* root) {
        BigComplex r = tr.nearest(t, anchor);
        const double e = std::abs((abs(r) - one).to_double());
        if (root != nullptr) *root = r;
        return e;
      };
      double c = hi - g * (hi - lo), dd = lo + g * (hi - lo);
      double fc = excess(c, nullptr), fd = excess(dd, nullptr);
      for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        if (fc < fd) {
          hi = dd;
          dd = c;
          fd = fc;
          c = hi - g * (hi - lo);
          fc = excess(c, nullptr);
        } else {
          lo = c;
          c = dd;
          fc = fd;
          dd = lo + g * (hi - lo);
          fd = excess(dd, nullptr);
        }
      }
      const double tm = 0.5 * (lo + hi);
      BigComplex rm(prec);
      const double em = excess(tm, &rm);
      if (em < 1e-14) traj.crossings.push_back({wrap(tm), 0, rm});
    }
    std::sort(traj.crossings.begin(), traj.crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.angle < b.angle; });
  }
  return out;
}

std::vector<BigComplex> implicit_derivs(const BiPoly& p, const BigComplex& alpha,
                                        const BigComplex& beta, int kmax, int prec) {
  if (kmax < 1) return {};
  if (kmax > 12) fail(ErrorCode::kInvalidArgument, "implicit_derivs supports kmax <= 12");
  const BigComplex p01 = p.partial(0, 1).eval(alpha, beta, prec);
  if (abs(p01) < epsilon_pow2(prec / 2, prec)) {
    fail(ErrorCode::kHypothesis, "dP/dy vanishes at the point (critical point)");
  }
  Assignment w;
  for (int s = 1; s <= kmax; ++s) {
    for (int i = 0; i <= s; ++i) {
      w.emplace(IndexedVar::w(i, s - i), p.partial(i, s - i).eval(alpha, beta, prec));
    }
  }
  std::vector<BigComplex> out;
  BigComplex denom = p01;  // P01^{2n-1}
  const BigComplex p01_sq = p01 * p01;
  for (int n = 1; n <= kmax; ++n) {
    out.push_back(eval_intpoly(q_poly(n), w, prec) / denom);
    denom *= p01_sq;
  }
  return out;
}

std::vector<BigComplex> maclaurin_b(const BiPoly& p, const BigComplex& alpha,
                                    const BigComplex& beta, int kmax, int prec) {
  const auto rho = implicit_derivs(p, alpha, beta, kmax, prec);
  // x(t) = alpha e^{it}: x^{(m)}(0) = i^m alpha
  std::vector<BigComplex> xd(kmax + 1, BigComplex(prec));
  BigComplex im_pow(Real(1L, prec), Real(prec));
  const BigComplex iu(Real(prec), Real(1L, prec));
  for (int m = 1; m <= kmax; ++m) {
    im_pow *= iu;
    xd[m] = im_pow * alpha;
  }
  const PhiEvaluator bx(xd, kmax, prec);
  // h(t) = rho(x(t)) / beta, h(0) = 1
  std::vector<BigComplex> hd(kmax + 1, BigComplex(prec));
  for (int n = 1; n <= kmax; ++n) {
    BigComplex g(prec);
    for (int k = 1; k <= n; ++k) g += rho[k - 1] * bx.bell(n, k);
    hd[n] = g / beta;
  }
  const PhiEvaluator bh(hd, kmax, prec);
  std::vector<BigComplex> b;
  mpz_class nfact = 1;
  for (int n = 1; n <= kmax; ++n) {
    nfact *= n;
    BigComplex f(prec);
    mpz_class kf = 1;  // (k-1)!
    for (int k = 1; k <= n; ++k) {
      if (k > 1) kf *= k - 1;
      BigComplex t = bh.bell(n, k) * Real(kf, prec);
      if (k % 2 == 0) t = -t;
      f += t;
    }
    b.push_back(f / Real(nfact, prec));
  }
  return b;
}

SignResult sign_at(const BiPoly& p, const BigComplex& alpha, const BigComplex& beta, int prec,
                   int kmax) {
  SignResult res;
  res.b = maclaurin_b(p, alpha, beta, kmax, prec);
  const Real tol = epsilon_pow2(prec / 2, prec);
  for (int n = 1; n <= kmax; ++n) {
    const Real& re = res.b[n - 1].re;
    if (abs(re) > tol) {
      res.order = n;
      res.sign = n % 2 == 0 ? 0 : re.sign();
      return res;
    }
  }
  fail(ErrorCode::kNonConvergence,
       "undetermined order: Re(b_k) vanishes for all k <= " + std::to_string(kmax));
}

int crossing_direction(const BiPoly& p, const BigComplex& alpha, const BigComplex& beta,
                       const Real& h, int prec) {
  auto branch = [&](const Real& dt) {
    const auto r = roots_at(p, alpha * BigComplex::unit(dt), prec);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j) {
      if (abs(r[j] - beta) < abs(r[best] - beta)) best = j;
    }
    return abs(r[best]) - Real(1L, prec);
  };
  const int before = branch(-h).sign();
  const int after = branch(h).sign();
  if (before < 0 && after > 0) return 1;
  if (before > 0 && after < 0) return -1;
  return 0;
}

std::vector<ExceptionalPoint> exceptional_set(const BiPoly& p, int prec, int kmax) {
  if (p.deg_y() < 1) return {};
  if (is_asr(p)) return {};
  const UniPoly r = resultant_y(p, p.reciprocal());
  if (r.is_zero()) {
    fail(ErrorCode::kDegenerate,
         "Res_y(P, P*) vanishes identically: P shares a factor with P* (factor P first)");
  }
  const UniPoly sf = squarefree_part(r);
  if (sf.degree() < 1) return {};
  const Real tol = epsilon_pow2(prec / 2, prec);
  const Real one(1L, prec);
  std::vector<ExceptionalPoint> out;
  const BiPoly ps = p.reciprocal();
  for (const auto& a : polyroots(sf, prec).roots) {
    if (abs(abs(a) - one) >= tol) continue;
    const UnitPoint alpha = UnitPoint::from_value(a);
    for (const auto& b : roots_at(p, alpha.value, prec)) {
      if (abs(abs(b) - one) >= tol) continue;
      if (abs(ps.eval(alpha.value, b, prec)) >= tol) continue;
      ExceptionalPoint ep;
      ep.alpha = alpha;
      ep.beta = UnitPoint::from_value(b);
      const SignResult s = sign_at(p, ep.alpha.value, ep.beta.value, prec, kmax);
      ep.sign = s.sign;
      ep.order = s.order;
      ep.b = s.b;
      out.push_back(std::move(ep));
    }
  }
  std::sort(out.begin(), out.end(), [](const ExceptionalPoint& x, const ExceptionalPoint& y) {
    if (!(x.alpha.angle == y.alpha.angle)) return x.alpha.angle < y.alpha.angle;
    return x.beta.angle < y.beta.angle;
  });
  return out;
}

}  // namespace mahler
