#pragma once

// Logarithmic Mahler measures of univariate and bivariate polynomials, the
// curve measure m(P(x, x^n)) and the difference Delta_n(P).

#include <optional>

#include "mahler/bivar.hpp"
#include "mahler/real.hpp"

namespace mahler {

enum class MeasureMethod { kJensen, kQuadrature };
const char* to_string(MeasureMethod m);

struct MeasureResult {
  Real value;
  // Jensen: propagated root inclusion radii. Quadrature: 4x the last
  // refinement difference. Not rigorous in the quadrature case.
  Real error_bound;
  MeasureMethod method = MeasureMethod::kJensen;
  int panels = 0;
};

struct MeasureOptions {
  std::optional<Real> target_err;  // default 2^-(prec/2 + 8)
  int jobs = 1;
  int max_panels = 20000;
  int jensen_max_degree = 4096;
};

// log|a| + sum log+ |root|. Throws Error(kInvalidArgument) on the zero polynomial.
MeasureResult mahler_univariate(const UniPoly& p, int prec);

// m(a_d) + (1/2pi) int sum_j log+ |rho_j(e^{it})| dt, with panel breaks at
// angles where a root function meets the circle, where a_d vanishes and where
// two root functions collide.
MeasureResult mahler_bivariate(const BiPoly& p, int prec, const MeasureOptions& opts = {});

// m(P(x, x^n)). Throws Error(kDegenerate) if P(x, x^n) vanishes identically.
MeasureResult mahler_curve(const BiPoly& p, int n, int prec, const MeasureOptions& opts = {});

// m(P(x, x^n)) - m(P). The second form reuses a precomputed m(P).
MeasureResult delta_n(const BiPoly& p, int n, int prec, const MeasureOptions& opts = {});
MeasureResult delta_n(const BiPoly& p, int n, const MeasureResult& base, int prec,
                      const MeasureOptions& opts = {});

// Angles in [0, 2pi) where the integrand of mahler_bivariate is not analytic.
std::vector<Real> quadrature_breaks(const BiPoly& p, int prec);

}  // namespace mahler
