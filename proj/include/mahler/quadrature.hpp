#pragma once

// Adaptive Gauss-Legendre quadrature at arbitrary precision.

#include <functional>
#include <vector>

#include "mahler/real.hpp"

namespace mahler {

struct GaussLegendreRule {
  std::vector<Real> nodes;  // on [-1, 1], ascending
  std::vector<Real> weights;
};

// Cached per (order, prec).
const GaussLegendreRule& gauss_legendre(int order, int prec);

struct QuadratureResult {
  Real value;
  // 4 * sum over accepted panels of |fine - coarse| plus a rounding floor.
  Real error_bound;
  int panels = 0;
};

struct QuadratureOptions {
  Real target_err;
  int order = 32;
  int max_panels = 20000;
  int jobs = 1;
};

// Integrates f over [breaks.front(), breaks.back()], never placing a node on
// a break. The panel with the largest two-level difference is bisected until
// the differences sum to at most target_err; panels narrower than 2^-(prec-8)
// of the total length (log singularities) are frozen. Throws
// Error(kNonConvergence) past max_panels.
QuadratureResult integrate(const std::function<Real(const Real&)>& f, std::vector<Real> breaks,
                           const QuadratureOptions& opts, int prec);

}  // namespace mahler
