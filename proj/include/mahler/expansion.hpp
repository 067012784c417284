#pragma once

// Coefficients c_r(n) of the expansion Delta_n(P) ~ sum_{r>=2} c_r(n) / n^r,
// their partial sums, and empirical checks against computed Delta_n.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "mahler/bivar.hpp"
#include "mahler/mahler.hpp"
#include "mahler/real.hpp"
#include "mahler/rootengine.hpp"

namespace mahler {

// Omega_{P,r,a}(alpha, beta) by substituting w_{i,j} = x^i y^{j-1} P_{i,j} / P_{0,1}
// into Psi_{r,a}. Throws Error(kDegenerate) if P_{0,1}(alpha, beta) = 0 and
// Error(kInvalidArgument) unless 2 <= a <= r.
BigComplex omega_eval(const BiPoly& p, int r, int a, const BigComplex& alpha,
                      const BigComplex& beta, int prec);

// The same value as Phi_{r-1,r-a+1}(rho, x rho', x^2 rho'', ...) / rho^{r-1},
// with the derivatives of the root function through (alpha, beta) taken from
// its power series. No symbolic expansion, so usable for large r.
BigComplex omega_eval_series(const BiPoly& p, int r, int a, const BigComplex& alpha,
                             const BigComplex& beta, int prec);

// t_k = rho^{(k)}(alpha) / k! for k = 0..order, solved term by term from
// P(alpha + h, rho) = 0.
std::vector<BigComplex> root_series(const BiPoly& p, const BigComplex& alpha,
                                    const BigComplex& beta, int order, int prec);

// P divided by the gcd of its coefficients in y. Factors in x alone change
// m(P(x, x^n)) and m(P) equally, so Delta_n only sees the primitive part.
BiPoly primitive_part_y(const BiPoly& p);

enum class OmegaRoute { kAuto, kSymbolic, kSeries };

// The exceptional set, signs and Omega values of one polynomial, shared by
// all (r, n). Thread-safe.
class ExpansionContext {
 public:
  // Works on primitive_part_y(p). Throws Error(kHypothesis) if E is nonempty
  // and the critical resultant has a root on the unit circle.
  ExpansionContext(const BiPoly& p, int prec, OmegaRoute route = OmegaRoute::kAuto);

  const BiPoly& poly() const { return poly_; }
  int precision() const { return prec_; }
  const std::vector<ExceptionalPoint>& points() const { return points_; }
  // Smallest M with alpha^M = 1 for every point (1 when E is empty), if any
  // M <= 1000 works.
  std::optional<int> modulus() const { return modulus_; }

  BigComplex omega(std::size_t point, int r, int a) const;
  Real coefficient(int r, long n) const;

 private:
  const std::vector<BigComplex>& scaled_derivs(std::size_t point, int order) const;

  BiPoly poly_;
  int prec_;
  OmegaRoute route_;
  std::vector<ExceptionalPoint> points_;
  std::optional<int> modulus_;
  mutable std::mutex mu_;
  // x^k rho^{(k)} at each point, grown on demand.
  mutable std::vector<std::vector<BigComplex>> derivs_;
};

// c_r(n) for r >= 2. c_1 is identically zero and r < 2 is rejected.
Real coefficient(const BiPoly& p, int r, long n, int prec);

// The closed form for P = 1 + x + y in terms of Stirling numbers and
// polylogarithms at third roots of unity.
Real coefficient_1xy(int r, long n, int prec);

// (c_2(n), c_3(n)) from F_P = -x P_{1,0} / (y P_{0,1}) and G_P.
std::pair<Real, Real> closed_c2_c3(const BiPoly& p, long n, int prec);
std::pair<Real, Real> closed_c2_c3(const ExpansionContext& ctx, long n);

struct CoefficientTable {
  BiPoly poly;
  std::optional<int> modulus;
  int precision = kDefaultPrecision;
  // (r, n mod modulus) when the modulus is set, (r, n) otherwise.
  std::map<std::pair<int, long>, Real> entries;

  const Real& at(int r, long n) const;
};

// Entries for 2 <= r <= rmax. With a modulus, every residue class is filled
// and checked on two representatives; otherwise `ns` are used as keys.
CoefficientTable build_coefficient_table(const ExpansionContext& ctx, int rmax,
                                         const std::vector<long>& ns = {}, int jobs = 1);

// p_k(n) = sum_{r=2}^{k} c_r(n) / n^r. Throws Error(kInvalidArgument) on a missing entry.
Real partial_sum(const CoefficientTable& table, int k, long n);

// Delta_n for every n, reusing one m(P). Parallel over n with opts.jobs.
std::vector<MeasureResult> delta_sweep(const BiPoly& p, const std::vector<long>& ns,
                                       const MeasureResult& base, int prec,
                                       const MeasureOptions& opts = {});

// Polynomial extrapolation in h = 1/n to h = 0 through the last order+1 points.
Real richardson_limit(const std::vector<long>& ns, const std::vector<Real>& values, int order);

struct EmpiricalResult {
  std::vector<long> ns;
  std::vector<Real> sequence;  // n^k (Delta_n - p_{k-1}(n))
  Real limit;
  int order = 0;
};

// Requires every n in n_list to be = n_class mod modulus, increasing.
EmpiricalResult empirical_coefficient(const ExpansionContext& ctx, int k, long n_class, int modulus,
                                      const std::vector<long>& n_list,
                                      const MeasureOptions& opts = {});

struct SingularFit {
  double slope = 0;
  int modulus = 1;
  std::map<long, double> amplitude;  // per residue class: Delta_n ~ amplitude * n^slope
  std::vector<long> ns;
  std::vector<double> deltas;
  std::vector<bool> used;
};

// Least-squares slope of log|Delta_n| against log n with one intercept per
// residue class. Values within 10x their error bound are dropped; throws
// Error(kDegenerate) ("below noise floor") if fewer than three remain.
SingularFit fit_singular_exponent(const BiPoly& p, const std::vector<long>& ns, int modulus,
                                  int prec, const MeasureOptions& opts = {});

}  // namespace mahler
