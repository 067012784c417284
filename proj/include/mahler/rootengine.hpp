#pragma once

// Root functions y = rho(x) of P(x, y) = 0 over the unit circle: tracking,
// the exceptional set of torus zeros, implicit derivatives and the crossing
// sign of each exceptional point.

#include <vector>

#include "mahler/bivar.hpp"
#include "mahler/real.hpp"

namespace mahler {

struct UnitPoint {
  Real angle;  // in [0, 2 pi)
  BigComplex value;

  static UnitPoint from_angle(const Real& angle);
  // Projects z onto the circle by its argument.
  static UnitPoint from_value(const BigComplex& z);
};

enum class Modulus { kInside, kOutside, kOnCircle };
const char* to_string(Modulus m);

struct Crossing {
  double angle;      // radians in [0, 2 pi)
  int direction;     // +1 inside->outside, -1 outside->inside, 0 touch
  BigComplex value;  // rho at the crossing
};

struct Arc {
  double t0;
  double t1;
  Modulus cls;
};

struct RootTrajectory {
  int branch = 0;
  std::vector<double> angles;
  std::vector<BigComplex> values;
  std::vector<Arc> arcs;
  std::vector<Crossing> crossings;
};

struct ExceptionalPoint {
  UnitPoint alpha;
  UnitPoint beta;
  int sign = 0;
  int order = 0;  // first N with Re(b_N) != 0
  std::vector<BigComplex> b;  // b_1 .. b_kmax
};

// The deg_y(P) roots of P(x0, y). Throws Error(kDegenerate) if the leading
// coefficient a_d vanishes at x0.
std::vector<BigComplex> roots_at(const BiPoly& p, const BigComplex& x0, int prec);

// Follows the d root functions along x = exp(i t) on a grid of `grid_size`
// angles, with bisection near modulus-1 crossings. Throws Error(kHypothesis)
// if two roots collide.
std::vector<RootTrajectory> track_roots(const BiPoly& p, int grid_size, int prec);

// Isolated torus zeros with their signs. Empty for a.s.r. P. Throws
// Error(kDegenerate) if Res_y(P, P*) vanishes identically.
std::vector<ExceptionalPoint> exceptional_set(const BiPoly& p, int prec, int kmax = 8);

// rho^{(n)}(alpha) for n = 1..kmax at a simple point (alpha, beta) of Z(P).
std::vector<BigComplex> implicit_derivs(const BiPoly& p, const BigComplex& alpha,
                                        const BigComplex& beta, int kmax, int prec);

// Taylor coefficients b_1..b_kmax at t = 0 of f(t) = Log(rho(alpha e^{it}) / beta).
std::vector<BigComplex> maclaurin_b(const BiPoly& p, const BigComplex& alpha,
                                    const BigComplex& beta, int kmax, int prec);

struct SignResult {
  int sign = 0;
  int order = 0;
  std::vector<BigComplex> b;
};

// Throws Error(kNonConvergence) if Re(b_k) vanishes (to 2^-(prec/2)) for all k <= kmax.
SignResult sign_at(const BiPoly& p, const BigComplex& alpha, const BigComplex& beta, int prec,
                   int kmax = 8);

// Direction in which |rho| crosses 1 at (alpha, beta), read off roots at
// alpha exp(-+ i h): the numerical counterpart of sign_at.
int crossing_direction(const BiPoly& p, const BigComplex& alpha, const BigComplex& beta,
                       const Real& h, int prec);

}  // namespace mahler
