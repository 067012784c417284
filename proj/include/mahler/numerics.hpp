#pragma once

// Univariate root finding and polylogarithms on the closed unit disk.

#include <gmpxx.h>

#include <span>
#include <vector>

#include "mahler/bivar.hpp"
#include "mahler/real.hpp"

namespace mahler {

struct RootSet {
  std::vector<BigComplex> roots;
  // |p(root)| for each root.
  std::vector<Real> residuals;
  // Radius of a disk around each root known to contain a true root
  // (deg * |p/p'| at the final iterate, with |p| widened by the Horner
  // rounding bound).
  std::vector<Real> radii;
  BigComplex leading;
};

// Evaluates p and p' at z; coefficients lowest degree first.
void horner(std::span<const BigComplex> coeffs, const BigComplex& z, BigComplex& p,
            BigComplex& dp);
BigComplex horner(std::span<const BigComplex> coeffs, const BigComplex& z);

// All complex roots of the polynomial with the given coefficients (lowest
// degree first). Zero coefficients at the top are rejected. Double-precision
// Aberth iteration seeds a multiprecision Aberth polish. Deterministic.
// Throws Error(kNonConvergence) if the polish stalls far from convergence.
RootSet polyroots(std::span<const BigComplex> coeffs, int prec);
RootSet polyroots(const UniPoly& p, int prec);

// Bernoulli number B_n (B_1 = -1/2).
mpq_class bernoulli(unsigned n);
// zeta(s) for integer s != 1: Euler-Maclaurin for s >= 2, Bernoulli numbers
// for s <= 0.
Real zeta(long s, int prec);

// Li_k(z) for k >= 2 and |z| <= 1 (a relative slack of 2^-(prec/2) is
// accepted). Throws Error(kInvalidArgument) otherwise.
BigComplex polylog_unit(int k, const BigComplex& z, int prec);
// Li_k(exp(i*phi)) for real phi, accurate also at phi = 0 and phi = pi.
BigComplex polylog_unit_angle(int k, const Real& phi, int prec);

// Reduces an angle to [0, 2*pi).
Real reduce_angle(const Real& phi);

}  // namespace mahler
