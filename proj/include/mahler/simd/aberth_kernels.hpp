#pragma once

// Double-precision inner loops of the Aberth seed stage. Each kernel has a
// scalar reference version and an AVX2 version; dispatch() picks one at
// runtime from the CPU features, overridable with MAHLER_SIMD=scalar.

#include <cstddef>

namespace mahler::simd {

enum class Isa { kScalar, kAvx2 };

// The ISA used by default in this process.
Isa active_isa();
bool avx2_available();
const char* isa_name(Isa isa);

// s_i = sum_{j != i} 1 / (z_i - z_j), split real/imaginary storage.
void aberth_sums(Isa isa, std::size_t n, const double* zr, const double* zi, double* sr, double* si);

// For each point x_k evaluates p(x_k) and p'(x_k) by Horner's rule, where p
// has `ncoef` coefficients c (lowest degree first).
void horner_batch(Isa isa, const double* cr, const double* ci, std::size_t ncoef, std::size_t m,
                  const double* xr, const double* xi, double* pr, double* pi, double* dr,
                  double* di);

namespace scalar {
void aberth_sums(std::size_t n, const double* zr, const double* zi, double* sr, double* si);
void horner_batch(const double* cr, const double* ci, std::size_t ncoef, std::size_t m,
                  const double* xr, const double* xi, double* pr, double* pi, double* dr,
                  double* di);
}  // namespace scalar

namespace avx2 {
void aberth_sums(std::size_t n, const double* zr, const double* zi, double* sr, double* si);
void horner_batch(const double* cr, const double* ci, std::size_t ncoef, std::size_t m,
                  const double* xr, const double* xi, double* pr, double* pi, double* dr,
                  double* di);
}  // namespace avx2

}  // namespace mahler::simd
