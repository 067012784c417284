#include "mahler/simd/aberth_kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mahler::simd {

namespace scalar {

void aberth_sums(std::size_t n, const double* zr, const double* zi, double* sr, double* si) {
  for (std::size_t i = 0; i < n; ++i) {
    double ar = 0.0;
    double ai = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dr = zr[i] - zr[j];
      const double di = zi[i] - zi[j];
      const double inv = 1.0 / (dr * dr + di * di);
      ar += dr * inv;
      ai -= di * inv;
    }
    sr[i] = ar;
    si[i] = ai;
  }
}

void horner_batch(const double* cr, const double* ci, std::size_t ncoef, std::size_t m,
                  const double* xr, const double* xi, double* pr, double* pi, double* dr,
                  double* di) {
  for (std::size_t k = 0; k < m; ++k) {
    double p_r = 0.0, p_i = 0.0, d_r = 0.0, d_i = 0.0;
    const double x_r = xr[k];
    const double x_i = xi[k];
    for (std::size_t c = ncoef; c-- > 0;) {
      // d = d*x + p;  p = p*x + c
      const double nd_r = d_r * x_r - d_i * x_i + p_r;
      const double nd_i = d_r * x_i + d_i * x_r + p_i;
      const double np_r = p_r * x_r - p_i * x_i + cr[c];
      const double np_i = p_r * x_i + p_i * x_r + ci[c];
      d_r = nd_r;
      d_i = nd_i;
      p_r = np_r;
      p_i = np_i;
    }
    pr[k] = p_r;
    pi[k] = p_i;
    dr[k] = d_r;
    di[k] = d_i;
  }
}

}  // namespace scalar

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("MAHLER_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::kScalar;
    return avx2_available() ? Isa::kAvx2 : Isa::kScalar;
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void aberth_sums(Isa isa, std::size_t n, const double* zr, const double* zi, double* sr,
                 double* si) {
  if (isa == Isa::kAvx2 && avx2_available()) {
    avx2::aberth_sums(n, zr, zi, sr, si);
  } else {
    scalar::aberth_sums(n, zr, zi, sr, si);
  }
}

void horner_batch(Isa isa, const double* cr, const double* ci, std::size_t ncoef, std::size_t m,
                  const double* xr, const double* xi, double* pr, double* pi, double* dr,
                  double* di) {
  if (isa == Isa::kAvx2 && avx2_available()) {
    avx2::horner_batch(cr, ci, ncoef, m, xr, xi, pr, pi, dr, di);
  } else {
    scalar::horner_batch(cr, ci, ncoef, m, xr, xi, pr, pi, dr, di);
  }
}

}  // namespace mahler::simd
