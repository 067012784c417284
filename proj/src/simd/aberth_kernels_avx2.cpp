#include <immintrin.h>

#include "mahler/simd/aberth_kernels.hpp"

namespace mahler::simd::avx2 {

#define MAHLER_AVX2 __attribute__((target("avx2,fma")))

MAHLER_AVX2 void aberth_sums(std::size_t n, const double* zr, const double* zi, double* sr,
                             double* si) {
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d xr = _mm256_set1_pd(zr[i]);
    const __m256d xi = _mm256_set1_pd(zi[i]);
    __m256d acc_r = _mm256_setzero_pd();
    __m256d acc_i = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d d_r = _mm256_sub_pd(xr, _mm256_loadu_pd(zr + j));
      const __m256d d_i = _mm256_sub_pd(xi, _mm256_loadu_pd(zi + j));
      const __m256d den = _mm256_fmadd_pd(d_r, d_r, _mm256_mul_pd(d_i, d_i));
      // The j == i lane has den == 0; mask it out.
      const __m256d live = _mm256_cmp_pd(den, _mm256_setzero_pd(), _CMP_NEQ_OQ);
      const __m256d inv = _mm256_and_pd(live, _mm256_div_pd(_mm256_set1_pd(1.0), den));
      acc_r = _mm256_fmadd_pd(d_r, inv, acc_r);
      acc_i = _mm256_fnmadd_pd(d_i, inv, acc_i);
    }
    alignas(32) double lr[4];
    alignas(32) double li[4];
    _mm256_store_pd(lr, acc_r);
    _mm256_store_pd(li, acc_i);
    double ar = (lr[0] + lr[1]) + (lr[2] + lr[3]);
    double ai = (li[0] + li[1]) + (li[2] + li[3]);
    for (; j < n; ++j) {
      if (j == i) continue;
      const double d_r = zr[i] - zr[j];
      const double d_i = zi[i] - zi[j];
      const double inv = 1.0 / (d_r * d_r + d_i * d_i);
      ar += d_r * inv;
      ai -= d_i * inv;
    }
    sr[i] = ar;
    si[i] = ai;
  }
}

MAHLER_AVX2 void horner_batch(const double* cr, const double* ci, std::size_t ncoef,
                              std::size_t m, const double* xr, const double* xi, double* pr,
                              double* pi, double* dr, double* di) {
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    const __m256d x_r = _mm256_loadu_pd(xr + k);
    const __m256d x_i = _mm256_loadu_pd(xi + k);
    __m256d p_r = _mm256_setzero_pd();
    __m256d p_i = _mm256_setzero_pd();
    __m256d d_r = _mm256_setzero_pd();
    __m256d d_i = _mm256_setzero_pd();
    for (std::size_t c = ncoef; c-- > 0;) {
      const __m256d nd_r = _mm256_add_pd(_mm256_fmsub_pd(d_r, x_r, _mm256_mul_pd(d_i, x_i)), p_r);
      const __m256d nd_i = _mm256_add_pd(_mm256_fmadd_pd(d_r, x_i, _mm256_mul_pd(d_i, x_r)), p_i);
      const __m256d np_r =
          _mm256_add_pd(_mm256_fmsub_pd(p_r, x_r, _mm256_mul_pd(p_i, x_i)), _mm256_set1_pd(cr[c]));
      const __m256d np_i =
          _mm256_add_pd(_mm256_fmadd_pd(p_r, x_i, _mm256_mul_pd(p_i, x_r)), _mm256_set1_pd(ci[c]));
      d_r = nd_r;
      d_i = nd_i;
      p_r = np_r;
      p_i = np_i;
    }
    _mm256_storeu_pd(pr + k, p_r);
    _mm256_storeu_pd(pi + k, p_i);
    _mm256_storeu_pd(dr + k, d_r);
    _mm256_storeu_pd(di + k, d_i);
  }
  if (k < m) {
    scalar::horner_batch(cr, ci, ncoef, m - k, xr + k, xi + k, pr + k, pi + k, dr + k, di + k);
  }
}

}  // namespace mahler::simd::avx2
