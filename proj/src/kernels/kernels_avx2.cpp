// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has checked CPU support.

#include <immintrin.h>

#include "curvflow/error.hpp"
#include "curvflow/kernels.hpp"

namespace curvflow::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

// Four pairs per register; the loop body mirrors the scalar kernel lane-wise.
void bisectional_batch(const PairBatchView& batch, std::span<double> out) {
  if (out.size() < batch.count) throw DimensionError("bisectional_batch: output too small");
  const int n = batch.n;
  const std::size_t stride = batch.count;
  const std::size_t simd_end = batch.count & ~std::size_t{3};
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d sixteen = _mm256_set1_pd(16.0);

  for (std::size_t p = 0; p < simd_end; p += 4) {
    __m256d na = _mm256_setzero_pd();
    __m256d nb = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
      const __m256d ar = _mm256_loadu_pd(batch.a_re + i * stride + p);
      const __m256d ai = _mm256_loadu_pd(batch.a_im + i * stride + p);
      const __m256d br = _mm256_loadu_pd(batch.b_re + i * stride + p);
      const __m256d bi = _mm256_loadu_pd(batch.b_im + i * stride + p);
      na = _mm256_fmadd_pd(ar, ar, na);
      na = _mm256_fmadd_pd(ai, ai, na);
      nb = _mm256_fmadd_pd(br, br, nb);
      nb = _mm256_fmadd_pd(bi, bi, nb);
    }
    __m256d cross = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
      const __m256d ari = _mm256_loadu_pd(batch.a_re + i * stride + p);
      const __m256d aii = _mm256_loadu_pd(batch.a_im + i * stride + p);
      const __m256d bri = _mm256_loadu_pd(batch.b_re + i * stride + p);
      const __m256d bii = _mm256_loadu_pd(batch.b_im + i * stride + p);
      for (int j = i + 1; j < n; ++j) {
        const __m256d arj = _mm256_loadu_pd(batch.a_re + j * stride + p);
        const __m256d aij = _mm256_loadu_pd(batch.a_im + j * stride + p);
        const __m256d brj = _mm256_loadu_pd(batch.b_re + j * stride + p);
        const __m256d bij = _mm256_loadu_pd(batch.b_im + j * stride + p);
        const __m256d ia = _mm256_fmsub_pd(ari, aij, _mm256_mul_pd(aii, arj));
        const __m256d ib = _mm256_fmsub_pd(bii, brj, _mm256_mul_pd(bri, bij));
        cross = _mm256_fmadd_pd(ia, ib, cross);
      }
    }
    const __m256d res = _mm256_fmsub_pd(_mm256_mul_pd(four, na), nb, _mm256_mul_pd(sixteen, cross));
    _mm256_storeu_pd(out.data() + p, res);
  }

  // Remainder pairs share the batch stride, so they are handled inline.
  {
    for (std::size_t p = simd_end; p < batch.count; ++p) {
      double na = 0.0, nb = 0.0, cross = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ar = batch.a_re[i * stride + p], ai = batch.a_im[i * stride + p];
        const double br = batch.b_re[i * stride + p], bi = batch.b_im[i * stride + p];
        na += ar * ar + ai * ai;
        nb += br * br + bi * bi;
        for (int j = i + 1; j < n; ++j) {
          const double arj = batch.a_re[j * stride + p], aij = batch.a_im[j * stride + p];
          const double brj = batch.b_re[j * stride + p], bij = batch.b_im[j * stride + p];
          cross += (ar * aij - ai * arj) * (bi * brj - br * bij);
        }
      }
      out[p] = 4.0 * na * nb - 16.0 * cross;
    }
  }
}

double weighted_dot(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) throw DimensionError("weighted_dot: length mismatch");
  const std::size_t n = w.size();
  const std::size_t simd_end = n & ~std::size_t{7};
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  for (std::size_t k = 0; k < simd_end; k += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + k), _mm256_loadu_pd(x.data() + k), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + k + 4), _mm256_loadu_pd(x.data() + k + 4), s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (std::size_t k = simd_end; k < n; ++k) s += w[k] * x[k];
  return s;
}

}  // namespace curvflow::kernels::avx2
