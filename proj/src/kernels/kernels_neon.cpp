// NEON variants for aarch64 (Advanced SIMD is mandatory there, so no runtime
// feature probe is needed beyond the architecture check).

#include <arm_neon.h>

#include "curvflow/error.hpp"
#include "curvflow/kernels.hpp"

namespace curvflow::kernels::neon {

void bisectional_batch(const PairBatchView& batch, std::span<double> out) {
  if (out.size() < batch.count) throw DimensionError("bisectional_batch: output too small");
  const int n = batch.n;
  const std::size_t stride = batch.count;
  const std::size_t simd_end = batch.count & ~std::size_t{1};

  for (std::size_t p = 0; p < simd_end; p += 2) {
    float64x2_t na = vdupq_n_f64(0.0);
    float64x2_t nb = vdupq_n_f64(0.0);
    for (int i = 0; i < n; ++i) {
      const float64x2_t ar = vld1q_f64(batch.a_re + i * stride + p);
      const float64x2_t ai = vld1q_f64(batch.a_im + i * stride + p);
      const float64x2_t br = vld1q_f64(batch.b_re + i * stride + p);
      const float64x2_t bi = vld1q_f64(batch.b_im + i * stride + p);
      na = vfmaq_f64(vfmaq_f64(na, ar, ar), ai, ai);
      nb = vfmaq_f64(vfmaq_f64(nb, br, br), bi, bi);
    }
    float64x2_t cross = vdupq_n_f64(0.0);
    for (int i = 0; i < n; ++i) {
      const float64x2_t ari = vld1q_f64(batch.a_re + i * stride + p);
      const float64x2_t aii = vld1q_f64(batch.a_im + i * stride + p);
      const float64x2_t bri = vld1q_f64(batch.b_re + i * stride + p);
      const float64x2_t bii = vld1q_f64(batch.b_im + i * stride + p);
      for (int j = i + 1; j < n; ++j) {
        const float64x2_t arj = vld1q_f64(batch.a_re + j * stride + p);
        const float64x2_t aij = vld1q_f64(batch.a_im + j * stride + p);
        const float64x2_t brj = vld1q_f64(batch.b_re + j * stride + p);
        const float64x2_t bij = vld1q_f64(batch.b_im + j * stride + p);
        const float64x2_t ia = vfmsq_f64(vmulq_f64(ari, aij), aii, arj);
        const float64x2_t ib = vfmsq_f64(vmulq_f64(bii, brj), bri, bij);
        cross = vfmaq_f64(cross, ia, ib);
      }
    }
    const float64x2_t res =
        vsubq_f64(vmulq_f64(vmulq_n_f64(na, 4.0), nb), vmulq_n_f64(cross, 16.0));
    vst1q_f64(out.data() + p, res);
  }

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

double weighted_dot(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) throw DimensionError("weighted_dot: length mismatch");
  const std::size_t n = w.size();
  const std::size_t simd_end = n & ~std::size_t{3};
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  for (std::size_t k = 0; k < simd_end; k += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(w.data() + k), vld1q_f64(x.data() + k));
    s1 = vfmaq_f64(s1, vld1q_f64(w.data() + k + 2), vld1q_f64(x.data() + k + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (std::size_t k = simd_end; k < n; ++k) s += w[k] * x[k];
  return s;
}

}  // namespace curvflow::kernels::neon
