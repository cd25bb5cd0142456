#include "curvflow/error.hpp"
#include "curvflow/kernels.hpp"

namespace curvflow::kernels::scalar {

void bisectional_batch(const PairBatchView& batch, std::span<double> out) {
  if (out.size() < batch.count) throw DimensionError("bisectional_batch: output too small");
  const int n = batch.n;
  const std::size_t stride = batch.count;
  for (std::size_t p = 0; p < batch.count; ++p) {
    double na = 0.0, nb = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ar = batch.a_re[i * stride + p], ai = batch.a_im[i * stride + p];
      const double br = batch.b_re[i * stride + p], bi = batch.b_im[i * stride + p];
      na += ar * ar + ai * ai;
      nb += br * br + bi * bi;
    }
    double cross = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ari = batch.a_re[i * stride + p], aii = batch.a_im[i * stride + p];
      const double bri = batch.b_re[i * stride + p], bii = batch.b_im[i * stride + p];
      for (int j = i + 1; j < n; ++j) {
        const double arj = batch.a_re[j * stride + p], aij = batch.a_im[j * stride + p];
        const double brj = batch.b_re[j * stride + p], bij = batch.b_im[j * stride + p];
        // Im(conj(a_i) a_j) and Im(b_i conj(b_j))
        const double ia = ari * aij - aii * arj;
        const double ib = bii * brj - bri * bij;
        cross += ia * ib;
      }
    }
    out[p] = 4.0 * na * nb - 16.0 * cross;
  }
}

double weighted_dot(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) throw DimensionError("weighted_dot: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * x[k];
  return s;
}

}  // namespace curvflow::kernels::scalar
