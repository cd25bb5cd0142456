#pragma once

#include <random>

namespace curvflow::spectra {

// QR of a complex Ginibre matrix with the phases of R's diagonal pushed back
// into Q gives the Haar measure (Mezzadri's recipe).
template <class Rng>
Eigen::MatrixXcd random_unitary(int r, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd z(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  for (int j = 0; j < r; ++j) {
    const Complex d = packed(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

}  // namespace curvflow::spectra
