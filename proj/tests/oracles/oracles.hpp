#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library routine they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

/// Number of eigenvalues of Hermitian h below x, by Sylvester inertia of the
/// LDL^H factorization of h - x I (no pivoting; a tiny shift dodges zero pivots).
inline int count_below(const Eigen::MatrixXcd& h, double x) {
  const Eigen::Index r = h.rows();
  Eigen::MatrixXcd a = h - x * Eigen::MatrixXcd::Identity(r, r);
  int negatives = 0;
  for (Eigen::Index k = 0; k < r; ++k) {
    double d = a(k, k).real();
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++negatives;
    for (Eigen::Index i = k + 1; i < r; ++i) {
      const Complex l = a(i, k) / d;
      for (Eigen::Index j = k + 1; j < r; ++j) a(i, j) -= l * std::conj(a(j, k));
    }
  }
  return negatives;
}

/// Eigenvalues ascending by bisection on the inertia count.
inline std::vector<double> bisection_eigenvalues(const Eigen::MatrixXcd& h) {
  const Eigen::Index r = h.rows();
  double bound = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < r; ++j) row += std::abs(h(i, j));
    bound = std::max(bound, row);
  }
  std::vector<double> out;
  for (int k = 0; k < r; ++k) {
    double lo = -bound - 1.0, hi = bound + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + bound); ++it) {
      const double mid = 0.5 * (lo + hi);
      (count_below(h, mid) > k ? hi : lo) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

inline Eigen::MatrixXcd random_hermitian(int r, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) {
      const double re = normal(rng), im = normal(rng);
      m(i, j) = Complex(re, im) * scale;
    }
  return 0.5 * (m + m.adjoint());
}

inline Eigen::VectorXcd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng), im = normal(rng);
    a[i] = Complex(re, im);
  }
  return a / a.norm();
}

/// Bisectional curvature by the explicit double sum.
inline double bisectional_sum(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double s = 4.0 * a.squaredNorm() * b.squaredNorm();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j)
      s -= 16.0 * (std::conj(a[i]) * a[j]).imag() * (b[i] * std::conj(b[j])).imag();
  return s;
}

/// Area of the planar triangle with the given corners.
inline double flat_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

/// Unitary matrix exponential exp(i eps x) by a truncated Taylor series
/// (scaling and squaring), independent of any eigensolver.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
  int squarings = 0;
  double norm = a.norm();
  while (norm > 0.1) {
    norm /= 2.0;
    ++squarings;
  }
  const Eigen::MatrixXcd b = a / std::pow(2.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Principal log of a unitary through Eigen's complex Schur form.
inline Eigen::MatrixXcd logm_schur(const Eigen::MatrixXcd& u) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  Eigen::MatrixXcd t = schur.matrixT();
  // For a normal matrix T is diagonal up to rounding.
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) d(i, i) = Complex(0.0, std::arg(t(i, i)));
  return schur.matrixU() * d * schur.matrixU().adjoint();
}

}  // namespace oracle
