#pragma once

// Curvature algebra of the complex hyperquadric Q^n = SO(n+2) / (SO(n) x SO(2)).
//
// Tangent vectors at the base point are 2 x n real matrices X, embedded in
// so(n+2) as [[0, -X^T], [X, 0]]. The metric is g(X, Y) = tr(X Y^T), which is
// -1/2 of the Killing form. Holomorphic vectors are parametrized by a in C^n
// through U = [a^T; -i a^T].

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvflow/spectra.hpp"

namespace curvflow::quadric {

using Complex = std::complex<double>;
using RealBlock = Eigen::Matrix<double, 2, Eigen::Dynamic>;
using ComplexBlock = Eigen::Matrix<Complex, 2, Eigen::Dynamic>;

class RealTangent {
 public:
  explicit RealTangent(RealBlock x);
  static RealTangent zero(int n);
  /// Elementary matrix E_{row,col} with 1-based indices as in the literature.
  static RealTangent elementary(int n, int row, int col);

  int n() const noexcept { return static_cast<int>(x_.cols()); }
  const RealBlock& matrix() const noexcept { return x_; }

  RealTangent operator+(const RealTangent& o) const;
  RealTangent operator-(const RealTangent& o) const;
  RealTangent operator*(double s) const;

 private:
  RealBlock x_;
};

class HoloTangent {
 public:
  explicit HoloTangent(Eigen::VectorXcd a);
  static HoloTangent basis(int n, int index);  // 0-based

  int n() const noexcept { return static_cast<int>(a_.size()); }
  const Eigen::VectorXcd& coords() const noexcept { return a_; }
  double norm_squared() const { return a_.squaredNorm(); }

  /// The 2 x n complex matrix [a^T; -i a^T].
  ComplexBlock embed() const;

 private:
  Eigen::VectorXcd a_;
};

/// Antisymmetric (n+2) x (n+2) matrix [[0, -X^T], [X, 0]] of the Cartan
/// complement p.
Eigen::MatrixXd so_block(const RealTangent& x);

double metric_g(const RealTangent& x, const RealTangent& y);
RealTangent complex_structure_J(const RealTangent& x);

/// R(X, Y) Z = Z Y^T X + X Y^T Z - Z X^T Y - Y X^T Z.
RealTangent curvature_endo(const RealTangent& x, const RealTangent& y, const RealTangent& z);

/// -[[X^, Y^], Z^] computed with (n+2) x (n+2) commutators; lower-left block.
RealTangent curvature_bracket_oracle(const RealTangent& x, const RealTangent& y,
                                     const RealTangent& z);

/// Full ambient matrix -[[X^, Y^], Z^] (used to check its p-block structure).
Eigen::MatrixXd curvature_bracket_ambient(const RealTangent& x, const RealTangent& y,
                                          const RealTangent& z);

/// Complex-bilinear extensions to complexified tangent vectors (2 x n complex).
ComplexBlock curvature_endo(const ComplexBlock& x, const ComplexBlock& y, const ComplexBlock& z);
ComplexBlock curvature_bracket_oracle(const ComplexBlock& x, const ComplexBlock& y,
                                      const ComplexBlock& z);
Complex metric_g(const ComplexBlock& x, const ComplexBlock& y);

/// 4 |a|^2 |b|^2 - 16 sum_{i<j} Im(conj(a_i) a_j) Im(b_i conj(b_j)).
double bisectional_closed(const HoloTangent& u, const HoloTangent& v);

/// tr(V U*^T U V*^T + U U*^T V V*^T - V U^T U* V*^T - U* U^T V V*^T), where
/// * is entrywise conjugation, on the embedded 2 x n matrices.
double bisectional_trace(const HoloTangent& u, const HoloTangent& v);

/// g(R(U, conj U) V, conj V) through the Lie-bracket oracle.
double bisectional_bracket(const HoloTangent& u, const HoloTangent& v);

/// Hermitian H(a) with <H(a) b, b> = bisectional_closed(a, b) for all b:
/// H = 4 |a|^2 I - 8 i C with C_jk = Im(conj(a_j) a_k).
spectra::HermitianMatrix curvature_operator(const HoloTangent& u);

/// Ricci contraction minus holomorphic sectional curvature in the
/// a-normalization: tr H(a) - bisectional_closed(a, a). Requires |a| = 1.
double orthogonal_ricci(const HoloTangent& u);

/// Image of U under the isotropy element (A, B) in SO(n) x SO(2), where B is
/// the rotation by `angle`: B U A corresponds to a -> e^{i angle} A^T a.
HoloTangent isotropy_action(const HoloTangent& u, const Eigen::MatrixXd& a_rot, double angle);

/// Equality-case direction (1, i, 0, ..., 0) / sqrt(2).
HoloTangent equality_case_vector(int n);

struct CertifyOptions {
  int restarts = 32;
  int iters = 400;
  std::uint64_t seed = 0;
  double fd_step = 1e-5;
};

struct CertifyResult {
  int n = 0;
  double min_lambda12 = 0.0;
  HoloTangent argmin{Eigen::VectorXcd::Zero(1)};
  Eigen::VectorXd spectrum;   // eigenvalues of H(argmin), ascending
  int converged_restarts = 0;
  int line_search_failures = 0;
  bool certified = false;     // min_lambda12 > 0
  std::vector<std::string> failures;
};

/// Minimizes lambda12(H(a)) over |a| = 1 with multi-restart projected descent.
/// Restart i is seeded with seed + i. Among near-minimizers the smallest
/// lambda_1 is pursued in a second stage, which exposes the equality case when
/// lambda12 is constant on the sphere (n = 2).
CertifyResult certify_two_positivity(int n, const CertifyOptions& options);

struct BisectionalMinimum {
  double value = 0.0;
  HoloTangent a{Eigen::VectorXcd::Zero(1)};
  HoloTangent b{Eigen::VectorXcd::Zero(1)};
};

/// Minimum of bisectional_closed over `samples` random unit pairs, evaluated
/// in batches through the SIMD kernels.
double bisectional_sweep_min(int n, int samples, std::uint64_t seed);

/// Minimum of bisectional_closed over unit pairs by `restarts` projected
/// descents (restart i seeded with seed + i).
BisectionalMinimum minimize_bisectional(int n, int restarts, int iters, std::uint64_t seed);

}  // namespace curvflow::quadric
