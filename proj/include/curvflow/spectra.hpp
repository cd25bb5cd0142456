#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace curvflow::spectra {

using Complex = std::complex<double>;

/// An r x r Hermitian operator. The constructor symmetrizes its input as
/// (m + m*) / 2, so values stay exactly Hermitian after accumulated updates.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Eigen::MatrixXcd& m);

  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix identity(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Complex operator()(int j, int k) const { return m_(j, k); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;

  /// Unitary conjugation W m W*.
  HermitianMatrix conjugated(const Eigen::MatrixXcd& w) const;

 private:
  Eigen::MatrixXcd m_;
};

struct SpectralSummary {
  Eigen::VectorXd eigenvalues;  // ascending
  double lambda12 = 0.0;        // eigenvalues[0] + eigenvalues[1]; NaN when r == 1
};

/// All eigenvalues in ascending order; throws EmptyInputError for r == 0.
SpectralSummary eigenvalues_ascending(const HermitianMatrix& m);

/// Sum of the two smallest eigenvalues; throws DimensionError for r < 2.
double lambda12(const HermitianMatrix& m);

/// Minimum of <m v1, v1> + <m v2, v2> over `samples` orthonormal pairs. The
/// first pair is always (e_1, e_2); the rest are Haar-random 2-frames drawn
/// from `seed`. The result is an upper bound for lambda12(m).
double lambda12_variational(const HermitianMatrix& m, int samples, std::uint64_t seed);

enum class PositivityKind {
  kNone,
  kTwoNonnegative,
  kTwoQuasiPositive,
  kTwoPositive,
  kEpsilonTwoPositive,
};

struct PositivityClass {
  PositivityKind kind = PositivityKind::kNone;
  double epsilon = 0.0;  // only meaningful for kEpsilonTwoPositive
  double margin = 0.0;   // min over the field of lambda12

  // Class inclusions: eps-2-positive => 2-positive => 2-nonnegative, and
  // 2-quasi-positive => 2-nonnegative.
  bool is_two_nonnegative() const noexcept { return kind != PositivityKind::kNone; }
  bool is_two_positive() const noexcept {
    return kind == PositivityKind::kTwoPositive || kind == PositivityKind::kEpsilonTwoPositive;
  }
};

std::string to_string(PositivityKind kind);

/// Values with |lambda12| below this are treated as zero when testing for
/// strict positivity at some point.
inline constexpr double kZeroTolerance = 1e-12;

/// Strongest positivity class satisfied by a field of Hermitian matrices.
/// `epsilon` > 0 requests the epsilon-2-positive test.
PositivityClass classify_field(std::span<const HermitianMatrix> field, double epsilon);

/// Same as classify_field but from precomputed lambda12 values.
PositivityClass classify_lambda12(std::span<const double> lambda12_values, double epsilon);

/// Haar-distributed r x r unitary.
template <class Rng>
Eigen::MatrixXcd random_unitary(int r, Rng& rng);

}  // namespace curvflow::spectra

#include "curvflow/detail/random_unitary.ipp"
