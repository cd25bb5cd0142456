#include "curvflow/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "curvflow/error.hpp"

namespace curvflow::spectra {

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw DimensionError("HermitianMatrix: matrix is not square");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (other.dim() != dim()) throw DimensionError("HermitianMatrix: dimension mismatch in sum");
  return HermitianMatrix(m_ + other.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(s * m_); }

HermitianMatrix HermitianMatrix::conjugated(const Eigen::MatrixXcd& w) const {
  if (w.rows() != dim() || w.cols() != dim())
    throw DimensionError("HermitianMatrix: conjugating unitary has wrong size");
  return HermitianMatrix(w * m_ * w.adjoint());
}

SpectralSummary eigenvalues_ascending(const HermitianMatrix& m) {
  if (m.dim() == 0) throw EmptyInputError("eigenvalues_ascending: empty matrix");
  // Eigen returns self-adjoint eigenvalues in increasing order already.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigenvalues_ascending: eigensolver failed");
  SpectralSummary out;
  out.eigenvalues = solver.eigenvalues();
  std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.lambda12 = m.dim() >= 2 ? out.eigenvalues[0] + out.eigenvalues[1]
                              : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double lambda12(const HermitianMatrix& m) {
  if (m.dim() < 2) throw DimensionError("lambda12 needs dimension >= 2");
  return eigenvalues_ascending(m).lambda12;
}

double lambda12_variational(const HermitianMatrix& m, int samples, std::uint64_t seed) {
  const int r = m.dim();
  if (r < 2) throw DimensionError("lambda12_variational needs dimension >= 2");
  if (samples < 1) throw DomainError("lambda12_variational needs at least one sample");

  const Eigen::MatrixXcd& a = m.matrix();
  auto pair_value = [&](const Eigen::VectorXcd& v1, const Eigen::VectorXcd& v2) {
    return v1.dot(a * v1).real() + v2.dot(a * v2).real();
  };

  double best = a(0, 0).real() + a(1, 1).real();
  std::mt19937_64 rng(seed);
  for (int s = 1; s < samples; ++s) {
    // The first two columns of a Haar unitary form a uniform orthonormal pair.
    const Eigen::MatrixXcd w = random_unitary(r, rng);
    best = std::min(best, pair_value(w.col(0), w.col(1)));
  }
  return best;
}

std::string to_string(PositivityKind kind) {
  switch (kind) {
    case PositivityKind::kNone: return "NONE";
    case PositivityKind::kTwoNonnegative: return "TWO_NONNEGATIVE";
    case PositivityKind::kTwoQuasiPositive: return "TWO_QUASI_POSITIVE";
    case PositivityKind::kTwoPositive: return "TWO_POSITIVE";
    case PositivityKind::kEpsilonTwoPositive: return "EPSILON_TWO_POSITIVE";
  }
  return "NONE";
}

PositivityClass classify_lambda12(std::span<const double> values, double epsilon) {
  if (values.empty()) throw EmptyInputError("classify_field: empty field");
  if (!(epsilon >= 0.0)) throw DomainError("classify_field: epsilon must be nonnegative");

  const double lo = *std::min_element(values.begin(), values.end());
  const bool strict_somewhere =
      std::any_of(values.begin(), values.end(), [](double v) { return v > kZeroTolerance; });

  PositivityClass out;
  out.margin = lo;
  if (epsilon > 0.0 && lo >= epsilon) {
    out.kind = PositivityKind::kEpsilonTwoPositive;
    out.epsilon = epsilon;
  } else if (lo > kZeroTolerance) {
    out.kind = PositivityKind::kTwoPositive;
  } else if (lo >= -kZeroTolerance && strict_somewhere) {
    out.kind = PositivityKind::kTwoQuasiPositive;
  } else if (lo >= -kZeroTolerance) {
    out.kind = PositivityKind::kTwoNonnegative;
  } else {
    out.kind = PositivityKind::kNone;
  }
  return out;
}

PositivityClass classify_field(std::span<const HermitianMatrix> field, double epsilon) {
  if (field.empty()) throw EmptyInputError("classify_field: empty field");
  const int r = field.front().dim();
  if (r < 2) throw DimensionError("classify_field needs dimension >= 2");
  std::vector<double> values;
  values.reserve(field.size());
  for (const auto& m : field) {
    if (m.dim() != r) throw DimensionError("classify_field: mixed dimensions");
    values.push_back(lambda12(m));
  }
  return classify_lambda12(values, epsilon);
}

}  // namespace curvflow::spectra
