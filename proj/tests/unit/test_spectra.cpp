#include <random>

#include "curvflow/error.hpp"
#include "curvflow/spectra.hpp"
#include "doctest.h"
#include "oracles/oracles.hpp"

using namespace curvflow;
using spectra::Complex;
using spectra::HermitianMatrix;

namespace {

HermitianMatrix diag(std::initializer_list<double> v) {
  const std::vector<double> values(v);
  return HermitianMatrix::diagonal(values);
}

}  // namespace

TEST_CASE("construction symmetrizes the input") {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, Complex(2.0, 1.0), Complex(0.0, 0.0), Complex(3.0, 0.5);
  const HermitianMatrix h(m);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  CHECK(h(1, 1).imag() == 0.0);
  CHECK(h(0, 1) == Complex(1.0, 0.5));
}

TEST_CASE("eigenvalues of diagonal and identity matrices") {
  auto s = spectra::eigenvalues_ascending(diag({3.0, -1.0}));
  CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(3.0));
  CHECK(s.lambda12 == doctest::Approx(2.0));

  s = spectra::eigenvalues_ascending(HermitianMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(1.0));
  CHECK(s.lambda12 == doctest::Approx(2.0));
}

TEST_CASE("rank one has no lambda12 and rank zero is rejected") {
  const auto s = spectra::eigenvalues_ascending(diag({5.0}));
  CHECK(std::isnan(s.lambda12));
  CHECK_THROWS_AS(spectra::eigenvalues_ascending(HermitianMatrix(Eigen::MatrixXcd(0, 0))), EmptyInputError);
  CHECK_THROWS_AS(spectra::lambda12(diag({1.0})), DimensionError);
}

TEST_CASE("eigenvalues agree with the inertia-bisection oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd m = oracle::random_hermitian(4, rng);
    const auto got = spectra::eigenvalues_ascending(HermitianMatrix(m)).eigenvalues;
    const auto want = oracle::bisection_eigenvalues(m);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
  }
}

TEST_CASE("variational lambda12") {
  CHECK(spectra::lambda12_variational(diag({0.0, 0.0, 5.0}), 1, 3) == doctest::Approx(0.0));
  CHECK(spectra::lambda12_variational(diag({-1.0, 3.0}), 1, 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(spectra::lambda12_variational(diag({1.0}), 10, 0), DimensionError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianMatrix m(oracle::random_hermitian(3, rng));
    const double exact = spectra::lambda12(m);
    const double var = spectra::lambda12_variational(m, 10000, 100 + trial);
    CHECK(var >= exact - 1e-12);
    CHECK(var - exact < 5e-2);
  }
}

TEST_CASE("variational gap shrinks with more samples") {
  std::mt19937_64 rng(9);
  const HermitianMatrix m(oracle::random_hermitian(4, rng));
  const double exact = spectra::lambda12(m);
  const double coarse = spectra::lambda12_variational(m, 10, 1);
  const double fine = spectra::lambda12_variational(m, 20000, 1);
  CHECK(fine <= coarse);
  CHECK(fine - exact < coarse - exact + 1e-15);
}

TEST_CASE("classification examples") {
  const std::vector<HermitianMatrix> a{diag({-1.0, 3.0, 5.0})};
  auto c = spectra::classify_field(a, 0.0);
  CHECK(c.kind == spectra::PositivityKind::kTwoPositive);
  CHECK(c.margin == doctest::Approx(2.0));

  const std::vector<HermitianMatrix> b{diag({0.0, 0.0}), diag({1.0, 1.0})};
  CHECK(spectra::classify_field(b, 0.0).kind == spectra::PositivityKind::kTwoQuasiPositive);

  const std::vector<HermitianMatrix> d{diag({1.0, 1.0}), diag({2.0, 3.0})};
  c = spectra::classify_field(d, 2.0);
  CHECK(c.kind == spectra::PositivityKind::kEpsilonTwoPositive);
  CHECK(c.epsilon == doctest::Approx(2.0));

  const std::vector<HermitianMatrix> z{diag({0.0, 0.0}), diag({0.0, 0.0})};
  CHECK(spectra::classify_field(z, 0.0).kind == spectra::PositivityKind::kTwoNonnegative);
  const std::vector<HermitianMatrix> neg{diag({-1.0, 0.5})};
  CHECK(spectra::classify_field(neg, 0.0).kind == spectra::PositivityKind::kNone);

  CHECK_THROWS_AS(spectra::classify_field({}, 0.0), EmptyInputError);
}

TEST_CASE("classification respects the zero tolerance") {
  const std::vector<double> tiny{-1e-13, 1e-13};
  CHECK(spectra::classify_lambda12(tiny, 0.0).kind == spectra::PositivityKind::kTwoNonnegative);
  const std::vector<double> quasi{-1e-13, 0.5};
  CHECK(spectra::classify_lambda12(quasi, 0.0).kind == spectra::PositivityKind::kTwoQuasiPositive);
}

TEST_CASE("class inclusions hold on random fields") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> shift(-1.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<HermitianMatrix> field;
    const double s = shift(rng);
    for (int k = 0; k < 4; ++k)
      field.emplace_back(oracle::random_hermitian(3, rng, 0.3) + s * Eigen::MatrixXcd::Identity(3, 3));
    const double eps = 0.5;
    const auto c = spectra::classify_field(field, eps);
    if (c.kind == spectra::PositivityKind::kEpsilonTwoPositive) CHECK(c.is_two_positive());
    if (c.is_two_positive()) CHECK(c.is_two_nonnegative());
    if (c.kind == spectra::PositivityKind::kTwoQuasiPositive) CHECK(c.is_two_nonnegative());
  }
}

TEST_CASE("Ky Fan superadditivity, set convexity and unitary invariance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int r = 2 + trial % 5;
    const Eigen::MatrixXcd a = oracle::random_hermitian(r, rng);
    const Eigen::MatrixXcd b = oracle::random_hermitian(r, rng);
    const double la = spectra::lambda12(HermitianMatrix(a));
    const double lb = spectra::lambda12(HermitianMatrix(b));
    CHECK(spectra::lambda12(HermitianMatrix(Eigen::MatrixXcd(a + b))) >= la + lb - 1e-10);

    // Shift both into C_eps with eps = 0.7 and test a convex combination.
    const double eps = 0.7;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
    const Eigen::MatrixXcd as = a + 0.5 * (eps - la) * id;
    const Eigen::MatrixXcd bs = b + 0.5 * (eps - lb) * id;
    const double t = unit(rng);
    CHECK(spectra::lambda12(HermitianMatrix(Eigen::MatrixXcd(t * as + (1.0 - t) * bs))) >= eps - 1e-10);

    const Eigen::MatrixXcd w = spectra::random_unitary(r, rng);
    CHECK(std::abs(spectra::lambda12(HermitianMatrix(a).conjugated(w)) - la) < 1e-10);
  }
}

TEST_CASE("random unitaries are unitary") {
  std::mt19937_64 rng(2);
  for (int r = 1; r <= 8; ++r) {
    const Eigen::MatrixXcd w = spectra::random_unitary(r, rng);
    CHECK((w.adjoint() * w - Eigen::MatrixXcd::Identity(r, r)).norm() < 1e-12);
  }
}
