#include <numbers>
#include <random>

#include "curvflow/error.hpp"
#include "curvflow/ym_lattice.hpp"
#include "doctest.h"
#include "oracles/oracles.hpp"

using namespace curvflow;
using namespace curvflow::ym;

namespace {

std::shared_ptr<const mesh::SphereMesh> mesh_at(int level) {
  return std::make_shared<const mesh::SphereMesh>(mesh::build_icosphere(level));
}

Eigen::MatrixXcd random_antihermitian(int r, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd a(r, r);
  for (int i = 0; i < r * r; ++i) a(i % r, i / r) = Complex(normal(rng), normal(rng));
  return 0.5 * (a - a.adjoint());
}

std::vector<Complex> random_direction(const GaugeField& f, std::mt19937_64& rng) {
  const int r = f.rank();
  std::vector<Complex> xi(f.raw().size());
  for (std::size_t e = 0; e < f.num_links(); ++e)
    Eigen::Map<Eigen::MatrixXcd>(xi.data() + e * r * r, r, r) = random_antihermitian(r, rng);
  return xi;
}

}  // namespace

TEST_CASE("flat field has identity holonomy and zero energy") {
  const auto m = mesh_at(1);
  const GaugeField f(m, 2);
  for (std::size_t face = 0; face < m->num_faces(); ++face)
    CHECK((holonomy(f, face) - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);
  CHECK(ym_energy(f) == 0.0);
  CHECK(gradient_norm(f, ym_gradient(f)) == 0.0);
}

TEST_CASE("holonomy follows the boundary orientation") {
  const auto m = mesh_at(0);
  GaugeField f(m, 2);
  std::mt19937_64 rng(1);
  for (std::size_t e = 0; e < f.num_links(); ++e) f.set_link(e, spectra::random_unitary(2, rng));
  const auto& b = m->face_boundaries()[3];
  const auto& tri = m->faces()[3];
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(2, 2);
  for (int k = 0; k < 3; ++k) {
    // Slot k runs from vertex k to vertex k + 1.
    CHECK(b[k].sign == (tri[k] < tri[(k + 1) % 3] ? 1 : -1));
    want = f.transport(b[k].edge, tri[k]) * want;
  }
  CHECK((holonomy(f, 3) - want).norm() < 1e-14);
}

TEST_CASE("monopole curvature and energy") {
  const auto m = mesh_at(3);
  SUBCASE("d = 2, rank 1") {
    const int deg[] = {2};
    const auto f = monopole_field(m, deg);
    const Eigen::MatrixXd ev = face_eigenvalues(f);
    CHECK((ev.array() - 1.0).abs().maxCoeff() < 1e-9);
    CHECK(ym_energy(f) == doctest::Approx(std::numbers::pi * 4.0).epsilon(0.03));
  }
  SUBCASE("(0, 2)") {
    const int deg[] = {0, 2};
    const auto f = gauge_scramble(monopole_field(m, deg), 3);
    const Eigen::MatrixXd ev = face_eigenvalues(f);
    CHECK(ev.col(0).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((ev.col(1).array() - 1.0).abs().maxCoeff() < 1e-9);
    const auto pc = curvature_field(f);
    CHECK(pc.curvature.size() == m->num_faces());
    CHECK(std::abs(spectra::lambda12(pc.curvature[0]) - 1.0) < 1e-9);
  }
}

TEST_CASE("gauge invariance") {
  const auto m = mesh_at(2);
  const int deg[] = {1, 2, -1};
  const auto f = perturb(monopole_field(m, deg), 0.2, 5);
  const auto g = gauge_scramble(f, 6);
  CHECK(std::abs(ym_energy(f) - ym_energy(g)) < 1e-10 * std::max(1.0, ym_energy(f)));
  CHECK((face_eigenvalues(f) - face_eigenvalues(g)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(gradient_norm(f, ym_gradient(f)) - gradient_norm(g, ym_gradient(g))) < 1e-8);
}

TEST_CASE("differential matches central finite differences") {
  const auto m = mesh_at(2);
  const int deg[] = {0, 2};
  const auto f = perturb(gauge_scramble(monopole_field(m, deg), 1), 0.3, 2);
  const LinkBlocks d = energy_differential(f);
  CHECK(d.size() == f.num_links());
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto xi = random_direction(f, rng);
    double analytic = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) analytic += (std::conj(d.data[i]) * xi[i]).real();
    const double s = 1e-5;
    const double fd = (ym_energy(apply_left(f, xi, s)) - ym_energy(apply_left(f, xi, -s))) / (2.0 * s);
    CHECK(std::abs(analytic - fd) <= 1e-6 * std::abs(fd));
  }
}

TEST_CASE("flow gradient is the Hodge-weighted differential") {
  const auto m = mesh_at(1);
  const int deg[] = {1, 1};
  const auto f = perturb(monopole_field(m, deg), 0.2, 9);
  const auto d = energy_differential(f), g = ym_gradient(f);
  const auto& w = m->hodge_weights();
  for (std::size_t e = 0; e < f.num_links(); ++e) {
    CHECK((g.block(e) * (2.0 * w[e]) - d.block(e)).norm() < 1e-12);
    CHECK((g.block(e) + g.block(e).adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("Frechet derivative of the log against finite differences of a Schur log") {
  std::mt19937_64 rng(4);
  for (int r = 1; r <= 4; ++r) {
    const Eigen::MatrixXcd h = oracle::random_hermitian(r, rng, 0.5);
    const Eigen::MatrixXcd u = oracle::expm_taylor(Complex(0.0, 1.0) * h);
    // Unitary path u(s) = exp(s x) u has tangent e = x u.
    const Eigen::MatrixXcd x = random_antihermitian(r, rng);
    const Eigen::MatrixXcd e = x * u;
    const double s = 1e-5;
    const Eigen::MatrixXcd fd =
        (oracle::logm_schur(oracle::expm_taylor(s * x) * u) - oracle::logm_schur(oracle::expm_taylor(-s * x) * u)) /
        (2.0 * s);
    CHECK((log_frechet(u, e) - fd).norm() < 1e-6 * (1.0 + fd.norm()));

    // Adjoint identity <L(E), G> = <E, L*(G)>.
    const Eigen::MatrixXcd g = oracle::random_hermitian(r, rng) + random_antihermitian(r, rng);
    const Complex lhs = (log_frechet(u, e).adjoint() * g).trace();
    const Complex rhs = (e.adjoint() * log_frechet_adjoint(u, g)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
  Eigen::MatrixXcd minus = -Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(log_frechet(minus, minus), CurvatureExtractionError);
}

TEST_CASE("branch-cut guard raises a structured error") {
  const auto m = mesh_at(0);
  std::vector<std::vector<double>> angles(1, std::vector<double>(m->num_edges(), 0.0));
  angles[0][0] = std::numbers::pi - 0.01;
  const auto f = abelian_field(m, angles);
  try {
    ym_energy(f);
    FAIL("expected a curvature extraction error");
  } catch (const CurvatureExtractionError& err) {
    const auto& ef = m->edge_faces()[0];
    CHECK((err.face() == static_cast<std::size_t>(ef.left_face) || err.face() == static_cast<std::size_t>(ef.right_face)));
    CHECK(std::abs(err.angle()) > std::numbers::pi - kBranchMargin);
  }
}
