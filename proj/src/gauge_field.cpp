#include "curvflow/gauge_field.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "curvflow/detail/small_unitary.hpp"
#include "curvflow/error.hpp"
#include "curvflow/spectra.hpp"
#include "rank_dispatch.hpp"

namespace curvflow::ym {

namespace {

std::size_t block(int r) { return static_cast<std::size_t>(r) * static_cast<std::size_t>(r); }

Eigen::MatrixXcd exp_i_hermitian(const Eigen::MatrixXcd& x, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x);
  const Eigen::VectorXcd phases =
      (Complex(0.0, eps) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

GaugeField::GaugeField(std::shared_ptr<const mesh::SphereMesh> mesh, int rank) : mesh_(std::move(mesh)), rank_(rank) {
  if (!mesh_) throw DomainError("gauge field needs a mesh");
  if (rank < 1 || rank > kMaxRank) throw DimensionError("rank must be in [1, 8]");
  links_.assign(mesh_->num_edges() * block(rank), Complex(0.0));
  for (std::size_t e = 0; e < mesh_->num_edges(); ++e)
    for (int j = 0; j < rank; ++j) links_[e * block(rank) + j * (rank + 1)] = 1.0;
}

Eigen::MatrixXcd GaugeField::link(std::size_t e) const {
  if (e >= num_links()) throw DomainError("edge index out of range");
  return Eigen::Map<const Eigen::MatrixXcd>(links_.data() + e * block(rank_), rank_, rank_);
}

void GaugeField::set_link(std::size_t e, const Eigen::MatrixXcd& u) {
  if (e >= num_links()) throw DomainError("edge index out of range");
  if (u.rows() != rank_ || u.cols() != rank_) throw DimensionError("link has wrong size");
  if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(rank_, rank_)).norm() > 1e-10)
    throw DomainError("link is not unitary");
  Eigen::Map<Eigen::MatrixXcd>(links_.data() + e * block(rank_), rank_, rank_) = u;
}

Eigen::MatrixXcd GaugeField::transport(std::size_t e, int from_vertex) const {
  const auto& edge = mesh_->edges().at(e);
  if (from_vertex == edge.tail) return link(e);
  if (from_vertex == edge.head) return link(e).adjoint();
  throw DomainError("vertex is not an endpoint of the edge");
}

double GaugeField::max_unitarity_defect() const {
  double worst = 0.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rank_, rank_);
  for (std::size_t e = 0; e < num_links(); ++e) {
    const Eigen::MatrixXcd u = link(e);
    worst = std::max(worst, (u.adjoint() * u - id).norm());
  }
  return worst;
}

GaugeField abelian_field(std::shared_ptr<const mesh::SphereMesh> mesh,
                         const std::vector<std::vector<double>>& angles_per_component) {
  const int r = static_cast<int>(angles_per_component.size());
  GaugeField field(std::move(mesh), r);
  const std::size_t ne = field.num_links();
  auto links = field.raw_mutable();
  for (int j = 0; j < r; ++j) {
    if (angles_per_component[j].size() != ne) throw DimensionError("one angle per edge expected");
    for (std::size_t e = 0; e < ne; ++e)
      links[e * block(r) + j * (r + 1)] = std::polar(1.0, angles_per_component[j][e]);
  }
  return field;
}

GaugeField monopole_field(std::shared_ptr<const mesh::SphereMesh> mesh, std::span<const int> degrees) {
  if (degrees.empty()) throw DimensionError("monopole needs at least one degree");
  const auto& areas = mesh->face_areas();
  std::vector<std::vector<double>> angles;
  for (int d : degrees) {
    std::vector<double> flux(areas.size());
    for (std::size_t f = 0; f < areas.size(); ++f) flux[f] = 0.5 * d * areas[f];
    angles.push_back(mesh::dual_poisson_solve(*mesh, flux));
  }
  return abelian_field(std::move(mesh), angles);
}

GaugeField hemisphere_field(std::shared_ptr<const mesh::SphereMesh> mesh, std::span<const int> degrees) {
  if (degrees.empty()) throw DimensionError("field needs at least one degree");
  const std::size_t nf = mesh->num_faces();
  std::vector<char> north(nf);
  double cap_area = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    north[f] = mesh->face_center(f).z() > 0.0;
    if (north[f]) cap_area += mesh->face_areas()[f];
  }
  std::vector<std::vector<double>> angles;
  for (int d : degrees) {
    std::vector<double> flux(nf, 0.0);
    for (std::size_t f = 0; f < nf; ++f)
      if (north[f]) flux[f] = 2.0 * std::numbers::pi * d * mesh->face_areas()[f] / cap_area;
    angles.push_back(mesh::dual_poisson_solve(*mesh, flux, north));
  }
  return abelian_field(std::move(mesh), angles);
}

GaugeField gauge_transform(const GaugeField& field, const std::vector<Eigen::MatrixXcd>& w) {
  const auto& m = field.mesh();
  if (w.size() != m.num_vertices()) throw DimensionError("one unitary per vertex expected");
  GaugeField out = field;
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    const auto& edge = m.edges()[e];
    out.set_link(e, w[edge.head] * field.link(e) * w[edge.tail].adjoint());
  }
  return out;
}

GaugeField gauge_scramble(const GaugeField& field, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::MatrixXcd> w;
  w.reserve(field.mesh().num_vertices());
  for (std::size_t v = 0; v < field.mesh().num_vertices(); ++v) w.push_back(spectra::random_unitary(field.rank(), rng));
  return gauge_transform(field, w);
}

GaugeField perturb(const GaugeField& field, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0)) throw DomainError("perturbation size must be nonnegative");
  if (eps == 0.0) return field;
  const int r = field.rank();
  const double scale = 1.0 / std::sqrt(static_cast<double>(r));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  GaugeField out = field;
  for (std::size_t e = 0; e < field.num_links(); ++e) {
    Eigen::MatrixXcd x(r, r);
    for (int j = 0; j < r; ++j) {
      x(j, j) = normal(rng) * scale;
      for (int k = j + 1; k < r; ++k) {
        const double re = normal(rng), im = normal(rng);
        x(j, k) = Complex(re, im) * (scale / std::sqrt(2.0));
        x(k, j) = std::conj(x(j, k));
      }
    }
    Eigen::MatrixXcd u = exp_i_hermitian(x, eps) * field.link(e);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(u);  // polish to unitary
    Eigen::MatrixXcd q = qr.householderQ();
    for (int j = 0; j < r; ++j) {
      const Complex d = qr.matrixQR()(j, j);
      if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    out.set_link(e, q);
  }
  return out;
}

GaugeField apply_left(const GaugeField& field, std::span<const Complex> xi, double s) {
  const int r = field.rank();
  if (xi.size() != field.raw().size()) throw DimensionError("one direction block per edge expected");
  GaugeField out = field;
  dispatch_rank(r, [&]<int R>() {
    using detail::Mat;
    auto links = out.raw_mutable();
    for (std::size_t e = 0; e < field.num_links(); ++e) {
      const Mat<R> a = Eigen::Map<const Mat<R>>(xi.data() + e * R * R) * s;
      Mat<R> u = detail::exp_antihermitian<R>(detail::antihermitian_part<R>(a)) *
                 Eigen::Map<const Mat<R>>(field.raw().data() + e * R * R);
      detail::reunitarize<R>(u);
      Eigen::Map<Mat<R>>(links.data() + e * R * R) = u;
    }
  });
  return out;
}

}  // namespace curvflow::ym
