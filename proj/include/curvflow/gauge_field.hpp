#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curvflow/sphere_mesh.hpp"

namespace curvflow::ym {

using Complex = std::complex<double>;

/// Rank-r unitary lattice connection: one r x r unitary per mesh edge,
/// transporting from the edge's tail to its head. Traversing an edge against
/// its orientation uses the inverse (adjoint) link.
class GaugeField {
 public:
  static constexpr int kMaxRank = 8;

  /// Flat field: every link is the identity.
  GaugeField(std::shared_ptr<const mesh::SphereMesh> mesh, int rank);

  const mesh::SphereMesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const mesh::SphereMesh>& mesh_ptr() const noexcept { return mesh_; }
  int rank() const noexcept { return rank_; }
  std::size_t num_links() const noexcept { return mesh_->num_edges(); }

  Eigen::MatrixXcd link(std::size_t e) const;
  /// Throws DomainError unless u is r x r and unitary within 1e-10.
  void set_link(std::size_t e, const Eigen::MatrixXcd& u);

  /// Link traversed starting from `from_vertex`: U_e from the tail, U_e^H
  /// from the head.
  Eigen::MatrixXcd transport(std::size_t e, int from_vertex) const;

  /// Column-major r x r blocks, one per edge.
  std::span<const Complex> raw() const noexcept { return links_; }
  std::span<Complex> raw_mutable() noexcept { return links_; }

  /// max_e ||U_e^H U_e - I||_F.
  double max_unitarity_defect() const;

 private:
  std::shared_ptr<const mesh::SphereMesh> mesh_;
  int rank_;
  std::vector<Complex> links_;
};

/// Diagonal field from per-component edge angles: U_e = diag(e^{i theta^j_e}).
GaugeField abelian_field(std::shared_ptr<const mesh::SphereMesh> mesh,
                         const std::vector<std::vector<double>>& angles_per_component);

/// Direct sum of constant-curvature line bundles O(a_1) + ... + O(a_r):
/// component j carries flux area_f * a_j / 2 through every face.
GaugeField monopole_field(std::shared_ptr<const mesh::SphereMesh> mesh, std::span<const int> degrees);

/// Like monopole_field, but component j's flux 2 pi a_j is spread uniformly
/// over the northern hemisphere (face centers with z > 0) and is exactly zero
/// in the south. Degrees (0, 1) give a 2-quasi-positive rank-2 field.
GaugeField hemisphere_field(std::shared_ptr<const mesh::SphereMesh> mesh, std::span<const int> degrees);

/// link_e <- W_head link_e W_tail^H for the given vertex unitaries.
GaugeField gauge_transform(const GaugeField& field, const std::vector<Eigen::MatrixXcd>& vertex_unitaries);

/// Gauge transform by Haar-random vertex unitaries drawn from `seed`.
GaugeField gauge_scramble(const GaugeField& field, std::uint64_t seed);

/// link_e <- exp(i eps X_e) link_e with X_e Hermitian: real diagonal N(0, 1),
/// off-diagonal entries (N(0, 1) + i N(0, 1)) / sqrt 2, all scaled by 1/sqrt r.
GaugeField perturb(const GaugeField& field, double eps, std::uint64_t seed);

/// Left-multiplicative update link_e <- exp(s xi_e) link_e for anti-Hermitian
/// directions xi (one r x r block per edge, column-major).
GaugeField apply_left(const GaugeField& field, std::span<const Complex> xi, double s);

}  // namespace curvflow::ym
