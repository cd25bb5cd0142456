#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace curvflow::mesh {

using Vec3 = Eigen::Vector3d;

/// Edge e = (tail, head) with tail < head.
struct Edge {
  int tail = 0;
  int head = 0;
};

/// Signed reference to an edge inside a face boundary: +1 when the boundary
/// traverses the edge tail -> head, -1 otherwise.
struct SignedEdge {
  int edge = 0;
  int sign = 1;
};

/// The two faces incident to an edge, with the edge's position inside each
/// face boundary. `left` traverses the edge tail -> head.
struct EdgeFaces {
  int left_face = -1, left_slot = -1;
  int right_face = -1, right_slot = -1;
};

/// Geodesic triangulation of the unit sphere. Faces are counterclockwise seen
/// from outside and each face's vertex list starts at its least vertex index.
class SphereMesh {
 public:
  static constexpr int kMaxLevel = 7;

  int level() const noexcept { return level_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_faces() const noexcept { return faces_.size(); }

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::array<int, 3>>& faces() const noexcept { return faces_; }
  const std::vector<std::array<SignedEdge, 3>>& face_boundaries() const noexcept { return boundaries_; }
  const std::vector<double>& face_areas() const noexcept { return areas_; }
  const std::vector<EdgeFaces>& edge_faces() const noexcept { return edge_faces_; }

  /// Unit vector through the normalized centroid of a face.
  Vec3 face_center(std::size_t f) const;
  /// Geodesic length of edge e.
  double edge_length(std::size_t e) const;
  /// Geodesic distance between the circumcenters of the two faces sharing e.
  double dual_edge_length(std::size_t e) const;
  /// Ratio dual_edge_length / edge_length: the diagonal Hodge star on 1-forms.
  const std::vector<double>& hodge_weights() const noexcept { return hodge_; }
  /// Mesh size h: the longest geodesic edge.
  double mesh_size() const noexcept { return h_; }

  int euler_characteristic() const noexcept {
    return static_cast<int>(num_vertices()) - static_cast<int>(num_edges()) + static_cast<int>(num_faces());
  }

  /// Builds a mesh from vertices and oriented faces; edges, areas, and all
  /// incidence data are derived.
  static SphereMesh from_faces(int level, std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

 private:
  int level_ = 0;
  std::vector<Vec3> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<SignedEdge, 3>> boundaries_;
  std::vector<double> areas_;
  std::vector<EdgeFaces> edge_faces_;
  std::vector<Vec3> circumcenters_;
  std::vector<double> hodge_;
  double h_ = 0.0;
};

/// Icosahedron subdivided `level` times (4-to-1), vertices projected to the
/// sphere. Throws SizeGuardError above kMaxLevel.
SphereMesh build_icosphere(int level);

/// Signed spherical excess of the triangle (a, b, c): positive when the
/// triangle is counterclockwise seen from outside. Throws GeometryError for
/// degenerate triples.
double spherical_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Face-by-edge incidence matrix applied to edge values: out[f] = sum of
/// sign * theta[e] over the boundary of f.
std::vector<double> boundary_sums(const SphereMesh& mesh, std::span<const double> edge_values);

/// Edge angles theta whose face boundary sums reproduce `target_flux` modulo
/// 2 pi. The total must be 2 pi d for an integer d (within 1e-9); the 2 pi d
/// Dirac-string term is placed on one face so the remaining right-hand side
/// is balanced, then B B^T psi = rhs is solved on the dual graph and
/// theta = B^T psi. If `support` is given, only faces with support[f] true
/// take part and edges touching an unsupported face stay exactly zero; the
/// flux outside the support must then be zero.
std::vector<double> dual_poisson_solve(const SphereMesh& mesh, std::span<const double> target_flux,
                                       std::span<const char> support = {});

/// Integer d with sum(target_flux) = 2 pi d, or FluxQuantizationError.
int flux_quantum(std::span<const double> target_flux);

/// Dense dual-graph Laplacian B B^T (faces x faces). For small meshes only.
Eigen::MatrixXd dual_laplacian_dense(const SphereMesh& mesh);

/// JSON persistence {level, vertices, faces}.
std::string to_json(const SphereMesh& mesh);
SphereMesh from_json(const std::string& text);
void save(const SphereMesh& mesh, const std::filesystem::path& path);
SphereMesh load(const std::filesystem::path& path);

}  // namespace curvflow::mesh
