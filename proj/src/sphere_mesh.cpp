#include "curvflow/sphere_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "curvflow/error.hpp"
#include "json.hpp"

namespace curvflow::mesh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double geodesic(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

double spherical_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Spherical excess via tan(E/2) = det / (1 + a.b + b.c + c.a).
  const double det = a.dot(b.cross(c));
  const double scale = (b - a).norm() * (c - a).norm();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale || scale == 0.0)
    throw GeometryError("spherical_area: degenerate (collinear or antipodal) triangle");
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(det, den);
}

Vec3 SphereMesh::face_center(std::size_t f) const {
  const auto& t = faces_[f];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]).normalized();
}

double SphereMesh::edge_length(std::size_t e) const {
  return geodesic(vertices_[edges_[e].tail], vertices_[edges_[e].head]);
}

double SphereMesh::dual_edge_length(std::size_t e) const {
  const auto& ef = edge_faces_[e];
  return geodesic(circumcenters_[ef.left_face], circumcenters_[ef.right_face]);
}

SphereMesh SphereMesh::from_faces(int level, std::vector<Vec3> vertices,
                                  std::vector<std::array<int, 3>> faces) {
  SphereMesh m;
  m.level_ = level;
  m.vertices_ = std::move(vertices);
  const int nv = static_cast<int>(m.vertices_.size());
  for (auto& v : m.vertices_) {
    if (std::abs(v.norm() - 1.0) > 1e-9) throw GeometryError("mesh vertex is not on the unit sphere");
    v.normalize();
  }

  m.faces_.reserve(faces.size());
  for (auto t : faces) {
    for (int v : t)
      if (v < 0 || v >= nv) throw GeometryError("face references a missing vertex");
    // Cyclic rotation keeps the orientation.
    const auto it = std::min_element(t.begin(), t.end());
    std::rotate(t.begin(), it, t.end());
    m.faces_.push_back(t);
  }

  std::map<std::uint64_t, int> index;
  m.boundaries_.resize(m.faces_.size());
  m.areas_.resize(m.faces_.size());
  m.circumcenters_.resize(m.faces_.size());
  for (std::size_t f = 0; f < m.faces_.size(); ++f) {
    const auto& t = m.faces_[f];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      const auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(m.edges_.size()));
      if (inserted) m.edges_.push_back({std::min(a, b), std::max(a, b)});
      m.boundaries_[f][k] = {it->second, a < b ? 1 : -1};
    }
    const Vec3& a = m.vertices_[t[0]];
    const Vec3& b = m.vertices_[t[1]];
    const Vec3& c = m.vertices_[t[2]];
    const double area = spherical_area(a, b, c);
    if (area <= 0.0) throw GeometryError("face " + std::to_string(f) + " is not outward oriented");
    m.areas_[f] = area;
    m.circumcenters_[f] = (b - a).cross(c - a).normalized();
  }

  m.edge_faces_.assign(m.edges_.size(), EdgeFaces{});
  for (std::size_t f = 0; f < m.faces_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const auto [e, sign] = m.boundaries_[f][k];
      auto& ef = m.edge_faces_[e];
      int& face = sign > 0 ? ef.left_face : ef.right_face;
      int& slot = sign > 0 ? ef.left_slot : ef.right_slot;
      if (face != -1) throw GeometryError("edge traversed twice in the same direction");
      face = static_cast<int>(f);
      slot = k;
    }
  }
  for (const auto& ef : m.edge_faces_)
    if (ef.left_face < 0 || ef.right_face < 0) throw GeometryError("mesh is not a closed surface");

  m.hodge_.resize(m.edges_.size());
  m.h_ = 0.0;
  for (std::size_t e = 0; e < m.edges_.size(); ++e) {
    const double len = m.edge_length(e);
    m.hodge_[e] = m.dual_edge_length(e) / len;
    m.h_ = std::max(m.h_, len);
  }
  return m;
}

SphereMesh build_icosphere(int level) {
  if (level < 0) throw DomainError("icosphere level must be nonnegative");
  if (level > SphereMesh::kMaxLevel)
    throw SizeGuardError("icosphere level " + std::to_string(level) + " exceeds the limit of " +
                         std::to_string(SphereMesh::kMaxLevel));

  const double t = std::numbers::phi;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& f : faces) {
    const Vec3 n = (v[f[1]] - v[f[0]]).cross(v[f[2]] - v[f[0]]);
    if (n.dot(v[f[0]] + v[f[1]] + v[f[2]]) < 0.0) std::swap(f[1], f[2]);
  }

  for (int l = 0; l < level; ++l) {
    std::map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), static_cast<int>(v.size()));
      if (inserted) v.push_back((v[a] + v[b]).normalized());
      return it->second;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  return SphereMesh::from_faces(level, std::move(v), std::move(faces));
}

std::vector<double> boundary_sums(const SphereMesh& mesh, std::span<const double> edge_values) {
  if (edge_values.size() != mesh.num_edges()) throw DimensionError("boundary_sums: one value per edge expected");
  std::vector<double> out(mesh.num_faces(), 0.0);
  const auto& bnd = mesh.face_boundaries();
  for (std::size_t f = 0; f < out.size(); ++f)
    for (const auto& se : bnd[f]) out[f] += se.sign * edge_values[se.edge];
  return out;
}

int flux_quantum(std::span<const double> target_flux) {
  double total = 0.0;
  for (double x : target_flux) total += x;
  const double d = total / kTwoPi;
  const double rounded = std::round(d);
  if (std::abs(total - kTwoPi * rounded) > 1e-9)
    throw FluxQuantizationError("total flux " + std::to_string(total) + " is not an integer multiple of 2 pi");
  return static_cast<int>(rounded);
}

std::vector<double> dual_poisson_solve(const SphereMesh& mesh, std::span<const double> target_flux,
                                       std::span<const char> support) {
  const std::size_t nf = mesh.num_faces();
  if (target_flux.size() != nf) throw DimensionError("dual_poisson_solve: one flux value per face expected");
  if (!support.empty() && support.size() != nf) throw DimensionError("dual_poisson_solve: support mask size");
  auto supported = [&](std::size_t f) { return support.empty() || support[f] != 0; };

  const int d = flux_quantum(target_flux);
  for (std::size_t f = 0; f < nf; ++f)
    if (!supported(f) && std::abs(target_flux[f]) > 1e-12)
      throw DomainError("dual_poisson_solve: flux outside the support");

  // Compact numbering of the supported faces; the first one is grounded.
  std::vector<int> slot(nf, -1);
  std::vector<std::size_t> active;
  for (std::size_t f = 0; f < nf; ++f)
    if (supported(f)) {
      slot[f] = static_cast<int>(active.size());
      active.push_back(f);
    }
  if (active.empty()) throw DomainError("dual_poisson_solve: empty support");
  const auto& ef = mesh.edge_faces();
  auto edge_active = [&](std::size_t e) { return supported(ef[e].left_face) && supported(ef[e].right_face); };

  {  // The supported dual graph must be connected for the system to be consistent.
    std::vector<char> seen(active.size(), 0);
    std::queue<std::size_t> q;
    q.push(active.front());
    seen[0] = 1;
    std::size_t count = 1;
    const auto& bnd = mesh.face_boundaries();
    while (!q.empty()) {
      const std::size_t f = q.front();
      q.pop();
      for (const auto& se : bnd[f]) {
        if (!edge_active(se.edge)) continue;
        const std::size_t g = static_cast<std::size_t>(
            ef[se.edge].left_face == static_cast<int>(f) ? ef[se.edge].right_face : ef[se.edge].left_face);
        if (!seen[slot[g]]) {
          seen[slot[g]] = 1;
          ++count;
          q.push(g);
        }
      }
    }
    if (count != active.size()) throw DomainError("dual_poisson_solve: support is not connected");
  }

  std::vector<double> rhs(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) rhs[i] = target_flux[active[i]];
  rhs[0] -= kTwoPi * d;  // Dirac-string term

  const std::size_t n = active.size();
  std::vector<double> psi(n, 0.0);
  if (n > 1) {
    // Grounded Laplacian on unknowns 1..n-1.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(7 * n);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      if (!edge_active(e)) continue;
      const int i = slot[ef[e].left_face], j = slot[ef[e].right_face];
      if (i > 0) trip.emplace_back(i - 1, i - 1, 1.0);
      if (j > 0) trip.emplace_back(j - 1, j - 1, 1.0);
      if (i > 0 && j > 0) {
        trip.emplace_back(i - 1, j - 1, -1.0);
        trip.emplace_back(j - 1, i - 1, -1.0);
      }
    }
    Eigen::SparseMatrix<double> lap(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1));
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
    if (solver.info() != Eigen::Success) throw Error("dual_poisson_solve: factorization failed");
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data() + 1, static_cast<Eigen::Index>(n - 1));
    const Eigen::VectorXd x = solver.solve(b);
    for (std::size_t i = 1; i < n; ++i) psi[i] = x[static_cast<Eigen::Index>(i - 1)];
  }

  std::vector<double> theta(mesh.num_edges(), 0.0);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    if (edge_active(e)) theta[e] = psi[slot[ef[e].left_face]] - psi[slot[ef[e].right_face]];

  const std::vector<double> sums = boundary_sums(mesh, theta);
  for (std::size_t i = 0; i < n; ++i) {
    const double res = std::abs(sums[active[i]] - rhs[i]);
    if (res > 1e-9) throw Error("dual_poisson_solve: face residual " + std::to_string(res) + " exceeds 1e-9");
  }
  return theta;
}

Eigen::MatrixXd dual_laplacian_dense(const SphereMesh& mesh) {
  const auto nf = static_cast<Eigen::Index>(mesh.num_faces());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(nf, nf);
  for (const auto& ef : mesh.edge_faces()) {
    l(ef.left_face, ef.left_face) += 1.0;
    l(ef.right_face, ef.right_face) += 1.0;
    l(ef.left_face, ef.right_face) -= 1.0;
    l(ef.right_face, ef.left_face) -= 1.0;
  }
  return l;
}

std::string to_json(const SphereMesh& mesh) {
  nlohmann::json j;
  j["level"] = mesh.level();
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices()) verts.push_back({v.x(), v.y(), v.z()});
  auto& faces = j["faces"] = nlohmann::json::array();
  for (const auto& f : mesh.faces()) faces.push_back({f[0], f[1], f[2]});
  return j.dump();
}

SphereMesh from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("mesh JSON: ") + e.what());
  }
  for (const auto& [key, value] : j.items())
    if (key != "level" && key != "vertices" && key != "faces") throw DomainError("mesh JSON: unknown key " + key);
  try {
    std::vector<Vec3> verts;
    for (const auto& v : j.at("vertices")) verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : j.at("faces")) faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
    return SphereMesh::from_faces(j.at("level").get<int>(), std::move(verts), std::move(faces));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("mesh JSON: ") + e.what());
  }
}

void save(const SphereMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json(mesh) << '\n';
}

SphereMesh load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace curvflow::mesh
