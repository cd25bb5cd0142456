#pragma once

// Rank-templated lattice kernels shared by curvature, gradient, flow and
// diagnostics. Per-face work runs through parallel_for into per-face slots;
// every reduction afterwards is a sequential loop in index order.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "curvflow/detail/small_unitary.hpp"
#include "curvflow/error.hpp"
#include "curvflow/parallel.hpp"
#include "curvflow/sphere_mesh.hpp"
#include "curvflow/ym_lattice.hpp"

namespace curvflow::ym::engine {

using detail::Mat;
using detail::RVec;
using detail::UnitaryLog;

template <int R>
Mat<R> link_at(const Complex* links, int e) {
  return Eigen::Map<const Mat<R>>(links + static_cast<std::size_t>(e) * R * R);
}

template <int R>
Mat<R> transport(const Complex* links, const mesh::SignedEdge& se) {
  const Mat<R> u = link_at<R>(links, se.edge);
  return se.sign > 0 ? u : Mat<R>(u.adjoint());
}

template <int R>
Mat<R> face_holonomy(const mesh::SphereMesh& m, const Complex* links, std::size_t f) {
  const auto& b = m.face_boundaries()[f];
  return transport<R>(links, b[2]) * transport<R>(links, b[1]) * transport<R>(links, b[0]);
}

/// Holonomy product in extended precision.
template <int R>
detail::MatT<R, long double> face_holonomy_ext(const mesh::SphereMesh& m, const Complex* links, std::size_t f) {
  using L = detail::MatT<R, long double>;
  const auto& b = m.face_boundaries()[f];
  const L t0 = transport<R>(links, b[0]).template cast<std::complex<long double>>();
  const L t1 = transport<R>(links, b[1]).template cast<std::complex<long double>>();
  const L t2 = transport<R>(links, b[2]).template cast<std::complex<long double>>();
  return t2 * t1 * t0;
}

template <int R>
struct FaceLogs {
  std::vector<UnitaryLog<R>> logs;
  bool ok = true;
  std::size_t bad_face = 0;
  double bad_angle = 0.0;

  void require() const {
    if (!ok) throw CurvatureExtractionError(bad_face, bad_angle);
  }
};

template <int R>
FaceLogs<R> compute_logs(const mesh::SphereMesh& m, const Complex* links) {
  FaceLogs<R> out;
  const std::size_t nf = m.num_faces();
  out.logs.resize(nf);
  parallel_for(nf, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f)
      out.logs[f] = detail::unitary_log<R, long double>(face_holonomy_ext<R>(m, links, f), kBranchMargin);
  });
  for (std::size_t f = 0; f < nf; ++f) {
    if (!out.logs[f].ok) {
      out.ok = false;
      out.bad_face = f;
      out.bad_angle = out.logs[f].worst_angle;
      break;
    }
  }
  return out;
}

template <int R>
double energy(const mesh::SphereMesh& m, const FaceLogs<R>& fl) {
  long double e = 0;
  const auto& areas = m.face_areas();
  for (std::size_t f = 0; f < fl.logs.size(); ++f) e += fl.logs[f].angle_sq / areas[f];
  return static_cast<double>(e);
}

/// Raw differential D_e (see energy_differential), flat column-major blocks.
template <int R>
std::vector<Complex> differential(const mesh::SphereMesh& m, const Complex* links, const FaceLogs<R>& fl) {
  const std::size_t nf = m.num_faces();
  std::vector<Mat<R>> contrib(3 * nf);
  parallel_for(nf, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const auto& b = m.face_boundaries()[f];
      const auto& lg = fl.logs[f];
      Mat<R> t[3];
      for (int k = 0; k < 3; ++k) t[k] = transport<R>(links, b[k]);
      const Mat<R> g = (2.0 / m.face_areas()[f]) * lg.log();
      const Mat<R> kf = detail::log_frechet_adjoint<R>(lg, g) * lg.unitary().adjoint();
      // Product of the transports to the left of slot k.
      Mat<R> p[3];
      p[2].setIdentity();
      p[1] = t[2];
      p[0] = t[2] * t[1];
      for (int k = 0; k < 3; ++k) {
        const Mat<R> mk = b[k].sign > 0 ? p[k] : Mat<R>(p[k] * t[k]);
        contrib[3 * f + k] = static_cast<double>(b[k].sign) * detail::antihermitian_part<R>(mk.adjoint() * kf * mk);
      }
    }
  });
  const std::size_t ne = m.num_edges();
  std::vector<Complex> d(ne * R * R);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& ef = m.edge_faces()[e];
    Eigen::Map<Mat<R>>(d.data() + e * R * R) =
        contrib[3 * ef.left_face + ef.left_slot] + contrib[3 * ef.right_face + ef.right_slot];
  }
  return d;
}

template <int R>
std::vector<Complex> flow_gradient(const mesh::SphereMesh& m, const Complex* links, const FaceLogs<R>& fl) {
  std::vector<Complex> g = differential<R>(m, links, fl);
  const auto& w = m.hodge_weights();
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    const double s = 0.5 / w[e];
    for (int i = 0; i < R * R; ++i) g[e * R * R + i] *= s;
  }
  return g;
}

template <int R>
double weighted_norm(const mesh::SphereMesh& m, const std::vector<Complex>& g) {
  const auto& w = m.hodge_weights();
  double s = 0.0;
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    double blk = 0.0;
    for (int i = 0; i < R * R; ++i) blk += std::norm(g[e * R * R + i]);
    s += w[e] * blk;
  }
  return std::sqrt(s);
}

/// links <- exp(-tau g_e) links, re-unitarized.
template <int R>
std::vector<Complex> descend(std::size_t ne, const Complex* links, const std::vector<Complex>& g, double tau) {
  std::vector<Complex> out(ne * R * R);
  parallel_for(ne, [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const Mat<R> a = -tau * Eigen::Map<const Mat<R>>(g.data() + e * R * R);
      Mat<R> u = detail::exp_antihermitian<R>(detail::antihermitian_part<R>(a)) * link_at<R>(links, static_cast<int>(e));
      detail::reunitarize<R>(u);
      Eigen::Map<Mat<R>>(out.data() + e * R * R) = u;
    }
  });
  return out;
}

/// Trace diagnostics other than energy, grad_norm, step and time.
template <int R>
void fill_record(const mesh::SphereMesh& m, const FaceLogs<R>& fl, FlowRecord& rec) {
  const auto& areas = m.face_areas();
  const std::size_t nf = fl.logs.size();
  double min12 = std::numeric_limits<double>::infinity();
  double angle_sum = 0.0, total_area = 0.0;
  RVec<R> mean = RVec<R>::Zero();
  for (std::size_t f = 0; f < nf; ++f) {
    const RVec<R>& th = fl.logs[f].angles;
    if constexpr (R >= 2) min12 = std::min(min12, (th[0] + th[1]) / areas[f]);
    angle_sum += th.sum();
    mean += th;  // sum_f area_f * (theta / area_f)
    total_area += areas[f];
  }
  mean /= total_area;
  double var = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const RVec<R> dev = fl.logs[f].angles / areas[f] - mean;
    var += areas[f] * dev.squaredNorm();
  }
  rec.min_lambda12 = R >= 2 ? min12 : std::numeric_limits<double>::quiet_NaN();
  rec.eig_variance = var / total_area;
  const double raw = angle_sum / (2.0 * std::numbers::pi);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) >= 0.01)
    throw QuantizationViolationError("total degree " + std::to_string(raw) + " is not within 0.01 of an integer");
  rec.degree = static_cast<int>(rounded);
}

}  // namespace curvflow::ym::engine
