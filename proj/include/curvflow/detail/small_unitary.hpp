#pragma once

// Fixed-size kernels for the r x r unitary algebra of the lattice (r <= 8).
// Everything here is header-only so each rank gets its own unrolled code.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace curvflow::ym::detail {

using Complex = std::complex<double>;
template <int R>
using Mat = Eigen::Matrix<Complex, R, R>;
template <int R>
using RVec = Eigen::Matrix<double, R, 1>;
template <int R, class T>
using MatT = Eigen::Matrix<std::complex<T>, R, R>;
template <int R, class T>
using RVecT = Eigen::Matrix<T, R, 1>;

inline constexpr int kMaxRank = 8;

/// Cyclic complex Jacobi for a Hermitian matrix. On return `w` holds the
/// eigenvalues ascending and the columns of `v` the eigenvectors.
template <int R, class T = double>
void hermitian_eig(MatT<R, T> a, RVecT<R, T>& w, MatT<R, T>& v) {
  using C = std::complex<T>;
  v.setIdentity();
  if constexpr (R == 1) {
    w[0] = a(0, 0).real();
    return;
  } else {
    const T scale = a.norm();
    const T eps = std::numeric_limits<T>::epsilon();
    for (int sweep = 0; sweep < 60; ++sweep) {
      T off = 0;
      for (int p = 0; p < R; ++p)
        for (int q = p + 1; q < R; ++q) off += std::norm(a(p, q));
      if (off <= eps * eps * 1e-2 * scale * scale || off == 0) break;
      for (int p = 0; p < R; ++p) {
        for (int q = p + 1; q < R; ++q) {
          const T mag = std::abs(a(p, q));
          if (mag == 0) continue;
          // Phase-rotate q so the pair becomes a real symmetric 2x2 problem,
          // then apply the classical Jacobi rotation.
          const C phase = a(p, q) / mag;  // e^{i phi}
          const T app = a(p, p).real(), aqq = a(q, q).real();
          const T tau = (aqq - app) / (2 * mag);
          const T t = (tau >= 0 ? T(1) : T(-1)) / (std::abs(tau) + std::sqrt(1 + tau * tau));
          const T c = 1 / std::sqrt(1 + t * t);
          const T s = t * c;
          // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] acting on (p, q).
          const C gqp = -s * std::conj(phase);
          const C gqq = c * std::conj(phase);
          // a <- a G (columns p, q)
          for (int k = 0; k < R; ++k) {
            const C akp = a(k, p), akq = a(k, q);
            a(k, p) = akp * c + akq * gqp;
            a(k, q) = akp * s + akq * gqq;
          }
          // a <- G^H a (rows p, q)
          for (int k = 0; k < R; ++k) {
            const C apk = a(p, k), aqk = a(q, k);
            a(p, k) = c * apk + std::conj(gqp) * aqk;
            a(q, k) = s * apk + std::conj(gqq) * aqk;
          }
          a(p, q) = 0;
          a(q, p) = 0;
          a(p, p) = a(p, p).real();
          a(q, q) = a(q, q).real();
          for (int k = 0; k < R; ++k) {
            const C vkp = v(k, p), vkq = v(k, q);
            v(k, p) = vkp * c + vkq * gqp;
            v(k, q) = vkp * s + vkq * gqq;
          }
        }
      }
    }
    for (int i = 0; i < R; ++i) w[i] = a(i, i).real();
    // Insertion sort keeps equal eigenvalues in their original order.
    for (int i = 1; i < R; ++i) {
      for (int j = i; j > 0 && w[j] < w[j - 1]; --j) {
        std::swap(w[j], w[j - 1]);
        v.col(j).swap(v.col(j - 1));
      }
    }
  }
}

/// Eigendecomposition of a unitary u = V diag(e^{i theta}) V^H with the
/// principal angles theta in (-pi, pi], ascending.
template <int R>
struct UnitaryLog {
  Mat<R> vecs;
  RVec<R> angles;
  long double angle_sq = 0;  // sum theta_j^2 accumulated before rounding to double
  bool ok = true;          // false when an angle entered the guard band
  double worst_angle = 0;  // largest |theta|

  Mat<R> log() const {
    Mat<R> d = Mat<R>::Zero();
    for (int j = 0; j < R; ++j) d(j, j) = Complex(0.0, angles[j]);
    return vecs * d * vecs.adjoint();
  }
  Mat<R> unitary() const {
    Mat<R> d = Mat<R>::Zero();
    for (int j = 0; j < R; ++j) d(j, j) = std::polar(1.0, angles[j]);
    return vecs * d * vecs.adjoint();
  }
};

/// Principal logarithm through the Cayley transform K = i (I - u)(I + u)^{-1},
/// which is Hermitian with eigenvalues tan(theta / 2). Angles with
/// |theta| > pi - margin are flagged instead of trusted.
///
/// The Cayley transform runs in precision T; energies near a critical point
/// change by less than double rounding noise per step, so the flow forms it
/// in long double.
template <int R, class T = double>
UnitaryLog<R> unitary_log(const MatT<R, T>& u, double margin) {
  using C = std::complex<T>;
  UnitaryLog<R> out;
  const double limit = std::numbers::pi - margin;
  RVecT<R, T> theta;
  if constexpr (R == 1) {
    out.vecs(0, 0) = 1.0;
    theta[0] = std::arg(u(0, 0));
  } else {
    const MatT<R, T> id = MatT<R, T>::Identity();
    const MatT<R, T> k = C(0, 1) * (id - u) * (id + u).inverse();
    if (!k.allFinite()) {
      out.ok = false;
      out.worst_angle = std::numbers::pi;
      out.vecs.setIdentity();
      out.angles.setConstant(std::numbers::pi);
      return out;
    }
    // K has norm ~ |theta| / 2, so a double eigensolve of the rounded K
    // keeps absolute accuracy ~ 1e-16 |theta|; only forming K needs T.
    const Mat<R> kd = (T(0.5) * (k + k.adjoint())).template cast<Complex>();
    RVec<R> t;
    hermitian_eig<R>(Mat<R>(0.5 * (kd + kd.adjoint())), t, out.vecs);
    for (int j = 0; j < R; ++j) theta[j] = 2 * std::atan(static_cast<T>(t[j]));
  }
  out.angles = theta.template cast<double>();
  for (int j = 0; j < R; ++j) out.angle_sq += static_cast<long double>(theta[j]) * theta[j];
  out.worst_angle = out.angles.cwiseAbs().maxCoeff();
  out.ok = out.worst_angle <= limit;
  return out;
}

/// exp(a) for anti-Hermitian a.
template <int R>
Mat<R> exp_antihermitian(const Mat<R>& a) {
  if constexpr (R == 1) {
    Mat<R> out;
    out(0, 0) = std::polar(1.0, a(0, 0).imag());
    return out;
  } else {
    const Mat<R> k = Complex(0.0, -1.0) * a;  // a = i k
    RVec<R> w;
    Mat<R> v;
    hermitian_eig<R>(Mat<R>(0.5 * (k + k.adjoint())), w, v);
    Mat<R> d = Mat<R>::Zero();
    for (int j = 0; j < R; ++j) d(j, j) = std::polar(1.0, w[j]);
    return v * d * v.adjoint();
  }
}

/// Modified Gram-Schmidt on the columns; restores unitarity lost to rounding.
template <int R>
void reunitarize(Mat<R>& u) {
  for (int j = 0; j < R; ++j) {
    for (int k = 0; k < j; ++k) u.col(j) -= u.col(k).dot(u.col(j)) * u.col(k);
    u.col(j) /= u.col(j).norm();
  }
}

/// Divided difference of the principal log on the unit circle:
/// (i theta_j - i theta_k) / (e^{i theta_j} - e^{i theta_k}), and 1/e^{i theta}
/// on the diagonal.
inline Complex log_divided_difference(double theta_j, double theta_k) {
  const double delta = theta_j - theta_k;
  const Complex phase = std::polar(1.0, -0.5 * (theta_j + theta_k));
  const double half = 0.5 * delta;
  const double ratio = std::abs(half) < 1e-8 ? 1.0 + half * half / 6.0 : half / std::sin(half);
  return phase * ratio;
}

/// Frechet derivative of the principal log at u = V diag(e^{i theta}) V^H in
/// direction e: V (L o (V^H e V)) V^H.
template <int R>
Mat<R> log_frechet(const UnitaryLog<R>& lg, const Mat<R>& e) {
  Mat<R> m = lg.vecs.adjoint() * e * lg.vecs;
  for (int j = 0; j < R; ++j)
    for (int k = 0; k < R; ++k) m(j, k) *= log_divided_difference(lg.angles[j], lg.angles[k]);
  return lg.vecs * m * lg.vecs.adjoint();
}

/// Adjoint of log_frechet for the real pairing Re tr(a^H b).
template <int R>
Mat<R> log_frechet_adjoint(const UnitaryLog<R>& lg, const Mat<R>& g) {
  Mat<R> m = lg.vecs.adjoint() * g * lg.vecs;
  for (int j = 0; j < R; ++j)
    for (int k = 0; k < R; ++k) m(j, k) *= std::conj(log_divided_difference(lg.angles[j], lg.angles[k]));
  return lg.vecs * m * lg.vecs.adjoint();
}

template <int R>
Mat<R> antihermitian_part(const Mat<R>& a) {
  return 0.5 * (a - a.adjoint());
}

}  // namespace curvflow::ym::detail
