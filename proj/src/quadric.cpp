#include "curvflow/quadric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "curvflow/error.hpp"
#include "curvflow/kernels.hpp"
#include "curvflow/optimizer.hpp"

namespace curvflow::quadric {

namespace {

const Complex kI(0.0, 1.0);

void require_same_n(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": tangent dimensions differ");
}

template <class Block>
Block curvature_formula(const Block& x, const Block& y, const Block& z) {
  return z * (y.transpose() * x) + x * (y.transpose() * z) - z * (x.transpose() * y) -
         y * (x.transpose() * z);
}

template <class Scalar>
using Ambient = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
Ambient<Scalar> embed_p(const Eigen::Matrix<Scalar, 2, Eigen::Dynamic>& x) {
  const Eigen::Index n = x.cols();
  Ambient<Scalar> m = Ambient<Scalar>::Zero(n + 2, n + 2);
  m.topRightCorner(n, 2) = -x.transpose();
  m.bottomLeftCorner(2, n) = x;
  return m;
}

template <class Scalar>
Ambient<Scalar> double_bracket(const Eigen::Matrix<Scalar, 2, Eigen::Dynamic>& x,
                               const Eigen::Matrix<Scalar, 2, Eigen::Dynamic>& y,
                               const Eigen::Matrix<Scalar, 2, Eigen::Dynamic>& z) {
  const Ambient<Scalar> xh = embed_p(x), yh = embed_p(y), zh = embed_p(z);
  const Ambient<Scalar> xy = xh * yh - yh * xh;
  return -(xy * zh - zh * xy);
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  Eigen::VectorXcd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = Complex(x[i], x[n + i]);
  return a;
}

Eigen::VectorXd random_gaussian(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x[i] = normal(rng);
  return x;
}

}  // namespace

// ---------------------------------------------------------------- tangents

RealTangent::RealTangent(RealBlock x) : x_(std::move(x)) {
  if (x_.cols() < 1) throw DimensionError("RealTangent needs n >= 1 columns");
}

RealTangent RealTangent::zero(int n) { return RealTangent(RealBlock::Zero(2, n)); }

RealTangent RealTangent::elementary(int n, int row, int col) {
  if (row < 1 || row > 2 || col < 1 || col > n) throw DimensionError("elementary: index out of range");
  RealBlock x = RealBlock::Zero(2, n);
  x(row - 1, col - 1) = 1.0;
  return RealTangent(std::move(x));
}

RealTangent RealTangent::operator+(const RealTangent& o) const {
  require_same_n(n(), o.n(), "RealTangent sum");
  return RealTangent(x_ + o.x_);
}

RealTangent RealTangent::operator-(const RealTangent& o) const {
  require_same_n(n(), o.n(), "RealTangent difference");
  return RealTangent(x_ - o.x_);
}

RealTangent RealTangent::operator*(double s) const { return RealTangent(s * x_); }

HoloTangent::HoloTangent(Eigen::VectorXcd a) : a_(std::move(a)) {}

HoloTangent HoloTangent::basis(int n, int index) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
  a[index] = 1.0;
  return HoloTangent(std::move(a));
}

ComplexBlock HoloTangent::embed() const {
  ComplexBlock u(2, a_.size());
  u.row(0) = a_.transpose();
  u.row(1) = -kI * a_.transpose();
  return u;
}

// --------------------------------------------------------- real geometry

Eigen::MatrixXd so_block(const RealTangent& x) { return embed_p<double>(x.matrix()); }

double metric_g(const RealTangent& x, const RealTangent& y) {
  require_same_n(x.n(), y.n(), "metric_g");
  return (x.matrix() * y.matrix().transpose()).trace();
}

RealTangent complex_structure_J(const RealTangent& x) {
  RealBlock out(2, x.n());
  out.row(0) = -x.matrix().row(1);
  out.row(1) = x.matrix().row(0);
  return RealTangent(std::move(out));
}

RealTangent curvature_endo(const RealTangent& x, const RealTangent& y, const RealTangent& z) {
  require_same_n(x.n(), y.n(), "curvature_endo");
  require_same_n(x.n(), z.n(), "curvature_endo");
  return RealTangent(curvature_formula<RealBlock>(x.matrix(), y.matrix(), z.matrix()));
}

Eigen::MatrixXd curvature_bracket_ambient(const RealTangent& x, const RealTangent& y,
                                          const RealTangent& z) {
  require_same_n(x.n(), y.n(), "curvature_bracket_oracle");
  require_same_n(x.n(), z.n(), "curvature_bracket_oracle");
  return double_bracket<double>(x.matrix(), y.matrix(), z.matrix());
}

RealTangent curvature_bracket_oracle(const RealTangent& x, const RealTangent& y,
                                     const RealTangent& z) {
  const Eigen::MatrixXd m = curvature_bracket_ambient(x, y, z);
  return RealTangent(m.bottomLeftCorner(2, x.n()));
}

// ------------------------------------------------------ complexified forms

ComplexBlock curvature_endo(const ComplexBlock& x, const ComplexBlock& y, const ComplexBlock& z) {
  require_same_n(static_cast<int>(x.cols()), static_cast<int>(y.cols()), "curvature_endo");
  require_same_n(static_cast<int>(x.cols()), static_cast<int>(z.cols()), "curvature_endo");
  return curvature_formula<ComplexBlock>(x, y, z);
}

ComplexBlock curvature_bracket_oracle(const ComplexBlock& x, const ComplexBlock& y,
                                      const ComplexBlock& z) {
  require_same_n(static_cast<int>(x.cols()), static_cast<int>(y.cols()), "curvature_bracket_oracle");
  require_same_n(static_cast<int>(x.cols()), static_cast<int>(z.cols()), "curvature_bracket_oracle");
  const Eigen::MatrixXcd m = double_bracket<Complex>(x, y, z);
  return m.bottomLeftCorner(2, x.cols());
}

Complex metric_g(const ComplexBlock& x, const ComplexBlock& y) {
  require_same_n(static_cast<int>(x.cols()), static_cast<int>(y.cols()), "metric_g");
  return (x * y.transpose()).trace();
}

// ------------------------------------------------- bisectional curvature

double bisectional_closed(const HoloTangent& u, const HoloTangent& v) {
  require_same_n(u.n(), v.n(), "bisectional_closed");
  const auto& a = u.coords();
  const auto& b = v.coords();
  double cross = 0.0;
  for (int i = 0; i < u.n(); ++i)
    for (int j = i + 1; j < u.n(); ++j)
      cross += (std::conj(a[i]) * a[j]).imag() * (b[i] * std::conj(b[j])).imag();
  return 4.0 * a.squaredNorm() * b.squaredNorm() - 16.0 * cross;
}

double bisectional_trace(const HoloTangent& u, const HoloTangent& v) {
  require_same_n(u.n(), v.n(), "bisectional_trace");
  const ComplexBlock U = u.embed();
  const ComplexBlock V = v.embed();
  const ComplexBlock Ub = U.conjugate();
  const ComplexBlock Vb = V.conjugate();
  const Complex t = (V * Ub.transpose() * U * Vb.transpose() + U * Ub.transpose() * V * Vb.transpose() -
                     V * U.transpose() * Ub * Vb.transpose() - Ub * U.transpose() * V * Vb.transpose())
                        .trace();
  return t.real();
}

double bisectional_bracket(const HoloTangent& u, const HoloTangent& v) {
  require_same_n(u.n(), v.n(), "bisectional_bracket");
  const ComplexBlock U = u.embed();
  const ComplexBlock V = v.embed();
  const ComplexBlock r = curvature_bracket_oracle(U, ComplexBlock(U.conjugate()), V);
  return metric_g(r, ComplexBlock(V.conjugate())).real();
}

spectra::HermitianMatrix curvature_operator(const HoloTangent& u) {
  const auto& a = u.coords();
  const int n = u.n();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(n, n) * (4.0 * a.squaredNorm());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const double c = (std::conj(a[j]) * a[k]).imag();
      h(j, k) += -8.0 * kI * c;
    }
  return spectra::HermitianMatrix(h);
}

double orthogonal_ricci(const HoloTangent& u) {
  const double norm2 = u.norm_squared();
  if (norm2 == 0.0) throw DomainError("orthogonal_ricci: zero vector");
  if (std::abs(norm2 - 1.0) > 1e-12) throw DomainError("orthogonal_ricci: vector is not unit-norm");
  return curvature_operator(u).matrix().trace().real() - bisectional_closed(u, u);
}

HoloTangent isotropy_action(const HoloTangent& u, const Eigen::MatrixXd& a_rot, double angle) {
  if (a_rot.rows() != u.n() || a_rot.cols() != u.n())
    throw DimensionError("isotropy_action: rotation has wrong size");
  const Eigen::VectorXcd rotated = a_rot.transpose().cast<Complex>() * u.coords();
  return HoloTangent(std::polar(1.0, angle) * rotated);
}

HoloTangent equality_case_vector(int n) {
  if (n < 2) throw DimensionError("equality_case_vector needs n >= 2");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
  a[0] = 1.0 / std::numbers::sqrt2;
  a[1] = kI / std::numbers::sqrt2;
  return HoloTangent(std::move(a));
}

// ------------------------------------------------------- certification

CertifyResult certify_two_positivity(int n, const CertifyOptions& options) {
  if (n < 2) throw DimensionError("certify_two_positivity needs n >= 2");
  if (options.restarts < 1 || options.iters < 1) throw DomainError("certify: restarts and iters must be positive");

  const std::vector<int> blocks{2 * n};
  auto spectrum_at = [&](const Eigen::VectorXd& x) {
    return spectra::eigenvalues_ascending(curvature_operator(HoloTangent(to_complex(x)))).eigenvalues;
  };
  const opt::Objective lambda12_obj = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd ev = spectrum_at(x);
    return ev[0] + ev[1];
  };
  const opt::Objective lambda1_obj = [&](const Eigen::VectorXd& x) { return spectrum_at(x)[0]; };

  opt::DescentOptions dopt;
  dopt.max_iters = options.iters;
  dopt.fd_step = options.fd_step;

  CertifyResult out;
  out.n = n;
  out.min_lambda12 = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;

  for (int r = 0; r < options.restarts; ++r) {
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(r));
    const opt::DescentResult res = opt::sphere_descent(lambda12_obj, random_gaussian(2 * n, rng), blocks, dopt);
    if (res.converged) ++out.converged_restarts;
    if (res.line_search_failed) {
      ++out.line_search_failures;
      out.failures.push_back("restart " + std::to_string(r) + ": " + res.message);
    }
    if (res.value < out.min_lambda12) {
      out.min_lambda12 = res.value;
      best_x = res.x;
    }
  }

  // Second stage: among points whose lambda12 stays within 1e-10 of the
  // minimum, drive lambda_1 down.
  const double level = out.min_lambda12 + 1e-10;
  const opt::DescentResult refined = opt::sphere_descent(
      lambda1_obj, best_x, blocks, dopt, [&](const Eigen::VectorXd& x) { return lambda12_obj(x) <= level; });
  best_x = refined.x;

  out.argmin = HoloTangent(to_complex(best_x));
  out.spectrum = spectrum_at(best_x);
  out.min_lambda12 = std::min(out.min_lambda12, out.spectrum[0] + out.spectrum[1]);
  out.certified = out.min_lambda12 > 0.0;
  return out;
}

double bisectional_sweep_min(int n, int samples, std::uint64_t seed) {
  if (n < 1 || samples < 1) throw DomainError("bisectional_sweep_min: n and samples must be positive");
  const std::size_t count = static_cast<std::size_t>(samples);
  std::vector<double> a_re(n * count), a_im(n * count), b_re(n * count), b_im(n * count);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t p = 0; p < count; ++p) {
    double na = 0.0, nb = 0.0;
    for (int i = 0; i < n; ++i) {
      a_re[i * count + p] = normal(rng);
      a_im[i * count + p] = normal(rng);
      b_re[i * count + p] = normal(rng);
      b_im[i * count + p] = normal(rng);
      na += a_re[i * count + p] * a_re[i * count + p] + a_im[i * count + p] * a_im[i * count + p];
      nb += b_re[i * count + p] * b_re[i * count + p] + b_im[i * count + p] * b_im[i * count + p];
    }
    const double sa = 1.0 / std::sqrt(na), sb = 1.0 / std::sqrt(nb);
    for (int i = 0; i < n; ++i) {
      a_re[i * count + p] *= sa;
      a_im[i * count + p] *= sa;
      b_re[i * count + p] *= sb;
      b_im[i * count + p] *= sb;
    }
  }
  std::vector<double> values(count);
  kernels::bisectional_batch({n, count, a_re.data(), a_im.data(), b_re.data(), b_im.data()}, values);
  return *std::min_element(values.begin(), values.end());
}

BisectionalMinimum minimize_bisectional(int n, int restarts, int iters, std::uint64_t seed) {
  if (n < 1 || restarts < 1) throw DomainError("minimize_bisectional: n and restarts must be positive");
  const std::vector<int> blocks{2 * n, 2 * n};
  const opt::Objective obj = [&](const Eigen::VectorXd& x) {
    return bisectional_closed(HoloTangent(to_complex(x.head(2 * n))), HoloTangent(to_complex(x.tail(2 * n))));
  };
  opt::DescentOptions dopt;
  dopt.max_iters = iters;

  BisectionalMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    const opt::DescentResult res = opt::sphere_descent(obj, random_gaussian(4 * n, rng), blocks, dopt);
    if (res.value < best.value) {
      best.value = res.value;
      best.a = HoloTangent(to_complex(res.x.head(2 * n)));
      best.b = HoloTangent(to_complex(res.x.tail(2 * n)));
    }
  }
  return best;
}

}  // namespace curvflow::quadric
