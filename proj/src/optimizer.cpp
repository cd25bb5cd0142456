#include "curvflow/optimizer.hpp"

#include <cmath>
#include <numeric>

#include "curvflow/error.hpp"

namespace curvflow::opt {

void project_to_spheres(Eigen::VectorXd& x, const std::vector<int>& blocks) {
  int offset = 0;
  for (int len : blocks) {
    auto seg = x.segment(offset, len);
    const double norm = seg.norm();
    if (norm == 0.0) throw DomainError("sphere projection of a zero block");
    seg /= norm;
    offset += len;
  }
}

Eigen::VectorXd projected_gradient(const Objective& f, const Eigen::VectorXd& x,
                                   const std::vector<int>& blocks, double fd_step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + fd_step;
    const double up = f(probe);
    probe[i] = x[i] - fd_step;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * fd_step);
  }
  int offset = 0;
  for (int len : blocks) {
    auto gs = g.segment(offset, len);
    const auto xs = x.segment(offset, len);
    gs -= gs.dot(xs) * xs;
    offset += len;
  }
  return g;
}

DescentResult sphere_descent(const Objective& f, Eigen::VectorXd x0,
                             const std::vector<int>& blocks, const DescentOptions& options,
                             const Admissible& admissible) {
  if (std::accumulate(blocks.begin(), blocks.end(), 0) != x0.size())
    throw DimensionError("sphere_descent: block sizes do not cover the point");

  DescentResult out;
  project_to_spheres(x0, blocks);
  out.x = std::move(x0);
  out.value = f(out.x);

  double step = options.initial_step;
  for (int it = 0; it < options.max_iters; ++it) {
    out.iterations = it + 1;
    const Eigen::VectorXd g = projected_gradient(f, out.x, blocks, options.fd_step);
    const double gnorm = g.norm();
    if (gnorm < options.grad_tol) {
      out.converged = true;
      return out;
    }

    // Armijo backtracking along the retracted steepest-descent curve.
    bool accepted = false;
    double t = step;
    for (int h = 0; h <= options.max_halvings; ++h) {
      Eigen::VectorXd trial = out.x - t * g;
      project_to_spheres(trial, blocks);
      const double value = f(trial);
      if (value <= out.value - options.armijo * t * gnorm * gnorm && (!admissible || admissible(trial))) {
        out.x = std::move(trial);
        out.value = value;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // No descent within the halving budget: the finite-difference gradient
      // is below the resolution of f. Report rather than abort.
      out.line_search_failed = true;
      out.message = "line search exhausted " + std::to_string(options.max_halvings) +
                    " halvings at projected gradient norm " + std::to_string(gnorm);
      return out;
    }
    step = std::min(1.0, 2.0 * t);
  }
  out.message = "iteration budget exhausted";
  return out;
}

}  // namespace curvflow::opt
