#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace curvflow::opt {

/// Projected gradient descent on a product of unit spheres in R^m. The point
/// is split into consecutive blocks; each block is kept at unit norm.
struct DescentOptions {
  int max_iters = 400;
  double fd_step = 1e-5;        // central-difference step for the gradient
  double grad_tol = 1e-9;       // stop when the projected gradient is this small
  double initial_step = 0.25;
  int max_halvings = 40;
  double armijo = 0.25;         // sufficient-decrease fraction
};

struct DescentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;     // projected gradient fell below grad_tol
  bool line_search_failed = false;
  std::string message;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Optional feasibility filter: trial points for which it returns false are
/// rejected by the line search exactly like an uphill step.
using Admissible = std::function<bool(const Eigen::VectorXd&)>;

/// Normalizes every block of `x` to unit length.
void project_to_spheres(Eigen::VectorXd& x, const std::vector<int>& blocks);

/// Central-difference gradient projected onto the tangent space of the
/// product of spheres at x.
Eigen::VectorXd projected_gradient(const Objective& f, const Eigen::VectorXd& x,
                                   const std::vector<int>& blocks, double fd_step);

DescentResult sphere_descent(const Objective& f, Eigen::VectorXd x0,
                             const std::vector<int>& blocks, const DescentOptions& options,
                             const Admissible& admissible = {});

}  // namespace curvflow::opt
