#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rri {

struct BfgsOptions {
  int max_iters = 200;
  double gtol = 1e-9;     // relative to max(1, initial gradient norm)
  double fd_step = 1e-5;  // central-difference step
  int max_backtracks = 40;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
  int evaluations = 0;
};

// Quasi-Newton minimizer: inverse-Hessian BFGS updates with a curvature
// guard, Armijo backtracking line search, central-difference gradients.
// Accepted iterates are monotone non-increasing in cost. Convergence is
// declared on the gradient criterion; a stalled line search returns the
// best point with converged = false.
BfgsResult minimize_bfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x0, const BfgsOptions& opt = {});

}  // namespace rri
