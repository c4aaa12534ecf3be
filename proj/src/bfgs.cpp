#include "rri/bfgs.hpp"

#include <cmath>

namespace rri {

namespace {

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h, int* evals) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    xp(i) = xi + h;
    const double fp = f(xp);
    xp(i) = xi - h;
    const double fm = f(xp);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * h);
  }
  *evals += 2 * static_cast<int>(x.size());
  return g;
}

}  // namespace

BfgsResult minimize_bfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x0, const BfgsOptions& opt) {
  const Eigen::Index d = x0.size();
  BfgsResult res;
  res.x = x0;
  res.f = f(x0);
  res.evaluations = 1;

  Eigen::VectorXd g = fd_gradient(f, res.x, opt.fd_step, &res.evaluations);
  const double g0 = g.lpNorm<Eigen::Infinity>();
  const double gstop = opt.gtol * std::max(1.0, g0);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(d, d);
  bool first = true;

  for (int it = 0; it < opt.max_iters; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= gstop) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    Eigen::VectorXd dir = -(Hinv * g);
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {  // lost positive definiteness; restart from steepest descent
      Hinv.setIdentity();
      dir = -g;
      slope = g.dot(dir);
    }

    // Armijo backtracking
    double step = 1.0;
    double f_new = 0.0;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      x_new = res.x + step * dir;
      f_new = f(x_new);
      ++res.evaluations;
      if (f_new <= res.f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {  // stalled: keep the best point, not converged
      res.iterations = it;
      return res;
    }

    Eigen::VectorXd g_new = fd_gradient(f, x_new, opt.fd_step, &res.evaluations);
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (first && sy > 0.0) {  // scale the initial inverse Hessian
      Hinv *= sy / yv.squaredNorm();
      first = false;
    }
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      Hinv = (I - rho * s * yv.transpose()) * Hinv * (I - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    res.x = x_new;
    res.f = f_new;
    g = g_new;
    res.iterations = it + 1;
  }
  return res;
}

}  // namespace rri
