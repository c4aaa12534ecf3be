#include "rri/discretize.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace rri {

DiscreteStateSpace discretize(const StateSpace& sys, double T) {
  if (!(T > 0.0)) throw ValidationError("discretize: sample time must be positive");
  const int n = sys.n(), m = sys.m();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + m, n + m);
  M.topLeftCorner(n, n) = sys.A * T;
  M.topRightCorner(n, m) = sys.B * T;
  Eigen::MatrixXd E = M.exp();
  DiscreteStateSpace d;
  d.F = E.topLeftCorner(n, n);
  d.G = E.topRightCorner(n, m);
  d.H = sys.C;
  d.T = T;
  if (!d.F.allFinite() || !d.G.allFinite())
    throw NumericalError("discretize: matrix exponential did not converge");
  return d;
}

}  // namespace rri
