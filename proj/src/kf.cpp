#include "rri/kf.hpp"

#include "rri/discretize.hpp"
#include "rri/models.hpp"

namespace rri {

KfConfig KfConfig::defaults(int n, int m, int p, double qr_ratio, double sigma) {
  KfConfig c;
  c.Q = qr_ratio * sigma * sigma * Eigen::MatrixXd::Identity(m, m);
  c.R = sigma * sigma * Eigen::MatrixXd::Identity(p, p);
  c.P0 = 1e-2 * Eigen::MatrixXd::Identity(n, n);
  c.x0 = Eigen::VectorXd::Zero(n);
  return c;
}

KfConfig default_config(Model model, Channels channels, double qr_ratio, double sigma) {
  const int n = model == Model::HC ? 8 : 4;
  const int m = model == Model::HC ? 2 : 1;
  const int p = channels == Channels::Both ? 2 : 1;
  return KfConfig::defaults(n, m, p, qr_ratio, sigma);
}

KfState time_update(const KfState& s, const DiscreteStateSpace& dss, const KfConfig& cfg) {
  KfState out;
  out.x = dss.F * s.x;
  out.P = dss.F * s.P * dss.F.transpose() + dss.G * cfg.Q * dss.G.transpose();
  out.k = s.k + 1;
  return out;
}

std::pair<KfState, Eigen::VectorXd> measurement_update(const KfState& pred,
                                                       const Eigen::VectorXd& y,
                                                       const DiscreteStateSpace& dss,
                                                       const KfConfig& cfg) {
  const Eigen::MatrixXd& H = dss.H;
  const Eigen::MatrixXd PHt = pred.P * H.transpose();
  const Eigen::MatrixXd S = H * PHt + cfg.R;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("kalman: innovation covariance not factorizable at step " +
                         std::to_string(pred.k));
  // K = P H^T S^-1, via S K^T = (P H^T)^T
  const Eigen::MatrixXd K = ldlt.solve(PHt.transpose()).transpose();
  if (!K.allFinite())
    throw NumericalError("kalman: singular innovation covariance at step " +
                         std::to_string(pred.k));
  const Eigen::VectorXd innovation = y - H * pred.x;
  KfState out;
  out.k = pred.k;
  out.x = pred.x + K * innovation;
  // Joseph form keeps P symmetric-PSD under the extreme Q/R ratio
  const Eigen::MatrixXd IKH =
      Eigen::MatrixXd::Identity(pred.P.rows(), pred.P.cols()) - K * H;
  out.P = IKH * pred.P * IKH.transpose() + K * cfg.R * K.transpose();
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return {out, innovation};
}

Eigen::VectorXd input_estimate(const KfState& filtered_k, const Eigen::MatrixXd& P_pred,
                               const KfState& filtered_k1, const DiscreteStateSpace& dss,
                               const KfConfig& cfg) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(P_pred);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("kalman: predicted covariance not factorizable at step " +
                         std::to_string(filtered_k.k));
  const Eigen::VectorXd dx = filtered_k1.x - dss.F * filtered_k.x;
  return cfg.Q * dss.G.transpose() * ldlt.solve(dx);
}

std::vector<InputEstimate> run_filter(const SimTrace& trace, Model model, Channels channels,
                                      const VehicleParams& params, const KfConfig& cfg) {
  if (model == Model::QC && channels != Channels::Vertical)
    throw ValidationError("run_filter: quarter-car supports the vertical channel only");
  if (!(trace.dt > 0.0)) throw ValidationError("run_filter: trace needs dt > 0");
  const std::size_t n = trace.n_samples();
  if (n < 2) throw ValidationError("run_filter: need at least 2 samples");
  if (channels != Channels::Vertical && trace.lateral_acc.size() != n)
    throw ValidationError("run_filter: lateral channel missing from trace");

  const StateSpace sys = model == Model::HC ? build_hc(params) : build_qc(params);
  DiscreteStateSpace dss = discretize(sys, trace.dt);
  if (channels == Channels::Vertical)
    dss.H = sys.C.row(0);
  else if (channels == Channels::Lateral)
    dss.H = sys.C.row(1);

  const int p = static_cast<int>(dss.H.rows());
  if (cfg.R.rows() != p || cfg.Q.rows() != dss.G.cols() || cfg.P0.rows() != sys.n())
    throw ValidationError("run_filter: config dimensions do not match model/channels");

  auto measurement = [&](std::size_t k) {
    Eigen::VectorXd y(p);
    if (channels == Channels::Vertical) {
      y(0) = trace.vertical_acc[k];
    } else if (channels == Channels::Lateral) {
      y(0) = trace.lateral_acc[k];
    } else {
      y(0) = trace.vertical_acc[k];
      y(1) = trace.lateral_acc[k];
    }
    return y;
  };

  KfState state;
  state.x = cfg.x0;
  state.P = cfg.P0;
  state.k = 0;
  state = measurement_update(state, measurement(0), dss, cfg).first;

  std::vector<InputEstimate> out;
  out.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const KfState pred = time_update(state, dss, cfg);
    auto [next, innovation] = measurement_update(pred, measurement(k + 1), dss, cfg);
    InputEstimate est;
    est.u = input_estimate(state, pred.P, next, dss, cfg);
    est.t = static_cast<double>(k) * trace.dt;
    est.innovation = innovation;
    out.push_back(std::move(est));
    state = next;
  }
  return out;
}

std::vector<double> input_component(const std::vector<InputEstimate>& est, int component) {
  std::vector<double> u(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (component == -1) {
      if (est[i].u.size() == 0) throw ValidationError("input_component: empty estimate");
      u[i] = est[i].u.mean();
    } else if (component < 0 || component >= est[i].u.size()) {
      throw ValidationError("input_component: component out of range");
    } else {
      u[i] = est[i].u(component);
    }
  }
  return u;
}

}  // namespace rri
