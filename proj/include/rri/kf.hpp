#pragma once

#include "rri/types.hpp"

namespace rri {

// Kalman filter tuning. The road input is unknown, modeled as zero-mean
// process noise entering through G, so Q is the assumed input covariance
// and is set very large relative to R (default ratio 1e9) to trust the
// measurements.
struct KfConfig {
  Eigen::MatrixXd Q;   // m x m process (input) covariance
  Eigen::MatrixXd R;   // p x p measurement covariance
  Eigen::MatrixXd P0;  // n x n initial state covariance
  Eigen::VectorXd x0;  // initial state

  // R = sigma^2 I, Q = qr_ratio sigma^2 I, P0 = 1e-2 I, x0 = 0
  static KfConfig defaults(int n, int m, int p, double qr_ratio = 1e9,
                           double sigma = 0.05);
};

struct KfState {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
  long k = 0;  // sample index the state refers to
};

// One reconstructed input sample. u covers the hold interval
// [t, t + T); innovation is the measurement residual that produced it.
struct InputEstimate {
  Eigen::VectorXd u;
  double t = 0.0;
  Eigen::VectorXd innovation;
};

// Predict step: x <- F x, P <- F P F^T + G Q G^T (no input feedthrough;
// the input is unknown). Increments k.
KfState time_update(const KfState& s, const DiscreteStateSpace& dss, const KfConfig& cfg);

// Correct step with Joseph-form covariance update and symmetrization;
// returns the corrected state and the innovation y - H x_pred. Throws
// NumericalError if the innovation covariance solve fails.
std::pair<KfState, Eigen::VectorXd> measurement_update(const KfState& pred,
                                                       const Eigen::VectorXd& y,
                                                       const DiscreteStateSpace& dss,
                                                       const KfConfig& cfg);

// Least-squares input reconstruction for the step k -> k+1:
// u_hat[k] = Q G^T P[k+1|k]^-1 (x_hat[k+1|k+1] - F x_hat[k|k]).
Eigen::VectorXd input_estimate(const KfState& filtered_k, const Eigen::MatrixXd& P_pred,
                               const KfState& filtered_k1, const DiscreteStateSpace& dss,
                               const KfConfig& cfg);

// Run the unknown-input filter over a measured trace. The model is
// discretized at trace.dt; `channels` selects which acceleration
// channels feed the filter (QC supports vertical only; lateral-only
// requires HC). Starts from a measurement update at sample 0 on
// (cfg.x0, cfg.P0). Returns one InputEstimate per step transition,
// stamped t = k * dt.
std::vector<InputEstimate> run_filter(const SimTrace& trace, Model model, Channels channels,
                                      const VehicleParams& params, const KfConfig& cfg);

// Convenience defaults matching run_filter's dimensions.
KfConfig default_config(Model model, Channels channels, double qr_ratio = 1e9,
                        double sigma = 0.05);

// Extract one input component as a plain series; component -1 takes the
// mean across components (two-track average). For lateral-only runs the
// designated nominal profile is the left track (component 0): the track
// average is identically zero because roll only sees cross-track
// differences.
std::vector<double> input_component(const std::vector<InputEstimate>& est, int component);

}  // namespace rri
