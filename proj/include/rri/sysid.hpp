#pragma once

#include <array>
#include <cstdint>

#include "rri/types.hpp"

namespace rri {

// Grey-box suspension identification: fit (K_s, C_s, K_t, I_s) and a
// spectrum scale mu by matching smoothed amplitude spectra of measured
// vs simulated half-car accelerations over a frequency band. Masses and
// half track width are treated as measured and held fixed.
struct SysIdProblem {
  TimeSeries measured;     // channels: vertical, lateral acceleration
  TimeSeries road_inputs;  // channels: u_l, u_r on the same time grid
  double m_s = 0.0;
  double m_u = 0.0;
  double l = 0.0;
  double f_lo = 0.5;        // band lower edge, Hz
  double f_hi = 15.0;       // band upper edge, Hz
  double smoothing = 0.5;   // spectrum moving-average width, Hz
  std::array<double, 4> init{15825.0, 1500.0, 163250.0, 3000.0};  // K_s C_s K_t I_s
  double mu0 = 1.0;
  int multistart = 5;
  std::uint64_t seed = 1;  // start-point perturbations
  int max_iters = 200;

  void validate() const;
};

struct SysIdResult {
  std::array<double, 4> beta{};  // K_s, C_s, K_t, I_s
  double mu = 1.0;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Half-car acceleration response to the problem's road inputs for the
// given stiffness/damping/inertia candidate (same RK4 integrator as the
// simulator). Returns a 2-channel series on the measured time grid.
TimeSeries simulate_response(const std::array<double, 4>& beta, const SysIdProblem& prob);

// Band-integrated squared spectrum mismatch
// integral_band (|Y_meas| - mu |Y_sim(beta)|)^2 df, summed over both
// channels, with both spectra smoothed by prob.smoothing.
double cost(const std::array<double, 4>& beta, double mu, const SysIdProblem& prob);

// cost() minimized over mu in closed form; optionally reports the
// minimizing mu.
double cost_best_mu(const std::array<double, 4>& beta, const SysIdProblem& prob,
                    double* mu_out = nullptr);

// Multi-start BFGS on log-parameters (start 0 = prob.init, the rest
// log-normal perturbations of it); returns the lowest-cost start.
SysIdResult identify(const SysIdProblem& prob, Exec exec = Exec::Parallel);

}  // namespace rri
