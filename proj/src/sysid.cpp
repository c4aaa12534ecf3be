#include "rri/sysid.hpp"

#include <cmath>

#include "rri/bfgs.hpp"
#include "rri/models.hpp"
#include "rri/rng.hpp"
#include "rri/signal.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rri {

void SysIdProblem::validate() const {
  if (measured.n_channels() != 2 || road_inputs.n_channels() != 2)
    throw ValidationError("sysid: measured and road_inputs must both have 2 channels");
  if (measured.n_samples() != road_inputs.n_samples() || measured.n_samples() < 16)
    throw ValidationError("sysid: measured/road_inputs sample counts must match (>= 16)");
  if (!(measured.dt > 0.0) || std::abs(measured.dt - road_inputs.dt) > 1e-12)
    throw ValidationError("sysid: series must share a positive dt");
  if (!(m_s > 0.0) || !(m_u > 0.0) || !(l > 0.0))
    throw ValidationError("sysid: fixed m_s, m_u, l must be positive");
  if (!(0.0 <= f_lo && f_lo < f_hi)) throw ValidationError("sysid: bad frequency band");
  for (double b : init)
    if (!(b > 0.0)) throw ValidationError("sysid: init parameters must be positive");
  if (multistart < 1) throw ValidationError("sysid: multistart must be >= 1");
}

namespace {

VehicleParams candidate_params(const std::array<double, 4>& beta, const SysIdProblem& prob) {
  VehicleParams p;
  p.m_s = prob.m_s;
  p.m_u = prob.m_u;
  p.K_s = beta[0];
  p.C_s = beta[1];
  p.K_t = beta[2];
  p.I_s = beta[3];
  p.l = prob.l;
  return p;
}

// smoothed band magnitudes per channel plus trapezoid quadrature weights
struct BandSpectrum {
  std::vector<std::vector<double>> mag;  // per channel, band bins only
  std::vector<double> w;                 // trapezoid weights * df
};

BandSpectrum band_spectrum(const TimeSeries& ts, const SysIdProblem& prob) {
  AmplitudeSpectrum spec = smooth_spectrum(amplitude_spectrum(ts), prob.smoothing);
  const auto n_bins = spec.magnitudes[0].size();
  std::size_t k_lo = static_cast<std::size_t>(std::ceil(prob.f_lo / spec.df - 1e-9));
  std::size_t k_hi = static_cast<std::size_t>(std::floor(prob.f_hi / spec.df + 1e-9));
  k_hi = std::min(k_hi, n_bins - 1);
  if (k_lo + 1 >= k_hi) throw ValidationError("sysid: frequency band holds too few bins");
  BandSpectrum out;
  const std::size_t nb = k_hi - k_lo + 1;
  out.w.assign(nb, spec.df);
  out.w.front() = 0.5 * spec.df;
  out.w.back() = 0.5 * spec.df;
  for (const auto& mag : spec.magnitudes)
    out.mag.emplace_back(mag.begin() + k_lo, mag.begin() + k_hi + 1);
  return out;
}

double band_cost(const BandSpectrum& meas, const BandSpectrum& sim, double mu) {
  double c = 0.0;
  for (std::size_t ch = 0; ch < meas.mag.size(); ++ch)
    for (std::size_t k = 0; k < meas.w.size(); ++k) {
      const double d = meas.mag[ch][k] - mu * sim.mag[ch][k];
      c += meas.w[k] * d * d;
    }
  return c;
}

// closed-form minimizer of band_cost over mu (band inner products)
double best_mu(const BandSpectrum& meas, const BandSpectrum& sim) {
  double num = 0.0, den = 0.0;
  for (std::size_t ch = 0; ch < meas.mag.size(); ++ch)
    for (std::size_t k = 0; k < meas.w.size(); ++k) {
      num += meas.w[k] * meas.mag[ch][k] * sim.mag[ch][k];
      den += meas.w[k] * sim.mag[ch][k] * sim.mag[ch][k];
    }
  if (!(den > 0.0) || !std::isfinite(den)) return 0.0;
  return num / den;
}

}  // namespace

TimeSeries simulate_response(const std::array<double, 4>& beta, const SysIdProblem& prob) {
  prob.validate();
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b))
      throw ValidationError("sysid: candidate parameters must be positive finite");
  const StateSpace sys = build_hc(candidate_params(beta, prob));
  const double dt = prob.measured.dt;
  const std::size_t n = prob.measured.n_samples();
  const std::vector<double>& ul = prob.road_inputs.channels[0];
  const std::vector<double>& ur = prob.road_inputs.channels[1];

  auto input_at = [&](double time) {
    const double pos = time / dt;
    if (pos <= 0.0) return Eigen::Vector2d(ul.front(), ur.front());
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= n) return Eigen::Vector2d(ul.back(), ur.back());
    const double a = pos - static_cast<double>(k);
    return Eigen::Vector2d(ul[k] + a * (ul[k + 1] - ul[k]), ur[k] + a * (ur[k + 1] - ur[k]));
  };

  // static equilibrium start, as in the drive simulator
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  {
    const Eigen::Vector2d u0 = input_at(0.0);
    x(0) = 0.5 * (u0(0) + u0(1));
    x(2) = (u0(1) - u0(0)) / (2.0 * prob.l);
    x(4) = u0(0);
    x(6) = u0(1);
  }

  TimeSeries out;
  out.t0 = prob.measured.t0;
  out.dt = dt;
  out.channels.assign(2, std::vector<double>(n));
  const int substeps = 10;
  const double h = dt / substeps;
  Eigen::VectorXd k1(8), k2(8), k3(8), k4(8);
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::VectorXd y = sys.C * x;
    out.channels[0][k] = y(0);
    out.channels[1][k] = y(1);
    if (k + 1 == n) break;
    const double tk = static_cast<double>(k) * dt;
    for (int s = 0; s < substeps; ++s) {
      const double t0 = tk + s * h;
      const Eigen::Vector2d ua = input_at(t0);
      const Eigen::Vector2d um = input_at(t0 + 0.5 * h);
      const Eigen::Vector2d ub = input_at(t0 + h);
      k1 = sys.A * x + sys.B * ua;
      k2 = sys.A * (x + 0.5 * h * k1) + sys.B * um;
      k3 = sys.A * (x + 0.5 * h * k2) + sys.B * um;
      k4 = sys.A * (x + h * k3) + sys.B * ub;
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return out;
}

double cost(const std::array<double, 4>& beta, double mu, const SysIdProblem& prob) {
  const BandSpectrum meas = band_spectrum(prob.measured, prob);
  const BandSpectrum sim = band_spectrum(simulate_response(beta, prob), prob);
  return band_cost(meas, sim, mu);
}

double cost_best_mu(const std::array<double, 4>& beta, const SysIdProblem& prob,
                    double* mu_out) {
  const BandSpectrum meas = band_spectrum(prob.measured, prob);
  const BandSpectrum sim = band_spectrum(simulate_response(beta, prob), prob);
  const double mu = best_mu(meas, sim);
  if (mu_out) *mu_out = mu;
  return band_cost(meas, sim, mu);
}

SysIdResult identify(const SysIdProblem& prob, Exec exec) {
  prob.validate();
  const BandSpectrum meas = band_spectrum(prob.measured, prob);

  auto objective = [&](const Eigen::VectorXd& theta) {
    std::array<double, 4> beta;
    for (int i = 0; i < 4; ++i) {
      beta[i] = std::exp(theta(i));
      // off-scale candidates (line-search overshoot) score as a wall,
      // never as an exception: this runs inside an OpenMP region
      if (!std::isfinite(beta[i]) || !(beta[i] > 0.0)) return 1e300;
    }
    const BandSpectrum sim = band_spectrum(simulate_response(beta, prob), prob);
    const double c = band_cost(meas, sim, best_mu(meas, sim));
    return std::isfinite(c) ? c : 1e300;
  };

  // start points: the given init plus log-normal perturbations of it,
  // drawn in a fixed order so the result is execution-policy independent
  std::vector<Eigen::VectorXd> starts(prob.multistart);
  Rng rng(prob.seed);
  for (int j = 0; j < prob.multistart; ++j) {
    Eigen::VectorXd th(4);
    for (int i = 0; i < 4; ++i) {
      th(i) = std::log(prob.init[i]);
      if (j > 0) th(i) += 0.25 * rng.normal();
    }
    starts[j] = th;
  }

  BfgsOptions opt;
  opt.max_iters = prob.max_iters;
  std::vector<BfgsResult> results(prob.multistart);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
#endif
  for (int j = 0; j < prob.multistart; ++j) results[j] = minimize_bfgs(objective, starts[j], opt);

  int best = 0;
  for (int j = 1; j < prob.multistart; ++j)
    if (results[j].f < results[best].f) best = j;

  SysIdResult res;
  for (int i = 0; i < 4; ++i) res.beta[i] = std::exp(results[best].x(i));
  res.cost = cost_best_mu(res.beta, prob, &res.mu);
  res.iterations = results[best].iterations;
  res.converged = results[best].converged;
  return res;
}

}  // namespace rri
