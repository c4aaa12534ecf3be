#include "rri/simulate.hpp"

#include <cmath>

#include "rri/models.hpp"
#include "rri/rng.hpp"

namespace rri {

namespace {

// linear interpolation on the sample grid, clamped at the ends
double track_at(const std::vector<double>& z, double S, double s) {
  if (s <= 0.0) return z.front();
  const double pos = s / S;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= z.size()) return z.back();
  const double a = pos - static_cast<double>(i);
  return z[i] + a * (z[i + 1] - z[i]);
}

}  // namespace

SimTrace drive(const RoadProfile& profile, const SpeedProfile& speed,
               const VehicleParams& params, Model model, double dt, double noise_std,
               std::uint64_t seed) {
  profile.validate();
  speed.validate();
  if (!(dt > 0.0)) throw ValidationError("drive: dt must be positive");
  if (noise_std < 0.0) throw ValidationError("drive: negative noise std");
  const bool hc = (model == Model::HC);
  if (hc && !profile.two_track())
    throw ValidationError("drive: half-car needs a two-track profile");
  const StateSpace sys = hc ? build_hc(params) : build_qc(params);

  // quarter-car rides the track average
  std::vector<double> avg;
  const std::vector<double>* tl = &profile.left;
  const std::vector<double>* tr = &profile.right;
  if (!hc) {
    if (profile.two_track()) {
      avg.resize(profile.left.size());
      for (std::size_t i = 0; i < avg.size(); ++i)
        avg[i] = 0.5 * (profile.left[i] + profile.right[i]);
      tl = &avg;
    }
    tr = nullptr;
  }

  const std::size_t n_planned = static_cast<std::size_t>(std::floor(speed.duration / dt + 1e-9)) + 1;
  const double s_max = profile.length();

  SimTrace out;
  out.dt = dt;

  // cut the drive where the wheel would run past the last profile sample
  std::size_t n = n_planned;
  for (std::size_t k = 0; k < n_planned; ++k) {
    if (speed.station(k * dt) > s_max + 1e-9) {
      n = k;
      out.truncated = true;
      break;
    }
  }
  if (n < 2) throw ValidationError("drive: profile shorter than one sample step");

  const int substeps = 10;
  const double h = dt / substeps;
  const Eigen::MatrixXd& A = sys.A;
  const Eigen::MatrixXd& B = sys.B;
  const int nx = sys.n(), nu = sys.m();

  auto input_at = [&](double time) {
    const double s = speed.station(time);
    Eigen::VectorXd u(nu);
    u(0) = track_at(*tl, profile.S, s);
    if (nu > 1) u(1) = track_at(*tr, profile.S, s);
    return u;
  };

  // static equilibrium for the elevation under the wheels at station 0
  Eigen::VectorXd u0 = input_at(0.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nx);
  if (hc) {
    const double l = *params.l;
    x(0) = 0.5 * (u0(0) + u0(1));
    x(2) = (u0(1) - u0(0)) / (2.0 * l);
    x(4) = u0(0);
    x(6) = u0(1);
  } else {
    x(0) = u0(0);
    x(2) = u0(0);
  }

  Rng rng(seed);
  out.vertical_acc.resize(n);
  out.lateral_acc.resize(n);
  out.speed.resize(n);
  out.station.resize(n);
  out.true_left.resize(n);
  if (hc) out.true_right.resize(n);

  Eigen::VectorXd k1(nx), k2(nx), k3(nx), k4(nx);
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = k * dt;
    const Eigen::VectorXd y = sys.C * x;
    out.vertical_acc[k] = y(0) + (noise_std > 0.0 ? noise_std * rng.normal() : 0.0);
    out.lateral_acc[k] =
        hc ? y(1) + (noise_std > 0.0 ? noise_std * rng.normal() : 0.0) : 0.0;
    out.speed[k] = speed.at(tk);
    out.station[k] = speed.station(tk);
    Eigen::VectorXd uk = input_at(tk);
    out.true_left[k] = uk(0);
    if (hc) out.true_right[k] = uk(1);

    if (k + 1 == n) break;
    for (int s = 0; s < substeps; ++s) {
      const double t0 = tk + s * h;
      const Eigen::VectorXd ua = input_at(t0);
      const Eigen::VectorXd um = input_at(t0 + 0.5 * h);
      const Eigen::VectorXd ub = input_at(t0 + h);
      k1 = A * x + B * ua;
      k2 = A * (x + 0.5 * h * k1) + B * um;
      k3 = A * (x + 0.5 * h * k2) + B * um;
      k4 = A * (x + h * k3) + B * ub;
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return out;
}

}  // namespace rri
