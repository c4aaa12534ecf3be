#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rri/common.hpp"

namespace rri {

// Suspension parameters. I_s (roll inertia) and l (half track width) are
// only needed by the half-car model. K_s and C_s may be zero (rigid-less
// suspension edge case); masses and tire stiffness must be positive.
struct VehicleParams {
  double m_s = 0.0;  // sprung mass, kg (full vehicle)
  double m_u = 0.0;  // unsprung mass per wheel, kg
  double K_s = 0.0;  // suspension stiffness per wheel, N/m
  double C_s = 0.0;  // suspension damping per wheel, Ns/m
  double K_t = 0.0;  // tire stiffness per wheel, N/m
  std::optional<double> I_s;  // sprung roll inertia, kg m^2 (half-car)
  std::optional<double> l;    // half track width, m (half-car)

  void validate(bool need_half_car = false) const;
};

struct StateSpace {
  Eigen::MatrixXd A, B, C;
  std::vector<std::string> state_labels;
  std::vector<std::string> input_labels;
  std::vector<std::string> output_labels;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }
};

struct DiscreteStateSpace {
  Eigen::MatrixXd F, G, H;
  double T = 0.0;  // sample time, s
};

// Uniformly sampled multichannel signal.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<std::vector<double>> channels;

  std::size_t n_samples() const { return channels.empty() ? 0 : channels[0].size(); }
  std::size_t n_channels() const { return channels.size(); }
};

// One-sided amplitude spectrum per channel; bin k covers frequency k*df.
struct AmplitudeSpectrum {
  double df = 0.0;
  std::vector<std::vector<double>> magnitudes;
};

enum class RoadClass { A, B, C, D, E };

RoadClass road_class_from_string(const std::string& s);
std::string to_string(RoadClass c);

// Spatially sampled elevation profile. `right` empty means a single track
// (or an already-averaged one). Geotags, when present, give (lat, lon)
// per sample.
struct RoadProfile {
  double S = 0.1;  // sample spacing, m
  std::vector<double> left;
  std::vector<double> right;
  std::vector<std::array<double, 2>> geotags;

  bool two_track() const { return !right.empty(); }
  double length() const { return left.empty() ? 0.0 : S * static_cast<double>(left.size() - 1); }
  void validate() const;
};

// Piecewise-linear speed profile v(t) over a drive of `duration` seconds.
// Breakpoints sharing a timestamp model a step change. Outside the
// breakpoint range the ends extend as constants.
struct SpeedProfile {
  std::vector<double> t;
  std::vector<double> v;
  double duration = 0.0;

  static SpeedProfile constant(double speed, double dur);

  double at(double time) const;
  // distance traveled on [0, time]; exact for the piecewise-linear v
  double station(double time) const;
  void validate() const;
};

// Measured (or simulated) drive: accelerations, speed, odometry, and --
// when produced by the simulator -- the road inputs actually applied.
struct SimTrace {
  double dt = 0.0;
  std::vector<double> vertical_acc;  // m/s^2
  std::vector<double> lateral_acc;   // m/s^2 (zeros for quarter-car runs)
  std::vector<double> speed;         // m/s
  std::vector<double> station;       // m
  std::vector<double> true_left;     // m, empty for measured data
  std::vector<double> true_right;    // m, empty for quarter-car/measured
  bool truncated = false;            // drive ran off the profile end

  std::size_t n_samples() const { return vertical_acc.size(); }
};

enum class Model { QC, HC };
enum class Channels { Vertical, Lateral, Both };

Model model_from_string(const std::string& s);
Channels channels_from_string(const std::string& s);

}  // namespace rri
