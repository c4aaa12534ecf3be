#pragma once

#include "rri/kf.hpp"
#include "rri/types.hpp"

namespace rri {

struct IriConfig {
  double L = 40.0;  // segment length, m
  double S = 0.1;   // sample spacing, m
};

struct IriSegment {
  double start_station = 0.0;  // m
  double end_station = 0.0;    // m
  double iri = 0.0;            // mm/m
  std::optional<std::array<double, 2>> geotag;  // segment midpoint (lat, lon)
  std::size_t n_samples = 0;
  bool transient = false;  // contains the filter settling interval
  bool partial = false;    // trailing segment shorter than L
};

// Roughness index per L-meter segment of a single-track profile sampled
// at spacing cfg.S: the reference quarter-car is propagated over the
// profile at 80 km/h with ZOH input and the rectified rattle-space
// velocity is averaged per segment (reported in mm/m). The recursion
// starts from zero state; the first segment is flagged transient.
std::vector<IriSegment> iri_from_profile(const RoadProfile& profile, const IriConfig& cfg);

// Sample-by-sample mean of left and right tracks.
RoadProfile average_tracks(const RoadProfile& profile);

// Resample a time-indexed series onto equally spaced stations iS using
// the recursion t_i = t_{i-1} + S / v(t_i), solved with one fixed-point
// correction (v evaluated at the predicted t_i), then linear
// interpolation between time samples. Station 0 is emitted at the series
// start; output truncates when t_i passes the series end.
std::vector<double> spatial_resample(const std::vector<double>& u, double t0, double T,
                                     const SpeedProfile& speed, double S);

// Full estimate-to-index pipeline: optional high-pass on the
// reconstructed elevation (removes the unobservable drift the
// acceleration-only filter leaves below ~0.5 Hz), spatial resampling,
// segment roughness, then the calibration slope.
std::vector<IriSegment> iri_from_estimates(const std::vector<InputEstimate>& estimates,
                                           const SpeedProfile& speed, const IriConfig& cfg,
                                           double calibration = 1.0, int component = 0,
                                           double profile_hpf_hz = 0.0);

}  // namespace rri
