#include "rri/iri.hpp"

#include <cmath>

#include "rri/discretize.hpp"
#include "rri/models.hpp"
#include "rri/signal.hpp"

namespace rri {

std::vector<IriSegment> iri_from_profile(const RoadProfile& profile, const IriConfig& cfg) {
  profile.validate();
  if (profile.two_track())
    throw ValidationError("iri_from_profile: single track expected (average_tracks first)");
  if (std::abs(profile.S - cfg.S) > 1e-9 * cfg.S)
    throw ValidationError("iri_from_profile: profile spacing differs from cfg.S (resample first)");
  if (!(cfg.L > 0.0) || !(cfg.S > 0.0) || cfg.L < cfg.S)
    throw ValidationError("iri_from_profile: need L >= S > 0");
  if (profile.length() + 1e-9 < cfg.L)
    throw ValidationError("iri_from_profile: profile shorter than one segment");

  const std::vector<double>& z = profile.left;
  const double Ts = cfg.S / kIriSpeed;
  const DiscreteStateSpace dss = discretize(build_qc(golden_car_params()), Ts);
  const Eigen::RowVector4d cxi = rattle_output();
  const auto per_segment = static_cast<std::size_t>(std::lround(cfg.L / cfg.S));

  std::vector<IriSegment> segments;
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  double acc = 0.0;
  std::size_t in_seg = 0;
  std::size_t seg_start_idx = 0;

  auto flush = [&](std::size_t end_idx, bool partial) {
    IriSegment seg;
    seg.start_station = static_cast<double>(seg_start_idx) * cfg.S;
    seg.end_station = static_cast<double>(end_idx) * cfg.S;
    seg.iri = acc * cfg.S / ((seg.end_station - seg.start_station) * kIriSpeed) * 1000.0;
    seg.n_samples = in_seg;
    seg.partial = partial;
    seg.transient = segments.empty();  // settling interval of the zero start
    if (!profile.geotags.empty()) {
      const std::size_t mid = (seg_start_idx + end_idx) / 2;
      seg.geotag = profile.geotags[std::min(mid, profile.geotags.size() - 1)];
    }
    segments.push_back(seg);
    acc = 0.0;
    in_seg = 0;
    seg_start_idx = end_idx;
  };

  for (std::size_t i = 1; i < z.size(); ++i) {
    x = dss.F * x + dss.G * z[i - 1];
    acc += std::abs(cxi.dot(x));
    ++in_seg;
    if (in_seg == per_segment) flush(i, false);
  }
  if (in_seg > 0) flush(z.size() - 1, true);
  return segments;
}

RoadProfile average_tracks(const RoadProfile& profile) {
  profile.validate();
  if (!profile.two_track())
    throw ValidationError("average_tracks: two tracks required");
  RoadProfile out;
  out.S = profile.S;
  out.geotags = profile.geotags;
  out.left.resize(profile.left.size());
  for (std::size_t i = 0; i < out.left.size(); ++i)
    out.left[i] = 0.5 * (profile.left[i] + profile.right[i]);
  return out;
}

std::vector<double> spatial_resample(const std::vector<double>& u, double t0, double T,
                                     const SpeedProfile& speed, double S) {
  if (!(T > 0.0) || !(S > 0.0)) throw ValidationError("spatial_resample: need T, S > 0");
  if (u.size() < 2) throw ValidationError("spatial_resample: need at least 2 samples");
  const std::size_t n = u.size();
  std::vector<double> out;
  out.push_back(u.front());  // station 0 at the series start
  double t = t0;
  for (;;) {
    const double v0 = speed.at(t);
    if (!(v0 > 0.0)) throw ValidationError("spatial_resample: non-positive speed");
    const double t_pred = t + S / v0;
    const double v1 = speed.at(t_pred);
    if (!(v1 > 0.0)) throw ValidationError("spatial_resample: non-positive speed");
    t += S / v1;  // one fixed-point correction of t_i = t_{i-1} + S/v(t_i)
    double pos = (t - t0) / T;
    auto k = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(k);
    if (frac > 1.0 - 1e-9) {  // snap grid-aligned hits
      ++k;
      frac = 0.0;
    } else if (frac < 1e-9) {
      frac = 0.0;
    }
    if (k + 1 >= n) {
      if (k + 1 == n && frac == 0.0) out.push_back(u[k]);
      break;  // past the series end
    }
    out.push_back(u[k] + frac * (u[k + 1] - u[k]));
  }
  return out;
}

std::vector<IriSegment> iri_from_estimates(const std::vector<InputEstimate>& estimates,
                                           const SpeedProfile& speed, const IriConfig& cfg,
                                           double calibration, int component,
                                           double profile_hpf_hz) {
  if (estimates.size() < 2)
    throw ValidationError("iri_from_estimates: need at least 2 estimates");
  const double T = estimates[1].t - estimates[0].t;
  if (!(T > 0.0)) throw ValidationError("iri_from_estimates: estimates need increasing t");
  std::vector<double> u = input_component(estimates, component);
  if (profile_hpf_hz > 0.0) u = highpass(u, profile_hpf_hz, 1.0 / T);
  RoadProfile prof;
  prof.S = cfg.S;
  prof.left = spatial_resample(u, estimates.front().t, T, speed, cfg.S);
  std::vector<IriSegment> segments = iri_from_profile(prof, cfg);
  for (auto& seg : segments) seg.iri *= calibration;
  return segments;
}

}  // namespace rri
