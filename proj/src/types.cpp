#include "rri/types.hpp"

#include <algorithm>
#include <cmath>

namespace rri {

void RoadProfile::validate() const {
  if (!(S > 0.0)) throw ValidationError("road profile: sample spacing must be positive");
  if (left.size() < 2) throw ValidationError("road profile: need at least 2 samples");
  if (!right.empty() && right.size() != left.size())
    throw ValidationError("road profile: left/right track lengths differ");
  if (!geotags.empty() && geotags.size() != left.size())
    throw ValidationError("road profile: geotag count does not match samples");
}

SpeedProfile SpeedProfile::constant(double speed, double dur) {
  SpeedProfile sp;
  sp.t = {0.0};
  sp.v = {speed};
  sp.duration = dur;
  return sp;
}

void SpeedProfile::validate() const {
  if (t.empty() || t.size() != v.size())
    throw ValidationError("speed profile: need matching t/v breakpoints");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0)) throw ValidationError("speed profile: v must be positive everywhere");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < t[i - 1]) throw ValidationError("speed profile: breakpoints must be ordered");
  if (!(duration >= 0.0)) throw ValidationError("speed profile: negative duration");
}

double SpeedProfile::at(double time) const {
  if (time <= t.front()) return v.front();
  if (time >= t.back()) return v.back();
  // first breakpoint strictly past `time`; duplicates (step changes)
  // collapse so the post-step value applies from the jump onward
  const std::size_t i = std::upper_bound(t.begin(), t.end(), time) - t.begin();
  const double span = t[i] - t[i - 1];
  const double a = (time - t[i - 1]) / span;
  return v[i - 1] + a * (v[i] - v[i - 1]);
}

double SpeedProfile::station(double time) const {
  if (time <= 0.0) return 0.0;
  double s = 0.0;
  const double head = std::min(time, std::max(t.front(), 0.0));
  if (head > 0.0) s += v.front() * head;  // constant before the first breakpoint
  if (time <= t.front()) return s;
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double a = std::max(t[j - 1], 0.0);
    const double b = std::min(t[j], time);
    if (b > a) {
      const double span = t[j] - t[j - 1];
      const double va = (span <= 0.0) ? v[j] : v[j - 1] + (a - t[j - 1]) / span * (v[j] - v[j - 1]);
      const double vb = (span <= 0.0) ? v[j] : v[j - 1] + (b - t[j - 1]) / span * (v[j] - v[j - 1]);
      s += 0.5 * (va + vb) * (b - a);
    }
    if (t[j] >= time) return s;
  }
  s += v.back() * (time - std::max(t.back(), 0.0));  // constant past the last breakpoint
  return s;
}

}  // namespace rri
