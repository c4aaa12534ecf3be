#include "rri/geomatch.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace rri {

namespace {

struct Projector {
  double lat0, lon0, coslat;
  explicit Projector(const GeoPoint& origin)
      : lat0(origin.lat), lon0(origin.lon), coslat(std::cos(origin.lat * kPi / 180.0)) {}
  // equirectangular local meters; adequate at the <= few-km scale the
  // gates operate on
  void to_xy(const GeoPoint& p, double* x, double* y) const {
    *x = (p.lon - lon0) * coslat * kPi / 180.0 * kEarthRadiusM;
    *y = (p.lat - lat0) * kPi / 180.0 * kEarthRadiusM;
  }
};

double heading_diff_deg(double a, double b) {
  double d = std::fmod(std::abs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

struct XY {
  double x, y;
};

std::vector<XY> project_all(const std::vector<GeoPoint>& pts, const Projector& proj) {
  std::vector<XY> xy(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) proj.to_xy(pts[i], &xy[i].x, &xy[i].y);
  return xy;
}

// nearest reference point within d_max whose heading agrees; ties in
// distance resolve to the smaller index
template <typename Candidates>
Match best_match(const XY& q, double q_heading, const std::vector<XY>& ref,
                 const std::vector<double>& ref_headings, const MatchConfig& cfg,
                 const Candidates& candidates) {
  Match m;
  double best_d = cfg.d_max;
  std::size_t best_i = 0;
  bool found = false;
  for (std::size_t i : candidates) {
    const double dx = ref[i].x - q.x, dy = ref[i].y - q.y;
    const double d = std::hypot(dx, dy);
    if (d >= cfg.d_max) continue;
    if (heading_diff_deg(q_heading, ref_headings[i]) >= cfg.phi_max) continue;
    if (!found || d < best_d || (d == best_d && i < best_i)) {
      best_d = d;
      best_i = i;
      found = true;
    }
  }
  if (found) {
    m.ref_index = best_i;
    m.distance = best_d;
    m.heading_diff = heading_diff_deg(q_heading, ref_headings[best_i]);
  } else {
    m.distance = std::numeric_limits<double>::quiet_NaN();
    m.heading_diff = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

struct AllIndices {
  std::size_t n;
  struct Iter {
    std::size_t i;
    bool operator!=(const Iter& o) const { return i != o.i; }
    void operator++() { ++i; }
    std::size_t operator*() const { return i; }
  };
  Iter begin() const { return {0}; }
  Iter end() const { return {n}; }
};

}  // namespace

std::vector<double> headings(const std::vector<GeoPoint>& path) {
  std::vector<double> h(path.size(), 0.0);
  if (path.size() < 2) return h;
  const Projector proj(path.front());
  const std::vector<XY> xy = project_all(path, proj);
  std::vector<bool> defined(path.size(), false);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dx = xy[i + 1].x - xy[i].x, dy = xy[i + 1].y - xy[i].y;
    if (std::abs(dx) < 1e-9 && std::abs(dy) < 1e-9) continue;  // repeated point
    double deg = std::atan2(dx, dy) * 180.0 / kPi;  // compass: 0 = north, 90 = east
    if (deg < 0.0) deg += 360.0;
    h[i] = deg;
    defined[i] = true;
  }
  // the last point continues its inbound heading; repeats carry forward
  double last = 0.0;
  bool seen = false;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (defined[i]) {
      last = h[i];
      seen = true;
    } else {
      h[i] = last;
    }
  }
  if (seen) {  // leading repeats take the first defined heading
    double first = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
      if (defined[i]) {
        first = h[i];
        break;
      }
    for (std::size_t i = 0; i < path.size() && !defined[i]; ++i) h[i] = first;
  }
  return h;
}

MatchResult match(const std::vector<GeoPoint>& query, const std::vector<GeoPoint>& reference,
                  const MatchConfig& cfg, Exec exec) {
  if (!(cfg.d_max > 0.0) || !(cfg.phi_max > 0.0))
    throw ValidationError("match: gates must be positive");
  MatchResult res;
  res.matches.resize(query.size());
  if (query.empty() || reference.empty()) return res;

  const Projector proj(reference.front());
  const std::vector<XY> q_xy = project_all(query, proj);
  const std::vector<XY> r_xy = project_all(reference, proj);
  const std::vector<double> q_head = headings(query);
  const std::vector<double> r_head = headings(reference);

  // uniform grid hash, cell size d_max: candidates live in the 3x3
  // neighborhood of the query's cell
  const double cell = cfg.d_max;
  auto key = [&](double x, double y) {
    const auto cx = static_cast<long long>(std::floor(x / cell));
    const auto cy = static_cast<long long>(std::floor(y / cell));
    return (static_cast<unsigned long long>(cx) << 32) ^
           static_cast<unsigned long long>(static_cast<unsigned>(cy));
  };
  std::unordered_map<unsigned long long, std::vector<std::size_t>> grid;
  grid.reserve(reference.size() * 2);
  for (std::size_t i = 0; i < reference.size(); ++i)
    grid[key(r_xy[i].x, r_xy[i].y)].push_back(i);

  const auto n_query = static_cast<long long>(query.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
  for (long long qi = 0; qi < n_query; ++qi) {
    std::vector<std::size_t> cand;
    const double qx = q_xy[qi].x, qy = q_xy[qi].y;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find(key(qx + dx * cell, qy + dy * cell));
        if (it != grid.end()) cand.insert(cand.end(), it->second.begin(), it->second.end());
      }
    res.matches[qi] = best_match(q_xy[qi], q_head[qi], r_xy, r_head, cfg, cand);
  }
  for (const Match& m : res.matches)
    if (m.ref_index) ++res.n_matched;
  return res;
}

MatchResult match_reference(const std::vector<GeoPoint>& query,
                            const std::vector<GeoPoint>& reference, const MatchConfig& cfg) {
  if (!(cfg.d_max > 0.0) || !(cfg.phi_max > 0.0))
    throw ValidationError("match: gates must be positive");
  MatchResult res;
  res.matches.resize(query.size());
  if (query.empty() || reference.empty()) return res;
  const Projector proj(reference.front());
  const std::vector<XY> q_xy = project_all(query, proj);
  const std::vector<XY> r_xy = project_all(reference, proj);
  const std::vector<double> q_head = headings(query);
  const std::vector<double> r_head = headings(reference);
  for (std::size_t qi = 0; qi < query.size(); ++qi)
    res.matches[qi] =
        best_match(q_xy[qi], q_head[qi], r_xy, r_head, cfg, AllIndices{reference.size()});
  for (const Match& m : res.matches)
    if (m.ref_index) ++res.n_matched;
  return res;
}

}  // namespace rri
