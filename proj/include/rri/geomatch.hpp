#pragma once

#include <optional>
#include <vector>

#include "rri/common.hpp"

namespace rri {

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

struct MatchConfig {
  double d_max = 4.0;    // meters
  double phi_max = 45.0; // degrees
};

struct Match {
  std::optional<std::size_t> ref_index;
  double distance = 0.0;     // m, valid when matched
  double heading_diff = 0.0; // deg, valid when matched
};

struct MatchResult {
  std::vector<Match> matches;  // one per query point
  std::size_t n_matched = 0;
};

// Path heading per point in compass degrees [0, 360): forward difference
// to the next point, one-sided at the last point. Repeated identical
// points carry the last defined heading forward (leading repeats take
// the first defined one; a fully degenerate path gets heading 0).
std::vector<double> headings(const std::vector<GeoPoint>& path);

// Associate each query point with the nearest reference point that lies
// within d_max meters (equirectangular local projection) and whose path
// heading agrees within phi_max degrees. Uses a uniform grid hash of
// cell size d_max; ties in distance resolve to the smallest reference
// index, identical to a brute-force scan.
MatchResult match(const std::vector<GeoPoint>& query, const std::vector<GeoPoint>& reference,
                  const MatchConfig& cfg, Exec exec = Exec::Parallel);

// Brute-force reference path (equality oracle and benchmark baseline).
MatchResult match_reference(const std::vector<GeoPoint>& query,
                            const std::vector<GeoPoint>& reference, const MatchConfig& cfg);

}  // namespace rri
