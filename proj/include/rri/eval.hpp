#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rri/geomatch.hpp"
#include "rri/iri.hpp"
#include "rri/types.hpp"

namespace rri {

// One row of a measured drive log (nominal 50 Hz IMU + GNSS).
struct DriveRecord {
  double t = 0.0;    // s
  double az = 0.0;   // vertical acceleration, m/s^2
  double ax = 0.0;   // lateral acceleration, m/s^2
  double v = 0.0;    // speed, m/s
  double lat = 0.0;  // deg
  double lon = 0.0;  // deg
};

struct IngestResult {
  SimTrace trace;               // measurements on a uniform grid
  SpeedProfile speed;           // piecewise-linear v(t) through the samples
  std::vector<GeoPoint> path;   // per-sample positions
  std::vector<std::string> warnings;  // e.g. spacing gaps
};

// Validate and convert raw drive records: time strictly increasing (a
// duplicate timestamp names both offending data lines), spacing within
// 50 Hz +/- 10% and uniform, speeds positive. Line numbers in messages
// assume records came from a CSV with a single header line.
IngestResult ingest_drive(const std::vector<DriveRecord>& records);

// Through-origin regression slope mapping estimated to reference
// roughness: slope = sum(est*ref) / sum(est^2).
struct Calibration {
  double slope = 1.0;
};
Calibration fit_calibration(const std::vector<std::pair<double, double>>& est_ref);

struct EvalBin {
  double lo = 0.0, hi = 0.0;   // reference-roughness range
  std::size_t n = 0;
  double mean_err = 0.0;  // mean(est - ref)
  double std_err = 0.0;   // sample std (n-1)
  double rmse = 0.0;
  double distance_km = 0.0;
};

struct HistBin {
  double lo = 0.0;  // bin covers [lo, lo + width)
  std::size_t count = 0;
};

struct EvalReport {
  std::vector<EvalBin> bins;  // [0,2), [2,4), [4,6), [6,12)
  EvalBin overall;            // every aligned pair
  std::vector<HistBin> histogram;
  double hist_width = 0.1;
};

// Pair estimated with reference segments by nearest start station within
// align_tol_m; pairs where either side is flagged transient or partial
// are dropped. Returns (est index, ref index) pairs in est order.
std::vector<std::pair<std::size_t, std::size_t>> align_segments(
    const std::vector<IriSegment>& est, const std::vector<IriSegment>& ref,
    double align_tol_m = 0.5);

// Compare estimated to reference segments (aligned per align_segments).
// Bins partition by reference roughness; references >= 12 only count in
// the overall row. RMSE^2 = mean^2 + std^2 (n-1)/n holds per bin.
EvalReport evaluate(const std::vector<IriSegment>& est, const std::vector<IriSegment>& ref,
                    double align_tol_m = 0.5);

}  // namespace rri
