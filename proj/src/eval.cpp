#include "rri/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rri/common.hpp"

namespace rri {

namespace {

// record index -> 1-based CSV line (one header line before the data)
std::size_t line_of(std::size_t record) { return record + 2; }

}  // namespace

IngestResult ingest_drive(const std::vector<DriveRecord>& records) {
  if (records.size() < 2) throw ValidationError("drive needs at least 2 records");

  std::vector<double> diffs;
  diffs.reserve(records.size() - 1);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double prev = records[i - 1].t;
    const double cur = records[i].t;
    if (cur == prev)
      throw ValidationError("duplicate timestamp " + format_g9(cur) + " at lines " +
                            std::to_string(line_of(i - 1)) + " and " +
                            std::to_string(line_of(i)));
    if (cur < prev)
      throw ValidationError("time goes backwards at line " + std::to_string(line_of(i)));
    diffs.push_back(cur - prev);
  }

  std::vector<double> sorted = diffs;
  std::sort(sorted.begin(), sorted.end());
  const double dt = sorted[sorted.size() / 2];
  const double rate = 1.0 / dt;
  if (std::abs(rate - 50.0) > 5.0)
    throw ValidationError("sample rate " + format_g9(rate) + " Hz outside 50 Hz +/- 10%");

  IngestResult out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double dev = std::abs(diffs[i - 1] - dt);
    if (dev > 0.1 * dt)
      throw ValidationError("non-uniform sampling at line " + std::to_string(line_of(i)) +
                            ": spacing " + format_g9(diffs[i - 1]) + " s vs nominal " +
                            format_g9(dt) + " s");
    if (dev > 1e-3 * dt)
      out.warnings.push_back("line " + std::to_string(line_of(i)) + ": spacing " +
                             format_g9(diffs[i - 1]) + " s deviates from nominal " +
                             format_g9(dt) + " s");
  }
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!(records[i].v > 0.0))
      throw ValidationError("non-positive speed at line " + std::to_string(line_of(i)));

  const double t0 = records.front().t;
  out.trace.dt = dt;
  out.trace.vertical_acc.reserve(records.size());
  out.speed.t.reserve(records.size());
  double station = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DriveRecord& r = records[i];
    out.trace.vertical_acc.push_back(r.az);
    out.trace.lateral_acc.push_back(r.ax);
    out.trace.speed.push_back(r.v);
    if (i > 0) station += 0.5 * (records[i - 1].v + r.v) * diffs[i - 1];
    out.trace.station.push_back(station);
    out.speed.t.push_back(r.t - t0);
    out.speed.v.push_back(r.v);
    out.path.push_back({r.lat, r.lon});
  }
  out.speed.duration = records.back().t - t0;
  out.speed.validate();
  return out;
}

Calibration fit_calibration(const std::vector<std::pair<double, double>>& est_ref) {
  if (est_ref.empty()) throw ValidationError("calibration needs at least one pair");
  double num = 0.0, den = 0.0;
  for (const auto& [e, r] : est_ref) {
    num += e * r;
    den += e * e;
  }
  if (!(den > 0.0)) throw ValidationError("calibration needs a nonzero estimate");
  Calibration c;
  c.slope = num / den;
  return c;
}

namespace {

struct Accum {
  std::vector<double> errs;
  double distance_m = 0.0;

  EvalBin finish(double lo, double hi) const {
    EvalBin b;
    b.lo = lo;
    b.hi = hi;
    b.n = errs.size();
    b.distance_km = distance_m / 1000.0;
    if (errs.empty()) return b;
    double sum = 0.0, sq = 0.0;
    for (double e : errs) {
      sum += e;
      sq += e * e;
    }
    const double n = static_cast<double>(errs.size());
    b.mean_err = sum / n;
    b.rmse = std::sqrt(sq / n);
    if (errs.size() > 1) {
      double dev = 0.0;
      for (double e : errs) dev += (e - b.mean_err) * (e - b.mean_err);
      b.std_err = std::sqrt(dev / (n - 1.0));
    }
    return b;
  }
};

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> align_segments(
    const std::vector<IriSegment>& est, const std::vector<IriSegment>& ref,
    double align_tol_m) {
  if (!(align_tol_m >= 0.0)) throw ValidationError("alignment tolerance must be >= 0");

  // reference starts, sorted for binary-search alignment
  std::vector<std::pair<double, std::size_t>> starts;
  starts.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) starts.push_back({ref[i].start_station, i});
  std::sort(starts.begin(), starts.end());

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t qi = 0; qi < est.size(); ++qi) {
    const IriSegment& e = est[qi];
    if (e.transient || e.partial) continue;
    auto it = std::lower_bound(starts.begin(), starts.end(),
                               std::make_pair(e.start_station - align_tol_m, std::size_t{0}));
    const std::size_t none = static_cast<std::size_t>(-1);
    std::size_t best = none;
    double best_gap = align_tol_m;
    for (; it != starts.end() && it->first <= e.start_station + align_tol_m; ++it) {
      const double gap = std::abs(it->first - e.start_station);
      if (gap <= best_gap) {
        best_gap = gap;
        best = it->second;
      }
    }
    if (best == none || ref[best].transient || ref[best].partial) continue;
    pairs.push_back({qi, best});
  }
  return pairs;
}

EvalReport evaluate(const std::vector<IriSegment>& est, const std::vector<IriSegment>& ref,
                    double align_tol_m) {
  const auto pairs = align_segments(est, ref, align_tol_m);

  const double edges[5] = {0.0, 2.0, 4.0, 6.0, 12.0};
  Accum bins[4];
  Accum overall;
  std::map<long long, std::size_t> hist;
  const double width = 0.1;

  for (const auto& [qi, ri] : pairs) {
    const IriSegment& e = est[qi];
    const IriSegment* best = &ref[ri];

    const double err = e.iri - best->iri;
    const double len = e.end_station - e.start_station;
    overall.errs.push_back(err);
    overall.distance_m += len;
    for (int b = 0; b < 4; ++b)
      if (best->iri >= edges[b] && best->iri < edges[b + 1]) {
        bins[b].errs.push_back(err);
        bins[b].distance_m += len;
        break;
      }
    ++hist[static_cast<long long>(std::floor(err / width))];
  }

  EvalReport rep;
  rep.hist_width = width;
  for (int b = 0; b < 4; ++b) rep.bins.push_back(bins[b].finish(edges[b], edges[b + 1]));
  rep.overall = overall.finish(0.0, 0.0);
  if (!hist.empty()) {
    const long long k_lo = hist.begin()->first;
    const long long k_hi = hist.rbegin()->first;
    for (long long k = k_lo; k <= k_hi; ++k) {
      HistBin hb;
      hb.lo = static_cast<double>(k) * width;
      auto it = hist.find(k);
      hb.count = it == hist.end() ? 0 : it->second;
      rep.histogram.push_back(hb);
    }
  }
  return rep;
}

}  // namespace rri
