#include "rri/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rri/csvio.hpp"
#include "rri/eval.hpp"
#include "rri/geomatch.hpp"
#include "rri/iri.hpp"
#include "rri/kf.hpp"
#include "rri/models.hpp"
#include "rri/signal.hpp"
#include "rri/simulate.hpp"
#include "rri/synth.hpp"
#include "rri/sysid.hpp"

namespace rri {

namespace {

double parse_num(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ValidationError("bad number '" + s + "' in " + what);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

// default geotag layout for synthesized roads: due north from (57, 12)
std::array<double, 2> north_path(double station) {
  return {57.0 + station / 111320.0, 12.0};
}

// --profile accepts a CSV path or synth:CLASS:LENGTH[:SPACING[:SEED]]
RoadProfile load_profile(const std::string& spec) {
  if (spec.rfind("synth:", 0) == 0) {
    const auto f = split(spec, ':');
    if (f.size() < 3 || f.size() > 5)
      throw ValidationError("synth spec is synth:CLASS:LENGTH[:SPACING[:SEED]]");
    const RoadClass cls = road_class_from_string(f[1]);
    const double length = parse_num(f[2], "synth length");
    const double S = f.size() > 3 ? parse_num(f[3], "synth spacing") : 0.1;
    const auto seed = f.size() > 4
                          ? static_cast<std::uint64_t>(parse_num(f[4], "synth seed"))
                          : std::uint64_t{1};
    RoadProfile p = synth_profile(cls, length, S, seed);
    p.geotags.resize(p.left.size());
    for (std::size_t i = 0; i < p.left.size(); ++i)
      p.geotags[i] = north_path(static_cast<double>(i) * S);
    return p;
  }
  return read_profile_csv(spec);
}

// --speed accepts a constant (m/s) or breakpoints t:v,t:v,...
SpeedProfile parse_speed(const std::string& spec) {
  SpeedProfile sp;
  if (spec.find(':') == std::string::npos) {
    sp.t = {0.0};
    sp.v = {parse_num(spec, "speed")};
    return sp;
  }
  for (const std::string& part : split(spec, ',')) {
    const auto tv = split(part, ':');
    if (tv.size() != 2) throw ValidationError("speed breakpoints are t:v,t:v,...");
    sp.t.push_back(parse_num(tv[0], "speed breakpoint time"));
    sp.v.push_back(parse_num(tv[1], "speed breakpoint value"));
  }
  return sp;
}

// time at which the drive reaches `length` meters (bisection; station()
// is continuous and strictly increasing for positive speeds)
double traverse_time(const SpeedProfile& sp, double length) {
  double hi = 1.0;
  while (sp.station(hi) < length) {
    hi *= 2.0;
    if (hi > 1e9) throw ValidationError("speed profile never covers the road");
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sp.station(mid) < length ? lo : hi) = mid;
  }
  return hi;
}

double lerp_series(const std::vector<double>& y, double S, double s) {
  const double x = s / S;
  if (x <= 0.0 || y.size() == 1) return y.front();
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= y.size()) return y.back();
  const double f = x - static_cast<double>(i);
  return y[i] + f * (y[i + 1] - y[i]);
}

std::array<double, 2> geotag_at(const RoadProfile& p, double station) {
  const double x = station / p.S;
  const std::size_t n = p.geotags.size();
  if (x <= 0.0 || n == 1) return p.geotags.front();
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= n) return p.geotags.back();
  const double f = x - static_cast<double>(i);
  return {p.geotags[i][0] + f * (p.geotags[i + 1][0] - p.geotags[i][0]),
          p.geotags[i][1] + f * (p.geotags[i + 1][1] - p.geotags[i][1])};
}

std::array<double, 2> path_at_station(const std::vector<double>& st,
                                      const std::vector<GeoPoint>& path, double s) {
  auto it = std::upper_bound(st.begin(), st.end(), s);
  auto hi = static_cast<std::size_t>(std::distance(st.begin(), it));
  hi = std::min(hi, st.size() - 1);
  if (hi == 0) return {path.front().lat, path.front().lon};
  const std::size_t lo = hi - 1;
  const double span = st[hi] - st[lo];
  const double f = span > 0.0 ? std::clamp((s - st[lo]) / span, 0.0, 1.0) : 0.0;
  return {path[lo].lat + f * (path[hi].lat - path[lo].lat),
          path[lo].lon + f * (path[hi].lon - path[lo].lon)};
}

RoadProfile resample_profile(const RoadProfile& p, double S_target) {
  RoadProfile out;
  out.S = S_target;
  const auto n = static_cast<std::size_t>(std::floor(p.length() / S_target + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) * S_target;
    out.left.push_back(lerp_series(p.left, p.S, s));
    if (p.two_track()) out.right.push_back(lerp_series(p.right, p.S, s));
    if (!p.geotags.empty()) out.geotags.push_back(geotag_at(p, s));
  }
  return out;
}

struct SimulateOpts {
  std::string profile, speed = "22.2", params = "golden", model = "qc", out;
  std::string save_profile;
  double dt = 0.02, noise = 0.0, duration = 0.0;
  std::uint64_t seed = 1;
};

void cmd_simulate(const SimulateOpts& o) {
  RoadProfile profile = load_profile(o.profile);
  if (!o.save_profile.empty()) write_profile_csv(o.save_profile, profile);

  SpeedProfile speed = parse_speed(o.speed);
  speed.duration = o.duration > 0.0 ? o.duration : traverse_time(speed, profile.length());
  speed.validate();

  const VehicleParams params = resolve_params(o.params);
  const Model model = model_from_string(o.model);
  const SimTrace trace = drive(profile, speed, params, model, o.dt, o.noise, o.seed);

  std::vector<DriveRecord> records(trace.n_samples());
  for (std::size_t i = 0; i < trace.n_samples(); ++i) {
    DriveRecord& r = records[i];
    r.t = static_cast<double>(i) * o.dt;
    r.az = trace.vertical_acc[i];
    r.ax = trace.lateral_acc[i];
    r.v = trace.speed[i];
    const auto tag = profile.geotags.empty() ? north_path(trace.station[i])
                                             : geotag_at(profile, trace.station[i]);
    r.lat = tag[0];
    r.lon = tag[1];
  }
  write_drive_csv(o.out, records);
  if (trace.truncated) std::cerr << "note: drive truncated at the profile end\n";
  std::cout << "wrote " << records.size() << " samples to " << o.out << " ("
            << format_g9(trace.station.back()) << " m in "
            << format_g9(static_cast<double>(records.size() - 1) * o.dt) << " s)\n";
}

struct EstimateOpts {
  std::string drive, out, params = "golden", model = "qc", channels = "vertical";
  std::string track = "auto";
  double sigma = 0.05, qr_ratio = 1e9;
  double lpf = 0.0, hpf = 0.0, profile_hpf = 0.5;
  double calibration = 1.0, L = 40.0, S = 0.1;
  bool remove_g = false;
  double g = 9.82;
};

void cmd_estimate(const EstimateOpts& o) {
  IngestResult in = ingest_drive(read_drive_csv(o.drive));
  for (const auto& w : in.warnings) std::cerr << "warning: " << w << "\n";

  if (o.remove_g)
    for (double& a : in.trace.vertical_acc) a -= o.g;
  const double fs = 1.0 / in.trace.dt;
  if (o.lpf > 0.0) {
    in.trace.vertical_acc = lowpass(in.trace.vertical_acc, o.lpf, fs);
    in.trace.lateral_acc = lowpass(in.trace.lateral_acc, o.lpf, fs);
  }
  if (o.hpf > 0.0) {
    in.trace.vertical_acc = highpass(in.trace.vertical_acc, o.hpf, fs);
    in.trace.lateral_acc = highpass(in.trace.lateral_acc, o.hpf, fs);
  }

  const Model model = model_from_string(o.model);
  const Channels channels = channels_from_string(o.channels);
  const VehicleParams params = resolve_params(o.params);
  const KfConfig cfg = default_config(model, channels, o.qr_ratio, o.sigma);
  const std::vector<InputEstimate> est = run_filter(in.trace, model, channels, params, cfg);

  int component = 0;
  if (o.track == "left")
    component = 0;
  else if (o.track == "right")
    component = model == Model::HC ? 1 : 0;
  else if (o.track == "avg")
    component = model == Model::HC ? -1 : 0;
  else if (model == Model::HC && channels == Channels::Both)
    component = -1;  // auto: full half-car runs report the track average

  IriConfig icfg;
  icfg.L = o.L;
  icfg.S = o.S;
  std::vector<IriSegment> segs =
      iri_from_estimates(est, in.speed, icfg, o.calibration, component, o.profile_hpf);
  for (auto& seg : segs)
    seg.geotag = path_at_station(in.trace.station, in.path,
                                 0.5 * (seg.start_station + seg.end_station));
  write_segments_csv(o.out, segs);

  double mean = 0.0;
  std::size_t n = 0;
  for (const auto& s : segs)
    if (!s.transient && !s.partial) {
      mean += s.iri;
      ++n;
    }
  std::cout << "wrote " << segs.size() << " segments to " << o.out;
  if (n > 0) std::cout << " (mean " << format_g9(mean / static_cast<double>(n)) << " mm/m)";
  std::cout << "\n";
}

struct IriOpts {
  std::string profile, out;
  double L = 40.0, S = 0.0;  // S = 0 keeps the profile's native spacing
};

void cmd_iri(const IriOpts& o) {
  RoadProfile prof = load_profile(o.profile);
  if (prof.two_track()) prof = average_tracks(prof);
  if (o.S > 0.0 && std::abs(o.S - prof.S) > 1e-12) prof = resample_profile(prof, o.S);

  IriConfig cfg;
  cfg.L = o.L;
  cfg.S = prof.S;
  const std::vector<IriSegment> segs = iri_from_profile(prof, cfg);
  write_segments_csv(o.out, segs);

  double mean = 0.0;
  std::size_t n = 0;
  for (const auto& s : segs)
    if (!s.partial) {
      mean += s.iri;
      ++n;
    }
  std::cout << "wrote " << segs.size() << " segments to " << o.out;
  if (n > 0) std::cout << " (mean " << format_g9(mean / static_cast<double>(n)) << " mm/m)";
  std::cout << "\n";
}

struct SysIdOpts {
  std::string drive, profile, out;
  double m_s = 2400.0, m_u = 90.0, half_track = 1.0;
  double f_lo = 0.5, f_hi = 15.0, smoothing = 0.5;
  std::array<double, 4> init{15825.0, 1500.0, 163250.0, 3000.0};
  double mu0 = 1.0;
  int multistart = 5, max_iters = 200;
  std::uint64_t seed = 1;
  bool serial = false;
};

void cmd_sysid(const SysIdOpts& o) {
  const IngestResult in = ingest_drive(read_drive_csv(o.drive));
  for (const auto& w : in.warnings) std::cerr << "warning: " << w << "\n";
  const RoadProfile prof = load_profile(o.profile);
  if (!prof.two_track())
    throw ValidationError("sysid needs a two-track road profile");

  SysIdProblem prob;
  prob.measured.t0 = 0.0;
  prob.measured.dt = in.trace.dt;
  prob.measured.channels = {in.trace.vertical_acc, in.trace.lateral_acc};
  prob.road_inputs.t0 = 0.0;
  prob.road_inputs.dt = in.trace.dt;
  prob.road_inputs.channels.assign(2, {});
  for (const double s : in.trace.station) {
    prob.road_inputs.channels[0].push_back(lerp_series(prof.left, prof.S, s));
    prob.road_inputs.channels[1].push_back(lerp_series(prof.right, prof.S, s));
  }
  prob.m_s = o.m_s;
  prob.m_u = o.m_u;
  prob.l = o.half_track;
  prob.f_lo = o.f_lo;
  prob.f_hi = o.f_hi;
  prob.smoothing = o.smoothing;
  prob.init = o.init;
  prob.mu0 = o.mu0;
  prob.multistart = o.multistart;
  prob.seed = o.seed;
  prob.max_iters = o.max_iters;

  const SysIdResult res = identify(prob, o.serial ? Exec::Serial : Exec::Parallel);

  std::string text;
  text += "K_s=" + format_g9(res.beta[0]) + "\n";
  text += "C_s=" + format_g9(res.beta[1]) + "\n";
  text += "K_t=" + format_g9(res.beta[2]) + "\n";
  text += "I_s=" + format_g9(res.beta[3]) + "\n";
  text += "mu=" + format_g9(res.mu) + "\n";
  text += "cost=" + format_g9(res.cost) + "\n";
  text += "iterations=" + std::to_string(res.iterations) + "\n";
  text += std::string("converged=") + (res.converged ? "1" : "0") + "\n";
  std::cout << text;
  if (!o.out.empty()) atomic_write(o.out, text);
}

struct MatchOpts {
  std::string query, reference, out;
  double d_max = 4.0, phi_max = 45.0;
  bool serial = false;
};

void cmd_match(const MatchOpts& o) {
  auto points = [](const std::string& path) {
    std::vector<GeoPoint> pts;
    for (const DriveRecord& r : read_drive_csv(path)) pts.push_back({r.lat, r.lon});
    return pts;
  };
  const std::vector<GeoPoint> q = points(o.query);
  const std::vector<GeoPoint> r = points(o.reference);
  MatchConfig cfg;
  cfg.d_max = o.d_max;
  cfg.phi_max = o.phi_max;
  const MatchResult res = match(q, r, cfg, o.serial ? Exec::Serial : Exec::Parallel);
  write_match_csv(o.out, res);
  std::cout << "matched " << res.n_matched << " of " << q.size() << " query points\n";
}

struct EvalOpts {
  std::string est, ref, out, hist;
  double tol = 0.5;
  bool print_calibration = false;
};

void cmd_eval(const EvalOpts& o) {
  const std::vector<IriSegment> est = read_segments_csv(o.est);
  const std::vector<IriSegment> ref = read_segments_csv(o.ref);
  const EvalReport rep = evaluate(est, ref, o.tol);
  write_eval_report_csv(o.out, rep);
  if (!o.hist.empty()) write_histogram_csv(o.hist, rep);

  std::cout << "overall n=" << rep.overall.n << " mean_err=" << format_g9(rep.overall.mean_err)
            << " std_err=" << format_g9(rep.overall.std_err)
            << " rmse=" << format_g9(rep.overall.rmse)
            << " distance_km=" << format_g9(rep.overall.distance_km) << "\n";
  if (o.print_calibration) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [qi, ri] : align_segments(est, ref, o.tol))
      pairs.push_back({est[qi].iri, ref[ri].iri});
    std::cout << "calibration=" << format_g9(fit_calibration(pairs).slope) << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"road roughness toolkit: simulate, reconstruct, rate, and compare"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* c = app.add_subcommand("simulate", "drive a suspension model over a road");
  c->add_option("--profile", sim.profile,
                "road CSV or synth:CLASS:LENGTH[:SPACING[:SEED]]")
      ->required();
  c->add_option("--speed", sim.speed, "constant m/s or breakpoints t:v,t:v,...")
      ->capture_default_str();
  c->add_option("--params", sim.params, "golden, sedan, or a params file")
      ->capture_default_str();
  c->add_option("--model", sim.model, "qc or hc")
      ->check(CLI::IsMember({"qc", "hc"}))
      ->capture_default_str();
  c->add_option("--dt", sim.dt, "sample period, s")->capture_default_str();
  c->add_option("--noise", sim.noise, "output noise std, m/s^2")->capture_default_str();
  c->add_option("--seed", sim.seed, "noise seed")->capture_default_str();
  c->add_option("--duration", sim.duration, "drive time, s (default: full profile)");
  c->add_option("--out", sim.out, "drive CSV to write")->required();
  c->add_option("--save-profile", sim.save_profile, "also write the road profile CSV");
  c->callback([&sim] { cmd_simulate(sim); });

  EstimateOpts est;
  c = app.add_subcommand("estimate", "reconstruct road roughness from a drive log");
  c->add_option("--drive", est.drive, "drive CSV")->required();
  c->add_option("--out", est.out, "segments CSV to write")->required();
  c->add_option("--params", est.params, "golden, sedan, or a params file")
      ->capture_default_str();
  c->add_option("--model", est.model, "qc or hc")
      ->check(CLI::IsMember({"qc", "hc"}))
      ->capture_default_str();
  c->add_option("--channels", est.channels, "accelerations to use")
      ->check(CLI::IsMember({"vertical", "lateral", "both"}))
      ->capture_default_str();
  c->add_option("--track", est.track, "input component to rate")
      ->check(CLI::IsMember({"auto", "left", "right", "avg"}))
      ->capture_default_str();
  c->add_option("--sigma", est.sigma, "measurement noise std, m/s^2")->capture_default_str();
  c->add_option("--qr-ratio", est.qr_ratio, "input/measurement covariance ratio")
      ->capture_default_str();
  c->add_option("--lpf", est.lpf, "pre-filter low-pass cutoff, Hz (0 = off)")
      ->capture_default_str();
  c->add_option("--hpf", est.hpf, "pre-filter high-pass cutoff, Hz (0 = off)")
      ->capture_default_str();
  c->add_option("--profile-hpf", est.profile_hpf,
                "high-pass on the reconstructed elevation, Hz (0 = off)")
      ->capture_default_str();
  c->add_option("--calibration", est.calibration, "scale on reported roughness")
      ->capture_default_str();
  c->add_option("--L", est.L, "segment length, m")->capture_default_str();
  c->add_option("--S", est.S, "resampled profile spacing, m")->capture_default_str();
  c->add_flag("--remove-gravity", est.remove_g, "subtract g from the vertical channel");
  c->add_option("--g", est.g, "gravity constant for --remove-gravity")->capture_default_str();
  c->callback([&est] { cmd_estimate(est); });

  IriOpts iri;
  c = app.add_subcommand("iri", "rate a known road profile");
  c->add_option("--profile", iri.profile,
                "road CSV or synth:CLASS:LENGTH[:SPACING[:SEED]]")
      ->required();
  c->add_option("--out", iri.out, "segments CSV to write")->required();
  c->add_option("--L", iri.L, "segment length, m")->capture_default_str();
  c->add_option("--S", iri.S, "resample spacing, m (0 = native)")->capture_default_str();
  c->callback([&iri] { cmd_iri(iri); });

  SysIdOpts sid;
  c = app.add_subcommand("sysid", "fit suspension parameters from a drive over a known road");
  c->add_option("--drive", sid.drive, "drive CSV")->required();
  c->add_option("--profile", sid.profile, "two-track road CSV or synth spec")->required();
  c->add_option("--m-s", sid.m_s, "sprung mass, kg")->capture_default_str();
  c->add_option("--m-u", sid.m_u, "unsprung mass per wheel, kg")->capture_default_str();
  c->add_option("--half-track", sid.half_track, "half track width, m")->capture_default_str();
  c->add_option("--f-lo", sid.f_lo, "band lower edge, Hz")->capture_default_str();
  c->add_option("--f-hi", sid.f_hi, "band upper edge, Hz")->capture_default_str();
  c->add_option("--smoothing", sid.smoothing, "spectrum smoothing width, Hz")
      ->capture_default_str();
  c->add_option("--init-ks", sid.init[0], "K_s start")->capture_default_str();
  c->add_option("--init-cs", sid.init[1], "C_s start")->capture_default_str();
  c->add_option("--init-kt", sid.init[2], "K_t start")->capture_default_str();
  c->add_option("--init-is", sid.init[3], "I_s start")->capture_default_str();
  c->add_option("--mu0", sid.mu0, "spectrum scale start")->capture_default_str();
  c->add_option("--multistart", sid.multistart, "number of optimizer starts")
      ->capture_default_str();
  c->add_option("--seed", sid.seed, "start-point seed")->capture_default_str();
  c->add_option("--max-iters", sid.max_iters, "BFGS iteration cap")->capture_default_str();
  c->add_flag("--serial", sid.serial, "run starts on one thread");
  c->add_option("--out", sid.out, "also write the result as key=value lines");
  c->callback([&sid] { cmd_sysid(sid); });

  MatchOpts mat;
  c = app.add_subcommand("match", "associate one drive's GNSS points with another's");
  c->add_option("--query", mat.query, "drive CSV to match")->required();
  c->add_option("--reference", mat.reference, "drive CSV to match against")->required();
  c->add_option("--out", mat.out, "match CSV to write")->required();
  c->add_option("--d-max", mat.d_max, "distance gate, m")->capture_default_str();
  c->add_option("--phi-max", mat.phi_max, "heading gate, deg")->capture_default_str();
  c->add_flag("--serial", mat.serial, "match on one thread");
  c->callback([&mat] { cmd_match(mat); });

  EvalOpts ev;
  c = app.add_subcommand("eval", "compare estimated segments against reference segments");
  c->add_option("--est", ev.est, "estimated segments CSV")->required();
  c->add_option("--ref", ev.ref, "reference segments CSV")->required();
  c->add_option("--out", ev.out, "report CSV to write")->required();
  c->add_option("--hist", ev.hist, "also write an error histogram CSV");
  c->add_option("--tol", ev.tol, "alignment tolerance, m")->capture_default_str();
  c->add_flag("--print-calibration", ev.print_calibration,
              "print the through-origin slope mapping est to ref");
  c->callback([&ev] { cmd_eval(ev); });

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("rri");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace rri
