// Timings for the OpenMP kernels against their serial reference paths,
// with a bitwise equality check on the outputs.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "rri/geomatch.hpp"
#include "rri/rng.hpp"
#include "rri/synth.hpp"
#include "rri/sysid.hpp"

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void row(const char* name, double serial_s, double parallel_s, bool equal) {
  std::printf("%-18s %10.3f s %10.3f s   x%-6.2f %s\n", name, serial_s, parallel_s,
              serial_s / parallel_s, equal ? "outputs equal" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
  std::printf("%-18s %12s %12s   %-7s\n", "kernel", "serial", "parallel", "speedup");

  {
    const double t0 = now_s();
    const rri::RoadProfile a = rri::synth_profile_reference(rri::RoadClass::B, 1500.0, 0.05, 42);
    const double t1 = now_s();
    const rri::RoadProfile b =
        rri::synth_profile(rri::RoadClass::B, 1500.0, 0.05, 42, 0.9, rri::Exec::Parallel);
    const double t2 = now_s();
    row("synth 1.5 km", t1 - t0, t2 - t1, a.left == b.left && a.right == b.right);
  }

  {
    // wandering reference path, ~1 m point spacing; queries offset ~1 m
    rri::Rng rng(7);
    const std::size_t n = 20000;
    std::vector<rri::GeoPoint> ref(n), query(n);
    double lat = 57.0, lon = 12.0, heading = 0.3;
    const double m_per_deg = 111320.0;
    for (std::size_t i = 0; i < n; ++i) {
      ref[i] = {lat, lon};
      query[i] = {lat + rng.normal() * 0.4 / m_per_deg, lon + rng.normal() * 0.4 / m_per_deg};
      heading += 0.02 * rng.normal();
      lat += std::cos(heading) / m_per_deg;
      lon += std::sin(heading) / (m_per_deg * std::cos(lat * rri::kPi / 180.0));
    }
    const rri::MatchConfig cfg;
    const double t0 = now_s();
    const rri::MatchResult brute = rri::match_reference(query, ref, cfg);
    const double t1 = now_s();
    const rri::MatchResult grid = rri::match(query, ref, cfg, rri::Exec::Parallel);
    const double t2 = now_s();
    bool equal = brute.n_matched == grid.n_matched;
    for (std::size_t i = 0; equal && i < n; ++i)
      equal = brute.matches[i].ref_index == grid.matches[i].ref_index;
    row("match 20k x 20k", t1 - t0, t2 - t1, equal);
  }

  {
    // small identification problem so the multi-start sweep dominates
    const double dt = 0.02, v = 55.0 / 3.6;
    const rri::RoadProfile prof = rri::synth_profile(rri::RoadClass::C, 160.0, 0.1, 3);
    const std::size_t n = static_cast<std::size_t>(150.0 / v / dt);
    auto lerp_track = [&](const std::vector<double>& tr) {
      std::vector<double> u(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double pos = v * static_cast<double>(k) * dt / prof.S;
        const auto i0 = std::min(static_cast<std::size_t>(pos), tr.size() - 1);
        const auto i1 = std::min(i0 + 1, tr.size() - 1);
        u[k] = tr[i0] + (tr[i1] - tr[i0]) * (pos - static_cast<double>(i0));
      }
      return u;
    };
    rri::SysIdProblem prob;
    prob.m_s = 2400.0;
    prob.m_u = 90.0;
    prob.l = 1.0;
    prob.road_inputs.dt = dt;
    prob.road_inputs.channels = {lerp_track(prof.left), lerp_track(prof.right)};
    prob.measured.dt = dt;
    prob.measured.channels = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    prob.measured = rri::simulate_response({37050.0, 4290.0, 370600.0, 1960.0}, prob);
    prob.max_iters = 60;
    const double t0 = now_s();
    const rri::SysIdResult a = rri::identify(prob, rri::Exec::Serial);
    const double t1 = now_s();
    const rri::SysIdResult b = rri::identify(prob, rri::Exec::Parallel);
    const double t2 = now_s();
    row("sysid 5 starts", t1 - t0, t2 - t1, a.beta == b.beta && a.mu == b.mu && a.cost == b.cost);
  }

  return 0;
}
