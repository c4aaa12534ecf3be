#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rri/common.hpp"
#include "rri/iri.hpp"
#include "rri/synth.hpp"

using namespace rri;
using doctest::Approx;

namespace {

RoadProfile single_track(std::vector<double> z, double S) {
  RoadProfile p;
  p.S = S;
  p.left = std::move(z);
  return p;
}

std::vector<double> sine_road(double amp, double wavelength, double length, double S) {
  const auto n = static_cast<std::size_t>(std::floor(length / S)) + 1;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = amp * std::sin(2.0 * kPi * static_cast<double>(i) * S / wavelength);
  return z;
}

}  // namespace

TEST_CASE("segment index agrees with dense continuous-time integration") {
  // a deterministic sine and a synthetic rough road, both against the
  // trapezoid-integrated fine-step reference
  {
    const RoadProfile p = single_track(sine_road(0.005, 2.5, 200.0, 0.05), 0.05);
    const auto segs = iri_from_profile(p, IriConfig{40.0, 0.05});
    const std::vector<double> ref = oracle::iri_continuous(p.left, 0.05);
    REQUIRE(segs.size() >= ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(segs[i].iri == Approx(ref[i]).epsilon(0.01));
      CHECK(ref[i] > 0.5);  // the comparison is not vacuous
    }
  }
  {
    const RoadProfile p = average_tracks(synth_profile(RoadClass::B, 120.0, 0.1, 4));
    const auto segs = iri_from_profile(p, IriConfig{});
    const std::vector<double> ref = oracle::iri_continuous(p.left, 0.1);
    REQUIRE(ref.size() == 3);
    for (std::size_t i = 0; i < ref.size(); ++i)
      CHECK(segs[i].iri == Approx(ref[i]).epsilon(0.01));
  }
}

TEST_CASE("segment partition, flags, and geotags") {
  RoadProfile p = single_track(sine_road(0.01, 7.0, 100.0, 0.1), 0.1);
  p.geotags.resize(p.left.size());
  for (std::size_t i = 0; i < p.geotags.size(); ++i)
    p.geotags[i] = {57.0 + 1e-6 * static_cast<double>(i), 12.0};
  const auto segs = iri_from_profile(p, IriConfig{});
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].start_station == 0.0);
  CHECK(segs[0].end_station == 40.0);
  CHECK(segs[1].start_station == 40.0);
  CHECK(segs[1].end_station == 80.0);
  CHECK(segs[2].start_station == 80.0);
  CHECK(segs[2].end_station == Approx(100.0).epsilon(1e-12));
  CHECK(segs[0].n_samples == 400);
  CHECK(segs[1].n_samples == 400);
  CHECK(segs[2].n_samples == 200);
  CHECK(segs[0].transient);
  CHECK_FALSE(segs[1].transient);
  CHECK_FALSE(segs[2].transient);
  CHECK_FALSE(segs[0].partial);
  CHECK_FALSE(segs[1].partial);
  CHECK(segs[2].partial);
  REQUIRE(segs[0].geotag.has_value());
  CHECK((*segs[0].geotag)[0] == Approx(57.0 + 1e-6 * 200).epsilon(1e-12));
  CHECK((*segs[1].geotag)[0] == Approx(57.0 + 1e-6 * 600).epsilon(1e-12));

  // an exact multiple of L produces no trailing partial segment
  const RoadProfile q = single_track(sine_road(0.01, 7.0, 80.0, 0.1), 0.1);
  const auto qs = iri_from_profile(q, IriConfig{});
  REQUIRE(qs.size() == 2);
  CHECK_FALSE(qs[0].partial);
  CHECK_FALSE(qs[1].partial);
}

TEST_CASE("roughness is positively homogeneous in the profile") {
  const RoadProfile p = average_tracks(synth_profile(RoadClass::B, 160.0, 0.1, 12));
  RoadProfile twice = p;
  for (double& v : twice.left) v *= 2.0;
  const auto a = iri_from_profile(p, IriConfig{});
  const auto b = iri_from_profile(twice, IriConfig{});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(b[i].iri == Approx(2.0 * a[i].iri).epsilon(1e-14));
  const auto zero = iri_from_profile(single_track(std::vector<double>(1001, 0.0), 0.1),
                                     IriConfig{});
  for (const auto& s : zero) CHECK(s.iri == 0.0);
}

TEST_CASE("iri_from_profile input validation") {
  const RoadProfile two = synth_profile(RoadClass::A, 100.0, 0.1, 1);
  CHECK_THROWS_AS(iri_from_profile(two, IriConfig{}), ValidationError);
  const RoadProfile p = average_tracks(two);
  CHECK_THROWS_AS(iri_from_profile(p, IriConfig{40.0, 0.25}), ValidationError);
  CHECK_THROWS_AS(iri_from_profile(p, IriConfig{0.05, 0.1}), ValidationError);
  const RoadProfile tiny = single_track(std::vector<double>(300, 0.0), 0.1);
  CHECK_THROWS_AS(iri_from_profile(tiny, IriConfig{}), ValidationError);
}

TEST_CASE("track averaging") {
  RoadProfile two;
  two.S = 0.1;
  two.left = {0.0, 2.0, 4.0};
  two.right = {1.0, 0.0, -4.0};
  two.geotags = {{57.0, 12.0}, {57.1, 12.0}, {57.2, 12.0}};
  const RoadProfile avg = average_tracks(two);
  CHECK(avg.left == std::vector<double>{0.5, 1.0, 0.0});
  CHECK_FALSE(avg.two_track());
  CHECK(avg.geotags == two.geotags);
  CHECK(avg.S == 0.1);
  CHECK_THROWS_AS(average_tracks(avg), ValidationError);
}

TEST_CASE("spatial resampling") {
  // a time grid aligned with the station grid copies samples through
  const std::vector<double> u = sine_road(1.0, 13.0, 10.0, 0.1);  // any 101 values
  const SpeedProfile sp = SpeedProfile::constant(10.0, 1.0);
  CHECK(spatial_resample(u, 0.0, 0.01, sp, 0.1) == u);

  // half-step stations interpolate linearly; a ramp maps to a ramp
  std::vector<double> ramp(101);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 3.0 * static_cast<double>(i) * 0.01;
  const std::vector<double> half = spatial_resample(ramp, 0.0, 0.01, sp, 0.05);
  REQUIRE(half.size() == 201);
  for (std::size_t i = 0; i < half.size(); ++i)
    CHECK(half[i] == Approx(3.0 * static_cast<double>(i) * 0.005).epsilon(1e-9));

  // halving the speed doubles the stations covered by the same duration
  const SpeedProfile slow = SpeedProfile::constant(5.0, 1.0);
  const std::vector<double> dense = spatial_resample(ramp, 0.0, 0.01, slow, 0.1);
  REQUIRE(dense.size() == 51);
  for (std::size_t i = 0; i < dense.size(); ++i)
    CHECK(dense[i] == Approx(3.0 * static_cast<double>(i) * 0.02).epsilon(1e-9));

  CHECK_THROWS_AS(spatial_resample(u, 0.0, 0.0, sp, 0.1), ValidationError);
  CHECK_THROWS_AS(spatial_resample(u, 0.0, 0.01, sp, 0.0), ValidationError);
  CHECK_THROWS_AS(spatial_resample(std::vector<double>{1.0}, 0.0, 0.01, sp, 0.1),
                  ValidationError);
  const SpeedProfile stopped = SpeedProfile::constant(0.0, 1.0);
  CHECK_THROWS_AS(spatial_resample(u, 0.0, 0.01, stopped, 0.1), ValidationError);
}

TEST_CASE("estimate pipeline reduces to the profile path on aligned input") {
  const RoadProfile p = average_tracks(synth_profile(RoadClass::B, 150.0, 0.1, 8));
  const double v = 20.0, T = 0.1 / v;
  std::vector<InputEstimate> est(p.left.size());
  for (std::size_t k = 0; k < est.size(); ++k) {
    est[k].u = Eigen::VectorXd::Constant(1, p.left[k]);
    est[k].t = static_cast<double>(k) * T;
  }
  const SpeedProfile sp = SpeedProfile::constant(v, static_cast<double>(est.size()) * T);
  const auto from_est = iri_from_estimates(est, sp, IriConfig{}, 1.0, 0, 0.0);
  const auto from_prof = iri_from_profile(p, IriConfig{});
  REQUIRE(from_est.size() == from_prof.size());
  for (std::size_t i = 0; i < from_est.size(); ++i)
    CHECK(from_est[i].iri == from_prof[i].iri);

  const auto scaled = iri_from_estimates(est, sp, IriConfig{}, 1.39, 0, 0.0);
  for (std::size_t i = 0; i < scaled.size(); ++i)
    CHECK(scaled[i].iri == Approx(1.39 * from_prof[i].iri).epsilon(1e-14));

  CHECK_THROWS_AS(iri_from_estimates({}, sp, IriConfig{}, 1.0, 0, 0.0), ValidationError);
  std::vector<InputEstimate> bad(est.begin(), est.begin() + 2);
  bad[1].t = bad[0].t;
  CHECK_THROWS_AS(iri_from_estimates(bad, sp, IriConfig{}, 1.0, 0, 0.0), ValidationError);
}
