#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rri/discretize.hpp"
#include "rri/iri.hpp"
#include "rri/kf.hpp"
#include "rri/models.hpp"
#include "rri/signal.hpp"
#include "rri/simulate.hpp"
#include "rri/synth.hpp"

using namespace rri;
using doctest::Approx;

namespace {

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("zero-order-hold discretization matches direct integration") {
  for (const double T : {0.02, 0.0045}) {
    for (const bool hc : {false, true}) {
      const StateSpace sys = hc ? build_hc(sedan_params()) : build_qc(golden_car_params());
      const DiscreteStateSpace dss = discretize(sys, T);
      Eigen::MatrixXd F, G;
      oracle::zoh_by_integration(sys.A, sys.B, T, 4000, F, G);
      CHECK(rel_err(dss.F, F) < 1e-9);
      CHECK(rel_err(dss.G, G) < 1e-9);
      CHECK(dss.H == sys.C);
      CHECK(dss.T == T);
    }
  }
}

TEST_CASE("time update propagates mean and covariance") {
  DiscreteStateSpace dss;
  dss.F.resize(2, 2);
  dss.F << 1.0, 0.1, 0.0, 1.0;
  dss.G.resize(2, 1);
  dss.G << 0.005, 0.1;
  KfConfig cfg;
  cfg.Q = 2.0 * Eigen::MatrixXd::Identity(1, 1);
  KfState s;
  s.x.resize(2);
  s.x << 1.0, 2.0;
  s.P.resize(2, 2);
  s.P << 1.0, 0.2, 0.2, 3.0;
  s.k = 7;
  const KfState out = time_update(s, dss, cfg);
  CHECK(out.k == 8);
  CHECK(out.x(0) == Approx(1.2).epsilon(1e-15));
  CHECK(out.x(1) == Approx(2.0).epsilon(1e-15));
  CHECK(out.P(0, 0) == Approx(1.07005).epsilon(1e-12));
  CHECK(out.P(0, 1) == Approx(0.501).epsilon(1e-12));
  CHECK(out.P(1, 0) == Approx(0.501).epsilon(1e-12));
  CHECK(out.P(1, 1) == Approx(3.02).epsilon(1e-12));
}

TEST_CASE("measurement update: scalar gain, Joseph covariance, innovation") {
  DiscreteStateSpace dss;
  dss.H = Eigen::MatrixXd::Identity(1, 1);
  KfConfig cfg;
  cfg.R = Eigen::MatrixXd::Identity(1, 1);
  KfState pred;
  pred.x = 0.5 * Eigen::VectorXd::Ones(1);
  pred.P = 2.0 * Eigen::MatrixXd::Identity(1, 1);
  Eigen::VectorXd y(1);
  y << 1.5;
  const auto [post, innovation] = measurement_update(pred, y, dss, cfg);
  CHECK(innovation(0) == Approx(1.0).epsilon(1e-15));
  CHECK(post.x(0) == Approx(0.5 + 2.0 / 3.0).epsilon(1e-12));
  CHECK(post.P(0, 0) == Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("input reconstruction formula in one dimension") {
  DiscreteStateSpace dss;
  dss.F = 0.5 * Eigen::MatrixXd::Identity(1, 1);
  dss.G = Eigen::MatrixXd::Identity(1, 1);
  KfConfig cfg;
  cfg.Q = 10.0 * Eigen::MatrixXd::Identity(1, 1);
  KfState k0, k1;
  k0.x = Eigen::VectorXd::Ones(1);
  k1.x = 2.0 * Eigen::VectorXd::Ones(1);
  const Eigen::MatrixXd P_pred = 4.0 * Eigen::MatrixXd::Identity(1, 1);
  const Eigen::VectorXd u = input_estimate(k0, P_pred, k1, dss, cfg);
  CHECK(u(0) == Approx(10.0 * 0.25 * (2.0 - 0.5)).epsilon(1e-15));
}

TEST_CASE("covariance stays symmetric and positive under the extreme Q/R ratio") {
  const StateSpace sys = build_qc(golden_car_params());
  const DiscreteStateSpace dss = [&] {
    DiscreteStateSpace d = discretize(sys, 0.01);
    d.H = sys.C.row(0);
    return d;
  }();
  const KfConfig cfg = default_config(Model::QC, Channels::Vertical);
  KfState s;
  s.x = cfg.x0;
  s.P = cfg.P0;
  std::mt19937_64 eng(1);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd y(1);
  for (int k = 0; k < 2000; ++k) {
    const KfState pred = time_update(s, dss, cfg);
    y(0) = dist(eng);
    s = measurement_update(pred, y, dss, cfg).first;
    if (k % 50 == 0 || k == 1999) {
      CHECK((s.P - s.P.transpose()).cwiseAbs().maxCoeff() <=
            1e-12 * s.P.cwiseAbs().maxCoeff());
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.P);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * s.P.trace());
    }
  }
}

TEST_CASE("reconstructed input tracks the simulated road") {
  const RoadProfile two = synth_profile(RoadClass::B, 300.0, 0.1, 21);
  const RoadProfile prof = average_tracks(two);
  const SpeedProfile sp = SpeedProfile::constant(15.0, 19.0);
  const SimTrace tr = drive(prof, sp, golden_car_params(), Model::QC, 0.005, 0.0, 1);
  const auto est = run_filter(tr, Model::QC, Channels::Vertical, golden_car_params(),
                              default_config(Model::QC, Channels::Vertical));
  REQUIRE(est.size() == tr.n_samples() - 1);
  CHECK(est[10].t == Approx(10 * 0.005).epsilon(1e-15));
  CHECK(est[0].u.size() == 1);
  CHECK(est[0].innovation.size() == 1);

  // compare above the unobservable drift band
  const double fs = 1.0 / tr.dt;
  std::vector<double> truth(tr.true_left.begin(), tr.true_left.end() - 1);
  const std::vector<double> a = highpass(input_component(est, 0), 0.5, fs);
  const std::vector<double> b = highpass(truth, 0.5, fs);
  const std::vector<double> at(a.begin() + 400, a.end());
  const std::vector<double> bt(b.begin() + 400, b.end());
  CHECK(correlation(at, bt) > 0.95);
}

TEST_CASE("filter defaults") {
  const KfConfig qc = default_config(Model::QC, Channels::Vertical);
  CHECK(qc.Q.rows() == 1);
  CHECK(qc.Q(0, 0) == Approx(1e9 * 0.05 * 0.05).epsilon(1e-12));
  CHECK(qc.R(0, 0) == Approx(0.05 * 0.05).epsilon(1e-12));
  CHECK(qc.P0.rows() == 4);
  CHECK(qc.P0(2, 2) == Approx(1e-2).epsilon(1e-12));
  CHECK(qc.P0(0, 1) == 0.0);
  CHECK(qc.x0.size() == 4);
  CHECK(qc.x0.norm() == 0.0);

  const KfConfig hc = default_config(Model::HC, Channels::Both, 1e8, 0.1);
  CHECK(hc.Q.rows() == 2);
  CHECK(hc.Q(1, 1) == Approx(1e8 * 0.01).epsilon(1e-12));
  CHECK(hc.R.rows() == 2);
  CHECK(hc.P0.rows() == 8);
}

TEST_CASE("filter input validation") {
  const RoadProfile prof = average_tracks(synth_profile(RoadClass::A, 100.0, 0.1, 1));
  const SpeedProfile sp = SpeedProfile::constant(10.0, 5.0);
  const SimTrace tr = drive(prof, sp, golden_car_params(), Model::QC, 0.01, 0.0, 1);

  CHECK_THROWS_AS(run_filter(tr, Model::QC, Channels::Lateral, golden_car_params(),
                             default_config(Model::QC, Channels::Vertical)),
                  ValidationError);
  CHECK_THROWS_AS(run_filter(tr, Model::QC, Channels::Both, golden_car_params(),
                             default_config(Model::QC, Channels::Vertical)),
                  ValidationError);
  // config sized for the wrong model
  CHECK_THROWS_AS(run_filter(tr, Model::QC, Channels::Vertical, golden_car_params(),
                             default_config(Model::HC, Channels::Vertical)),
                  ValidationError);

  SimTrace tiny = tr;
  tiny.vertical_acc.resize(1);
  CHECK_THROWS_AS(run_filter(tiny, Model::QC, Channels::Vertical, golden_car_params(),
                             default_config(Model::QC, Channels::Vertical)),
                  ValidationError);
}

TEST_CASE("input component selection") {
  std::vector<InputEstimate> est(2);
  est[0].u = Eigen::Vector2d(1.0, 3.0);
  est[1].u = Eigen::Vector2d(-2.0, 6.0);
  CHECK(input_component(est, 0) == std::vector<double>{1.0, -2.0});
  CHECK(input_component(est, 1) == std::vector<double>{3.0, 6.0});
  CHECK(input_component(est, -1) == std::vector<double>{2.0, 2.0});
  CHECK_THROWS_AS(input_component(est, 2), ValidationError);
  CHECK_THROWS_AS(input_component(est, -3), ValidationError);
}
