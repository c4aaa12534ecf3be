#include "rri/models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace rri {

void VehicleParams::validate(bool need_half_car) const {
  if (!(m_s > 0.0) || !(m_u > 0.0) || !(K_t > 0.0))
    throw ValidationError("vehicle params: m_s, m_u, K_t must be positive");
  if (K_s < 0.0 || C_s < 0.0)
    throw ValidationError("vehicle params: K_s, C_s must be non-negative");
  if (need_half_car) {
    if (!I_s || !l) throw ValidationError("half-car params require I_s and l");
    if (!(*I_s > 0.0) || !(*l > 0.0))
      throw ValidationError("half-car params: I_s and l must be positive");
  }
}

VehicleParams golden_car_params() {
  VehicleParams p;
  p.m_s = 1000.0;
  p.m_u = 37.5;
  p.K_s = 15825.0;
  p.C_s = 1500.0;
  p.K_t = 163250.0;
  return p;
}

VehicleParams sedan_params() {
  VehicleParams p;
  p.m_s = 2400.0;
  p.m_u = 90.0;
  p.K_s = 37050.0;
  p.C_s = 4290.0;
  p.K_t = 370600.0;
  p.I_s = 1960.0;
  p.l = 1.0;
  return p;
}

StateSpace build_qc(const VehicleParams& p) {
  p.validate(false);
  StateSpace s;
  const double ms = p.m_s, mu = p.m_u, Ks = p.K_s, Cs = p.C_s, Kt = p.K_t;
  s.A = Eigen::MatrixXd::Zero(4, 4);
  s.A(0, 1) = 1.0;
  s.A.row(1) << -4.0 * Ks / ms, -4.0 * Cs / ms, 4.0 * Ks / ms, 4.0 * Cs / ms;
  s.A(2, 3) = 1.0;
  s.A.row(3) << Ks / mu, Cs / mu, -(Ks + Kt) / mu, -Cs / mu;
  s.B = Eigen::MatrixXd::Zero(4, 1);
  s.B(3, 0) = Kt / mu;
  s.C = s.A.row(1);
  s.state_labels = {"z_s", "z_s'", "z_u", "z_u'"};
  s.input_labels = {"u"};
  s.output_labels = {"az"};
  return s;
}

StateSpace build_hc(const VehicleParams& p) {
  p.validate(true);
  StateSpace s;
  const double ms = p.m_s, mu = p.m_u, Ks = p.K_s, Cs = p.C_s, Kt = p.K_t;
  const double Is = *p.I_s, l = *p.l;
  s.A = Eigen::MatrixXd::Zero(8, 8);
  s.A(0, 1) = 1.0;
  s.A.row(1) << -4.0 * Ks / ms, -4.0 * Cs / ms, 0.0, 0.0, 2.0 * Ks / ms, 2.0 * Cs / ms,
      2.0 * Ks / ms, 2.0 * Cs / ms;
  s.A(2, 3) = 1.0;
  s.A.row(3) << 0.0, 0.0, -2.0 * Ks * l * l / Is, -2.0 * Cs * l * l / Is, -Ks * l / Is,
      -Cs * l / Is, Ks * l / Is, Cs * l / Is;
  s.A(4, 5) = 1.0;
  s.A.row(5) << Ks / mu, Cs / mu, -Ks * l / mu, -Cs * l / mu, -(Ks + Kt) / mu, -Cs / mu, 0.0,
      0.0;
  s.A(6, 7) = 1.0;
  s.A.row(7) << Ks / mu, Cs / mu, Ks * l / mu, Cs * l / mu, 0.0, 0.0, -(Ks + Kt) / mu,
      -Cs / mu;
  s.B = Eigen::MatrixXd::Zero(8, 2);
  s.B(5, 0) = Kt / mu;
  s.B(7, 1) = Kt / mu;
  s.C = Eigen::MatrixXd(2, 8);
  s.C.row(0) = s.A.row(1);
  s.C.row(1) = s.A.row(3);
  s.state_labels = {"z_s", "z_s'", "theta", "theta'", "z_ul", "z_ul'", "z_ur", "z_ur'"};
  s.input_labels = {"u_l", "u_r"};
  s.output_labels = {"az", "ax"};
  return s;
}

Eigen::RowVector4d rattle_output() {
  Eigen::RowVector4d c;
  c << 0.0, 1.0, 0.0, -1.0;
  return c;
}

double response_gain(const VehicleParams& p, double freq_hz, double speed_mps) {
  StateSpace sys = build_qc(p);
  const std::complex<double> jw(0.0, 2.0 * kPi * freq_hz);
  Eigen::MatrixXcd M = jw * Eigen::MatrixXcd::Identity(4, 4) - sys.A.cast<std::complex<double>>();
  Eigen::VectorXcd x = M.partialPivLu().solve(sys.B.cast<std::complex<double>>().col(0));
  std::complex<double> xi = rattle_output().cast<std::complex<double>>() * x;
  return std::abs(xi) / speed_mps;
}

std::vector<double> natural_frequencies(const StateSpace& sys) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A);
  std::vector<double> freqs;
  for (int i = 0; i < sys.A.rows(); ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (lam.imag() > 0.0) freqs.push_back(std::abs(lam) / (2.0 * kPi));
  }
  std::sort(freqs.begin(), freqs.end());
  return freqs;
}

Model model_from_string(const std::string& s) {
  if (s == "qc" || s == "QC") return Model::QC;
  if (s == "hc" || s == "HC") return Model::HC;
  throw ValidationError("unknown model '" + s + "' (expected qc or hc)");
}

Channels channels_from_string(const std::string& s) {
  if (s == "vertical") return Channels::Vertical;
  if (s == "lateral") return Channels::Lateral;
  if (s == "both") return Channels::Both;
  throw ValidationError("unknown channels '" + s + "' (expected vertical, lateral or both)");
}

RoadClass road_class_from_string(const std::string& s) {
  if (s.size() == 1) {
    switch (s[0]) {
      case 'A': case 'a': return RoadClass::A;
      case 'B': case 'b': return RoadClass::B;
      case 'C': case 'c': return RoadClass::C;
      case 'D': case 'd': return RoadClass::D;
      case 'E': case 'e': return RoadClass::E;
    }
  }
  throw ValidationError("unknown road class '" + s + "' (expected A..E)");
}

std::string to_string(RoadClass c) {
  switch (c) {
    case RoadClass::A: return "A";
    case RoadClass::B: return "B";
    case RoadClass::C: return "C";
    case RoadClass::D: return "D";
    case RoadClass::E: return "E";
  }
  return "?";
}

}  // namespace rri
