#include "rri/synth.hpp"

#include <cmath>

#include "rri/rng.hpp"

namespace rri {

double road_class_psd(RoadClass cls, double n_cycles_per_m) {
  // geometric-mean displacement PSD lines, G_d(n) = G_d(n0) (n/n0)^-2
  static constexpr double kGd0[] = {16e-6, 64e-6, 256e-6, 1024e-6, 4096e-6};
  const double n0 = 0.1;
  const double g0 = kGd0[static_cast<int>(cls)];
  return g0 * (n0 / n_cycles_per_m) * (n0 / n_cycles_per_m);
}

namespace {

struct Harmonics {
  std::vector<double> amp;                    // sqrt(2 G_d(n_k) dn)
  std::vector<double> wavenum;                // n_k, cycles/m
  std::vector<double> ph_shared, ph_l, ph_r;  // uniform [0, 2 pi)
};

Harmonics make_harmonics(RoadClass cls, double length, double S, std::uint64_t seed) {
  const double dn = 1.0 / length;
  const double n_max = 1.0 / (2.0 * S);
  const int K = static_cast<int>(std::floor(n_max / dn));
  Harmonics h;
  h.amp.resize(K);
  h.wavenum.resize(K);
  for (int k = 1; k <= K; ++k) {
    const double n = k * dn;
    h.wavenum[k - 1] = n;
    h.amp[k - 1] = std::sqrt(2.0 * road_class_psd(cls, n) * dn);
  }
  // phases drawn serially in a fixed order so results never depend on
  // the execution policy
  Rng rng(seed);
  h.ph_shared.resize(K);
  h.ph_l.resize(K);
  h.ph_r.resize(K);
  for (auto* row : {&h.ph_shared, &h.ph_l, &h.ph_r})
    for (int k = 0; k < K; ++k) (*row)[k] = 2.0 * kPi * rng.uniform();
  return h;
}

inline void eval_sample(const Harmonics& h, double w_shared, double w_own, double x,
                        double* left, double* right) {
  double zl = 0.0, zr = 0.0;
  const int K = static_cast<int>(h.amp.size());
  for (int k = 0; k < K; ++k) {
    const double arg = 2.0 * kPi * h.wavenum[k] * x;
    zl += h.amp[k] * (w_shared * std::cos(arg + h.ph_shared[k]) +
                      w_own * std::cos(arg + h.ph_l[k]));
    zr += h.amp[k] * (w_shared * std::cos(arg + h.ph_shared[k]) +
                      w_own * std::cos(arg + h.ph_r[k]));
  }
  *left = zl;
  *right = zr;
}

RoadProfile synth_impl(RoadClass cls, double length, double S, std::uint64_t seed, double rho,
                       bool parallel) {
  if (!(length > 0.0) || !(S > 0.0) || length < 2.0 * S)
    throw ValidationError("synth: need length >= 2 S > 0");
  if (rho < 0.0 || rho > 1.0) throw ValidationError("synth: rho must be in [0, 1]");
  const Harmonics h = make_harmonics(cls, length, S, seed);
  const double w_shared = std::sqrt(rho), w_own = std::sqrt(1.0 - rho);
  const int N = static_cast<int>(std::floor(length / S)) + 1;
  RoadProfile prof;
  prof.S = S;
  prof.left.resize(N);
  prof.right.resize(N);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < N; ++i)
    eval_sample(h, w_shared, w_own, i * S, &prof.left[i], &prof.right[i]);
  return prof;
}

}  // namespace

RoadProfile synth_profile(RoadClass cls, double length_m, double S, std::uint64_t seed,
                          double rho, Exec exec) {
  return synth_impl(cls, length_m, S, seed, rho, exec == Exec::Parallel);
}

RoadProfile synth_profile_reference(RoadClass cls, double length_m, double S,
                                    std::uint64_t seed, double rho) {
  // plain serial loop, no pragmas: the equality baseline for the
  // parallel path
  if (!(length_m > 0.0) || !(S > 0.0) || length_m < 2.0 * S)
    throw ValidationError("synth: need length >= 2 S > 0");
  if (rho < 0.0 || rho > 1.0) throw ValidationError("synth: rho must be in [0, 1]");
  const Harmonics h = make_harmonics(cls, length_m, S, seed);
  const double w_shared = std::sqrt(rho), w_own = std::sqrt(1.0 - rho);
  const int N = static_cast<int>(std::floor(length_m / S)) + 1;
  RoadProfile prof;
  prof.S = S;
  prof.left.resize(N);
  prof.right.resize(N);
  for (int i = 0; i < N; ++i)
    eval_sample(h, w_shared, w_own, i * S, &prof.left[i], &prof.right[i]);
  return prof;
}

}  // namespace rri
