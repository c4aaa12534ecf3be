#pragma once

#include <cstdint>

#include "rri/types.hpp"

namespace rri {

// Synthesize a two-track random road of ISO 8608 roughness class by
// superposing cosine harmonics with amplitude sqrt(2 G_d(n_k) dn) and
// uniform random phases, dn = 1/length, up to the spatial Nyquist
// 1/(2S). Left/right tracks share a common phase set with weight
// sqrt(rho) plus independent sets with weight sqrt(1-rho), giving
// track correlation rho. Deterministic in (class, length, S, seed, rho).
RoadProfile synth_profile(RoadClass cls, double length_m, double S, std::uint64_t seed,
                          double rho = 0.9, Exec exec = Exec::Parallel);

// Plain-loop reference path used by equality tests and the benchmark.
RoadProfile synth_profile_reference(RoadClass cls, double length_m, double S,
                                    std::uint64_t seed, double rho = 0.9);

// Displacement PSD value G_d(n) in m^3 for the class's geometric-mean
// line, reference wavenumber n0 = 0.1 cycles/m.
double road_class_psd(RoadClass cls, double n_cycles_per_m);

}  // namespace rri
