#pragma once

#include "rri/types.hpp"

namespace rri {

// Standard quarter-car reference parameter set used for roughness-index
// computation (sprung mass 1000 kg basis).
VehicleParams golden_car_params();

// Identified passenger-sedan parameter set (full half-car set incl. roll
// inertia and half track width); ships as the "sedan" named set.
VehicleParams sedan_params();

// Vertical quarter-car model. States: [z_s, z_s', z_u, z_u'];
// input: road elevation u; output: sprung vertical acceleration.
StateSpace build_qc(const VehicleParams& p);

// Lateral half-car model (one axle, left+right wheel). States:
// [z_s, z_s', theta, theta', z_ul, z_ul', z_ur, z_ur']; inputs: (u_l, u_r);
// outputs: (vertical acceleration, roll acceleration). Left corner
// displacement convention: z_s - l*theta.
StateSpace build_hc(const VehicleParams& p);

// Rattle-space derivative output row [0 1 0 -1] for a quarter-car state:
// relative velocity between sprung and unsprung mass.
Eigen::RowVector4d rattle_output();

// |rattle-space-velocity / elevation| frequency gain of a quarter-car at
// a given travel speed: |C_xi (j 2 pi f I - A)^-1 B| / speed. The golden
// car at 80 km/h peaks near 10.7 Hz with gain ~4.85.
double response_gain(const VehicleParams& p, double freq_hz, double speed_mps = kIriSpeed);

// Undamped-ordering natural frequencies |lambda| / 2 pi of the A matrix,
// ascending, one entry per conjugate pair.
std::vector<double> natural_frequencies(const StateSpace& sys);

}  // namespace rri
