#pragma once

#include <cstdint>

#include "rri/types.hpp"

namespace rri {

// Drive a suspension model over a road profile and record what an IMU
// would measure. Continuous dynamics are integrated with classic RK4 at
// dt/10 substeps; the road input is linearly interpolated at the wheel
// station (integral of the speed profile). The quarter-car takes the
// track average as input, the half-car takes (u_l, u_r). The initial
// state is the static equilibrium for the road elevation at station 0.
// Additive white Gaussian noise of std `noise_std` lands on each output
// channel. If the drive would run off the profile end the trace is
// truncated and flagged.
SimTrace drive(const RoadProfile& profile, const SpeedProfile& speed,
               const VehicleParams& params, Model model, double dt,
               double noise_std, std::uint64_t seed);

}  // namespace rri
