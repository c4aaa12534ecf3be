#pragma once

#include "rri/types.hpp"

namespace rri {

// Exact zero-order-hold discretization via the augmented matrix
// exponential exp([[A*T, B*T], [0, 0]]): F = e^{AT},
// G = integral_0^T e^{A tau} B dtau. H = C unchanged.
DiscreteStateSpace discretize(const StateSpace& sys, double T);

}  // namespace rri
