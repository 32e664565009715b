#pragma once

// Backward march for the exit functional of company 2 during an impulse cycle
// with u1 <= u2:
//
//   g(t, z) = E[e^{-q (tau_U - t)}; tau_U < tau_L | Z(t) = z]
//
// where tau_U is the first return to u2 and tau_L the first passage below the
// moving barrier max(0, u2 - u1 - (c1 - c2) t). Between claims Z moves up at
// rate c2, so the grid is laid on characteristics (dz = c2 dt) and only the
// claim integral needs quadrature. For t >= R the barrier is 0 and
// g(R, z) = W^(q)(z) / W^(q)(u2).

#include "twodiv/impulse_valuation.hpp"

namespace twodiv {

/// int_0^{u1} g(0, u2 - x) alpha e^{-alpha x} dx at discount rate q with
/// n_time steps on [0, R]. Second-order in 1/n_time.
double exit_march_integral(const ImpulseSpec& spec, const ModelParams& params, double q, int n_time);

/// Time steps so that the z spacing is about u2 / z_cells.
int exit_march_steps(const ImpulseSpec& spec, const ModelParams& params, int z_cells);

}  // namespace twodiv
