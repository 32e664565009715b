#pragma once

// Impulse policy: every time company 2 climbs back to u2 after a claim, the
// surplus accumulated by company 1 is paid out in one lump, less a fixed cost K,
// and both reserves restart from (u1, u2). With p the discounted probability
// of completing a cycle and A the discounted payout of one cycle,
//
//   V1 = A / (1 - p).

#include <string>
#include <vector>

#include "twodiv/model.hpp"
#include "twodiv/scale_function.hpp"

namespace twodiv {

struct ImpulseSpec {
    double u1 = 0.0;
    double u2 = 0.0;
    double K = 0.0;  ///< fixed cost per impulse
};

std::vector<std::string> impulse_violations(const ImpulseSpec& spec);
const ImpulseSpec& validate_impulse(const ImpulseSpec& spec);

enum class ImpulseMethod {
    ClosedFormHigh,    ///< u1 > u2, scale-function closed form
    QuadratureLow,     ///< u1 <= u2, backward march of the exit functional
    SurvivalRatioLow,  ///< u1 <= u2, tilted survival ratio with ballot densities
};

const char* to_string(ImpulseMethod m);

struct ImpulseValuation {
    double value = 0.0;
    double p = 0.0;           ///< E[e^{-q T}; cycle completes]
    double A = 0.0;           ///< discounted payout of one cycle
    double tau_moment = 0.0;  ///< -d/dq of the cycle-completion transform (without lambda/(q+lambda))
    ImpulseMethod method = ImpulseMethod::ClosedFormHigh;
    std::string warning;      ///< set when A < 0
};

/// Closed form for u1 > u2.
ImpulseValuation impulse_v1_high(const ImpulseSpec& spec, const ModelParams& params);

enum class LowRoute { ExitMarch, SurvivalRatio };

struct LowCaseOptions {
    LowRoute route = LowRoute::ExitMarch;
    double dq_step = 0.0;   ///< 0 means 1e-4 q
    int z_cells = 800;      ///< exit march cells across [0, u2] on the coarse grid
    double quad_tol = 1e-8;
    double inner_tol = 1e-6;
};

/// u1 <= u2. The default route is exact up to grid error; SurvivalRatio
/// follows the tilted-measure identity, which carries a small bias when u1 < u2.
ImpulseValuation impulse_v1_low(const ImpulseSpec& spec, const ModelParams& params,
                                const LowCaseOptions& opt = {});

/// Dispatches on u1 > u2.
ImpulseValuation impulse_v1(const ImpulseSpec& spec, const ModelParams& params,
                            const LowCaseOptions& low = {});

/// Lower barrier seen by company 2 during an excursion started at time 0:
/// max(0, u2 - u1 - (c1 - c2) t) (identically 0 when u1 >= u2).
double lower_barrier(double t, const ImpulseSpec& spec, const ModelParams& params);

// ---- tilted-measure building blocks -------------------------------------

/// Density at x > 0 of S(t)/c_j under the tilted measure (claims at rate
/// lambda_q, sizes exponential(alpha_q)). The zero-claim atom e^{-lambda_q t}
/// is excluded.
double erlang_mixture_density(int j, double t, double x, const TiltedModel& tilt,
                              const ModelParams& params, double trunc_tol = 1e-14);

/// Ruin probability of z + c2 t - S(t) under the tilted measure.
double tilted_ruin_probability(double z, const TiltedModel& tilt, const ModelParams& params);

/// Density in z of X1(R) on {no ruin before R} for the tilted first-company
/// path started at c1 v (ballot theorem form). The no-claim atom at
/// z = c1 (v + R) is excluded.
double ballot_crossing_density(double z, double R, double v, const TiltedModel& tilt,
                               const ModelParams& params, double tol = 1e-6);

/// Survival functional V^(q)(y) for the piecewise lower barrier, y >= u2 - u1.
double v_q(double y, const ImpulseSpec& spec, const TiltedModel& tilt, const ModelParams& params,
           double tol = 1e-6);

}  // namespace twodiv
