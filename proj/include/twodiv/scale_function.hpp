#pragma once

// q-scale function of the one-dimensional process  x + c t - S(t)  with
// exponential(alpha) claims at rate lambda:
//
//   psi(theta) = c theta - lambda theta / (alpha + theta)
//   W^(q)(x)   = (A+ e^{q+ x} - A- e^{q- x}) / c,   A+- = (alpha + q+-) / (q+ - q-)
//
// where q+ > 0 > q- solve psi(theta) = q.

#include "twodiv/model.hpp"

namespace twodiv {

struct ScaleParams {
    double c = 0.0;  ///< drift used for this sub-process
    double q = 0.0;
    double q_plus = 0.0;
    double q_minus = 0.0;
    double A_plus = 0.0;
    double A_minus = 0.0;
    double dq_plus = 0.0;   ///< d q+ / dq
    double dq_minus = 0.0;  ///< d q- / dq
    double dA_plus = 0.0;
    double dA_minus = 0.0;
};

struct TiltedModel {
    double phi = 0.0;       ///< Phi(q), right inverse of psi
    double lambda_q = 0.0;  ///< lambda alpha / (alpha + phi)
    double alpha_q = 0.0;   ///< alpha + phi
};

/// Scale data for drift `c` (company 2's premium c2 when c <= 0 is passed).
ScaleParams scale_params(const ModelParams& params, double c = 0.0);

/// Same at an explicit discount rate, for finite-difference checks in q.
ScaleParams scale_params_at(const ModelParams& params, double q, double c = 0.0);

/// Laplace exponent c theta - lambda theta / (alpha + theta), theta > -alpha.
double psi(double theta, const ModelParams& params, double c = 0.0);

double w_q(double x, const ScaleParams& sp);
/// W^(q)'(x), derivative in x.
double w_q_prime(double x, const ScaleParams& sp);
double dw_dq(double x, const ScaleParams& sp);

TiltedModel phi_inverse(const ModelParams& params, double c = 0.0);
TiltedModel phi_inverse_at(const ModelParams& params, double q, double c = 0.0);

}  // namespace twodiv
