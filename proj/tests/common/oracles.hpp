#pragma once

// Reference formulas kept apart from the library code they check.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "twodiv/quadrature.hpp"
#include "twodiv/scale_function.hpp"

namespace twodiv::oracle {

// Density of a compound Poisson sum S(t) with exponential(alpha) jumps at
// rate lambda, s > 0, through the modified Bessel function I1.
inline double compound_poisson_density(double s, double t, double lambda, double alpha) {
    const double k = lambda * t * alpha;
    return std::exp(-lambda * t - alpha * s) * std::sqrt(k / s) *
           boost::math::cyl_bessel_i(1, 2.0 * std::sqrt(k * s));
}

// Pollaczek-Khinchine ruin probability: geometric number of exponential ladder heights.
inline double pk_ruin(double z, double c, double lambda, double alpha) {
    const double rho = lambda / (c * alpha);
    double sum = 0.0, w = 1.0 - rho;
    for (int n = 1; n < 2000; ++n) {
        w *= rho;
        sum += w * boost::math::gamma_q(static_cast<double>(n), alpha * z);
        if (w < 1e-18) break;
    }
    return sum;
}

// int_0^{u} W^(q)(u - x) alpha e^{-alpha x} dx / W^(q)(u) by quadrature.
inline double cycle_transform(double u, double q, const ModelParams& p) {
    const auto sp = scale_params_at(p, q);
    const double al = p.alpha();
    quad::Options o;
    o.abs_tol = 1e-13;
    return quad::integrate([&](double x) { return w_q(u - x, sp) * al * std::exp(-al * x); }, 0.0, u, o).value /
           w_q(u, sp);
}

}  // namespace twodiv::oracle
