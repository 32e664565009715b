#pragma once

// Exponent triples and coefficients of the series solution for reflection at
// the barrier y = b - a x.
//
// Each term of the series is  D_k (e^{g1 u1} - rho_k e^{g3 u1}) e^{g2 u2}
// where (g1, g2) and (g3, g2) are both roots of the characteristic equation
//
//   (c1 g1 + c2 g2 - lambda - q)(alpha + g1 + g2) + lambda alpha = 0
//
// and consecutive triples are chained by g3_k - a g2_k = g1_{k+1} - a g2_{k+1}.

#include <iosfwd>
#include <utility>
#include <vector>

#include "twodiv/model.hpp"

namespace twodiv {

struct GammaStep {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    /// Coefficient D_k. Underflows to 0 for large k; use D_scaled for sums.
    double D = 0.0;
    /// D_k * e^{g2 b}, the form used by every evaluation.
    double D_scaled = 0.0;
    double disc_g2 = 0.0;  ///< discriminant of the quadratic that produced g2
    double disc_g1 = 0.0;  ///< discriminant of the quadratic that produced g1, g3

    /// (g3 + g2 + alpha) / (g1 + g2 + alpha)
    double rho(double alpha) const { return (g3 + g2 + alpha) / (g1 + g2 + alpha); }
};

struct GammaSequences {
    std::vector<GammaStep> steps;
    std::vector<GammaStep> primed_steps;
    double E = 0.0;
    double a_prime = 0.0;
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    /// Last E-series term relative to its partial sum, max over both families.
    double tail_ratio = 0.0;
};

/// Left side of the characteristic equation at (g1, g2).
double characteristic(double g1, double g2, const ModelParams& params);

/// |characteristic| divided by the magnitude of its largest expanded term.
double characteristic_residual(double g1, double g2, const ModelParams& params);

/// Positive root of ((m^2+m)c1 + (1+m)c2) g^2 + (m(alpha c1-q-lambda) + alpha c2-q-lambda) g
/// - alpha q = 0. Throws DomainError if the leading coefficient is not positive.
double gamma2_initial(double m, const ModelParams& params);

struct G1G3 {
    double g1 = 0.0;    ///< "+sqrt" root
    double g3 = 0.0;    ///< "-sqrt" root
    double disc = 0.0;
};

/// Both roots in g1 of the characteristic equation for fixed g2.
G1G3 solve_g1_g3(double g2, const ModelParams& params);

struct Gamma2Advance {
    double g2 = 0.0;
    double disc = 0.0;
    double s = 0.0;  ///< prev.g3 - slope * prev.g2, the linkage offset
};

/// Larger root for the next g2 given the previous triple and the linkage slope.
Gamma2Advance advance_gamma2(const GammaStep& prev, double slope, const ModelParams& params);

/// Exactly n triples: the first from gamma2_initial(init_slope) with g1 = init_slope * g2,
/// the rest chained with link_slope. D fields are left at zero.
std::vector<GammaStep> build_family(double init_slope, double link_slope,
                                    const ModelParams& params, int n);

struct SequenceOptions {
    int max_terms = 200;
    double tail_tol = 1e-12;
    int guard_terms = 4;  ///< extra terms kept after the E series has converged
};

/// Both families, coefficients and E for a reflection barrier.
/// Throws ConvergenceError when the E series has not converged by max_terms.
GammaSequences build_sequences(const BarrierSpec& barrier, const ModelParams& params,
                               const SequenceOptions& opt = {});

/// CSV: k,g1,g2,g3,D,g1',g2',g3',D'
void write_sequences_csv(std::ostream& os, const GammaSequences& seq);

}  // namespace twodiv
