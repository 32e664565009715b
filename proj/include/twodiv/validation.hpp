#pragma once

// Self-checks behind the `validate` command: root-sequence invariants, series
// residuals against the integro-differential equation and the barrier
// condition, and the scale-function transform.

#include <iosfwd>
#include <string>
#include <vector>

#include "twodiv/gamma_engine.hpp"
#include "twodiv/model.hpp"

namespace twodiv {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Sign, ordering, discriminant, root-residual, linkage and monotonicity checks
/// on one family built with initial slope m and linkage slope a.
std::vector<CheckResult> check_gamma_family(const std::vector<GammaStep>& family, double m, double a,
                                            const ModelParams& params, const std::string& label);

/// Both families with n terms for slope a, plus the growth-ratio check at k=40.
std::vector<CheckResult> check_gamma_invariants(double a, const ModelParams& params, int n = 60);

/// Reads the k,g1,g2,g3,D,g1',g2',g3',D' dump back into two families.
void read_sequences_csv(std::istream& in, std::vector<GammaStep>& steps, std::vector<GammaStep>& primed);

/// V(0,b)=0, residuals at 20 points of the complement and 10 points on the line,
/// decay in b and stability under more terms.
std::vector<CheckResult> check_barrier_series(double a, double b, const ModelParams& params);

/// Roots of psi, A+ - A- = 1, Laplace transform at three theta, dW/dq against
/// central differences.
std::vector<CheckResult> check_scale_function(const ModelParams& params);

std::vector<CheckResult> run_validation(const ModelParams& params);

void write_checks(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace twodiv
