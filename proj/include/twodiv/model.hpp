#pragma once

// Domain types for the two-company proportional-reinsurance risk process:
//
//   X1(t) = u1 + c1 t - S(t),   X2(t) = u2 + c2 t - S(t),
//
// where S is a compound Poisson sum of claims hitting both companies at once,
// and the barrier region B = {x, y >= 0, y >= b - a x}.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "twodiv/errors.hpp"

namespace twodiv {

struct ExponentialClaims {
    double rate = 1.0;  ///< alpha; mean claim is 1 / alpha
};

/// Claims given only by a sampler; usable by the simulator, rejected by the
/// analytic modules.
struct SampledClaims {
    std::string name;
    double mean = 0.0;
    /// Maps a uniform variate in (0,1) to a claim size.
    std::function<double(double)> inverse_cdf;
};

class ClaimDistribution {
public:
    ClaimDistribution() = default;
    ClaimDistribution(ExponentialClaims e) : kind_(e) {}
    ClaimDistribution(SampledClaims s) : kind_(std::move(s)) {}

    static ClaimDistribution exponential(double rate) { return ExponentialClaims{rate}; }

    bool is_exponential() const { return std::holds_alternative<ExponentialClaims>(kind_); }

    /// Rate alpha of exponential claims; throws UnsupportedDistribution otherwise.
    double exponential_rate() const;

    double mean() const;

    /// Claim size from a uniform variate u in (0,1).
    double sample(double u) const;

    std::string describe() const;

private:
    std::variant<ExponentialClaims, SampledClaims> kind_{ExponentialClaims{}};
};

struct ModelParams {
    double c1 = 0.0;      ///< premium rate of company 1
    double c2 = 0.0;      ///< premium rate of company 2 (the reinsurer)
    double lambda = 0.0;  ///< claim arrival intensity
    ClaimDistribution claims;
    double q = 0.0;       ///< discount rate

    /// alpha for exponential claims (throws UnsupportedDistribution otherwise).
    double alpha() const { return claims.exponential_rate(); }
};

/// Parameters used for every numerical table: alpha=2, c1=4, c2=3, lambda=1, q=0.1.
ModelParams reference_params();

/// Every violated invariant of `params`, in a fixed order. Empty means valid.
std::vector<std::string> model_violations(const ModelParams& params);

/// Returns `params` unchanged when valid; otherwise throws ModelError carrying
/// the complete list of violations.
const ModelParams& validate_model(const ModelParams& params);

/// Linear barrier y = b - a x with refraction rates delta = (delta1, delta2).
struct BarrierSpec {
    double a = 0.0;
    double b = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;

    /// Reflection along the barrier: delta = c - (-1, a).
    static BarrierSpec reflection(double a, double b, const ModelParams& params);

    double delta0() const { return delta1 + delta2; }

    /// True when delta equals the reflection rates for `params` (to 1e-12).
    bool is_reflection(const ModelParams& params) const;
};

std::vector<std::string> barrier_violations(const BarrierSpec& barrier, const ModelParams& params);

/// Throws ModelError when the barrier is invalid for the given model.
const BarrierSpec& validate_barrier(const BarrierSpec& barrier, const ModelParams& params);

struct Reserves {
    double u1 = 0.0;
    double u2 = 0.0;
};

enum class Region {
    Interior,         ///< strictly inside B
    OnLine,           ///< on the barrier line B0
    Complement,       ///< below the barrier, inside the quadrant
    OutsideQuadrant,  ///< a negative coordinate
};

inline constexpr double kOnLineTolerance = 1e-12;

Region classify_point(const Reserves& u, const BarrierSpec& barrier);

const char* to_string(Region r);

}  // namespace twodiv
