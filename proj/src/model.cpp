#include "twodiv/model.hpp"

#include <cmath>
#include <sstream>

namespace twodiv {

double ClaimDistribution::exponential_rate() const {
    if (const auto* e = std::get_if<ExponentialClaims>(&kind_)) return e->rate;
    throw UnsupportedDistribution("analytic route requires exponential claims, got " + describe());
}

double ClaimDistribution::mean() const {
    if (const auto* e = std::get_if<ExponentialClaims>(&kind_)) return 1.0 / e->rate;
    return std::get<SampledClaims>(kind_).mean;
}

double ClaimDistribution::sample(double u) const {
    if (const auto* e = std::get_if<ExponentialClaims>(&kind_)) return -std::log1p(-u) / e->rate;
    return std::get<SampledClaims>(kind_).inverse_cdf(u);
}

std::string ClaimDistribution::describe() const {
    std::ostringstream os;
    if (const auto* e = std::get_if<ExponentialClaims>(&kind_)) {
        os << "Exponential(rate=" << e->rate << ")";
    } else {
        const auto& s = std::get<SampledClaims>(kind_);
        os << (s.name.empty() ? "sampled" : s.name) << "(mean=" << s.mean << ")";
    }
    return os.str();
}

ModelParams reference_params() {
    ModelParams p;
    p.c1 = 4.0;
    p.c2 = 3.0;
    p.lambda = 1.0;
    p.claims = ClaimDistribution::exponential(2.0);
    p.q = 0.1;
    return p;
}

std::vector<std::string> model_violations(const ModelParams& p) {
    std::vector<std::string> out;
    if (!(p.c1 > p.c2)) out.emplace_back("c1 > c2 violated");
    if (!(p.c2 > 0.0)) out.emplace_back("c2 > 0 violated");
    if (!(p.q > 0.0)) out.emplace_back("q > 0 violated");
    if (!(p.lambda > 0.0)) out.emplace_back("lambda > 0 violated");

    bool claims_ok = true;
    if (p.claims.is_exponential() && !(p.claims.exponential_rate() > 0.0)) {
        out.emplace_back("alpha > 0 violated");
        claims_ok = false;
    }
    const double mean = claims_ok ? p.claims.mean() : 0.0;
    if (claims_ok && !(std::isfinite(mean) && mean > 0.0)) {
        out.emplace_back("claim mean finite and positive violated");
        claims_ok = false;
    }
    if (claims_ok) {
        const double outflow = p.lambda * mean;
        if (!(p.c1 > outflow)) out.emplace_back("net profit for company 1 violated");
        if (!(p.c2 > outflow)) out.emplace_back("net profit for company 2 violated");
    }
    return out;
}

const ModelParams& validate_model(const ModelParams& params) {
    auto v = model_violations(params);
    if (!v.empty()) throw ModelError(std::move(v));
    return params;
}

BarrierSpec BarrierSpec::reflection(double a, double b, const ModelParams& params) {
    return BarrierSpec{a, b, params.c1 + 1.0, params.c2 - a};
}

bool BarrierSpec::is_reflection(const ModelParams& params) const {
    return std::abs(delta1 - (params.c1 + 1.0)) <= 1e-12 &&
           std::abs(delta2 - (params.c2 - a)) <= 1e-12;
}

std::vector<std::string> barrier_violations(const BarrierSpec& br, const ModelParams& p) {
    std::vector<std::string> out;
    if (!(br.a > 0.0)) out.emplace_back("a > 0 violated");
    if (!(br.b > 0.0)) out.emplace_back("b > 0 violated");
    if (!(br.delta1 > 0.0)) out.emplace_back("delta1 > 0 violated");
    if (!(br.delta2 > 0.0)) {
        out.emplace_back(br.is_reflection(p) ? "c2 > a violated (reflection needs delta2 = c2 - a > 0)"
                                             : "delta2 > 0 violated");
    }
    if (!(p.c1 - br.delta1 < 0.0)) out.emplace_back("c1 - delta1 < 0 violated");
    return out;
}

const BarrierSpec& validate_barrier(const BarrierSpec& barrier, const ModelParams& params) {
    auto v = barrier_violations(barrier, params);
    if (!v.empty()) throw ModelError(std::move(v));
    return barrier;
}

Region classify_point(const Reserves& u, const BarrierSpec& barrier) {
    if (u.u1 < 0.0 || u.u2 < 0.0) return Region::OutsideQuadrant;
    const double gap = u.u2 - (barrier.b - barrier.a * u.u1);
    if (std::abs(gap) <= kOnLineTolerance) return Region::OnLine;
    return gap > 0.0 ? Region::Interior : Region::Complement;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::Interior: return "interior";
        case Region::OnLine: return "on-line";
        case Region::Complement: return "complement";
        case Region::OutsideQuadrant: return "outside-quadrant";
    }
    return "?";
}

}  // namespace twodiv
