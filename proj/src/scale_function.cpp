#include "twodiv/scale_function.hpp"

#include <cmath>

namespace twodiv {

namespace {

double drift(const ModelParams& p, double c) { return c > 0.0 ? c : p.c2; }

void check_x(double x) {
    if (x < 0.0) throw DomainError("scale function needs x >= 0");
}

}  // namespace

ScaleParams scale_params_at(const ModelParams& p, double q, double c_in) {
    const double c = drift(p, c_in);
    const double al = p.alpha();
    if (!(q > 0.0)) throw DomainError("scale function needs q > 0");

    ScaleParams s;
    s.c = c;
    s.q = q;
    const double d = q + p.lambda - al * c;
    const double D = d * d + 4.0 * c * q * al;
    const double sq = std::sqrt(D);
    // q+ without cancellation; q- from q+ q- = -q alpha / c.
    s.q_plus = d >= 0.0 ? (d + sq) / (2.0 * c) : 2.0 * q * al / (sq - d);
    s.q_minus = -q * al / (c * s.q_plus);
    const double gap = s.q_plus - s.q_minus;
    s.A_plus = (al + s.q_plus) / gap;
    s.A_minus = (al + s.q_minus) / gap;

    // dD/dq = 2d + 4 c alpha, so dsqrt(D)/dq = (d + 2 c alpha)/sqrt(D) = (q + lambda + alpha c)/sqrt(D).
    const double dsq = (q + p.lambda + al * c) / sq;
    s.dq_plus = (1.0 + dsq) / (2.0 * c);
    // From q+ q- = -q alpha / c: q-' = (-alpha/c - q+' q-) / q+.
    s.dq_minus = (-al / c - s.dq_plus * s.q_minus) / s.q_plus;
    const double dgap = s.dq_plus - s.dq_minus;
    s.dA_plus = (s.dq_plus * gap - (al + s.q_plus) * dgap) / (gap * gap);
    s.dA_minus = (s.dq_minus * gap - (al + s.q_minus) * dgap) / (gap * gap);
    return s;
}

ScaleParams scale_params(const ModelParams& p, double c) { return scale_params_at(p, p.q, c); }

double psi(double theta, const ModelParams& p, double c) {
    const double al = p.alpha();
    if (!(theta > -al)) throw DomainError("psi needs theta > -alpha");
    return drift(p, c) * theta - p.lambda * theta / (al + theta);
}

double w_q(double x, const ScaleParams& s) {
    check_x(x);
    return (s.A_plus * std::exp(s.q_plus * x) - s.A_minus * std::exp(s.q_minus * x)) / s.c;
}

double w_q_prime(double x, const ScaleParams& s) {
    check_x(x);
    return (s.A_plus * s.q_plus * std::exp(s.q_plus * x) -
            s.A_minus * s.q_minus * std::exp(s.q_minus * x)) /
           s.c;
}

double dw_dq(double x, const ScaleParams& s) {
    check_x(x);
    const double ep = std::exp(s.q_plus * x), em = std::exp(s.q_minus * x);
    return ((s.dA_plus + s.A_plus * s.dq_plus * x) * ep - (s.dA_minus + s.A_minus * s.dq_minus * x) * em) /
           s.c;
}

TiltedModel phi_inverse_at(const ModelParams& p, double q, double c) {
    const auto s = scale_params_at(p, q, c);
    const double al = p.alpha();
    TiltedModel t;
    t.phi = s.q_plus;
    t.alpha_q = al + t.phi;
    t.lambda_q = p.lambda * al / t.alpha_q;
    return t;
}

TiltedModel phi_inverse(const ModelParams& p, double c) { return phi_inverse_at(p, p.q, c); }

}  // namespace twodiv
