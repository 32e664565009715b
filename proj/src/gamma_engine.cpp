#include "twodiv/gamma_engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twodiv {

namespace {

struct Roots {
    double lo, hi, disc;
};

// Both real roots of A x^2 + B x + C with A > 0, each without cancellation.
Roots quadratic_roots(double A, double B, double C) {
    const double disc = B * B - 4.0 * A * C;
    if (!(disc >= 0.0)) {
        std::ostringstream os;
        os << "negative discriminant " << disc << " in quadratic (" << A << ", " << B << ", " << C << ")";
        throw DomainError(os.str());
    }
    const double sq = std::sqrt(disc);
    const double big = -0.5 * (B + std::copysign(sq, B));
    double r1 = big / A;
    double r2 = big != 0.0 ? C / big : 0.0;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2, disc};
}

}  // namespace

double characteristic(double g1, double g2, const ModelParams& p) {
    const double al = p.alpha();
    return (p.c1 * g1 + p.c2 * g2 - p.lambda - p.q) * (al + g1 + g2) + p.lambda * al;
}

double characteristic_residual(double g1, double g2, const ModelParams& p) {
    const double al = p.alpha();
    const double lin = std::abs(p.c1 * g1) + std::abs(p.c2 * g2) + p.lambda + p.q;
    const double scale = lin * (al + std::abs(g1) + std::abs(g2)) + p.lambda * al;
    return std::abs(characteristic(g1, g2, p)) / scale;
}

double gamma2_initial(double m, const ModelParams& p) {
    const double al = p.alpha();
    const double A = (m * m + m) * p.c1 + (1.0 + m) * p.c2;
    if (!(A > 0.0)) {
        std::ostringstream os;
        os << "gamma2_initial: leading coefficient " << A << " <= 0 for slope " << m;
        throw DomainError(os.str());
    }
    const double B = m * (al * p.c1 - p.q - p.lambda) + al * p.c2 - p.q - p.lambda;
    const double C = -al * p.q;
    return quadratic_roots(A, B, C).hi;
}

G1G3 solve_g1_g3(double g2, const ModelParams& p) {
    const double al = p.alpha();
    const double B = p.c1 * al + (p.c1 + p.c2) * g2 - p.lambda - p.q;
    const double C = (p.c2 * g2 - p.lambda - p.q) * (al + g2) + p.lambda * al;
    const auto r = quadratic_roots(p.c1, B, C);
    return {r.hi, r.lo, r.disc};
}

Gamma2Advance advance_gamma2(const GammaStep& prev, double a, const ModelParams& p) {
    const double al = p.alpha();
    const double s = prev.g3 - a * prev.g2;
    const double A = (a * a + a) * p.c1 + (1.0 + a) * p.c2;
    const double B = s * (2.0 * p.c1 * a + p.c1 + p.c2) - (p.lambda + p.q) * (1.0 + a) +
                     al * (a * p.c1 + p.c2);
    const double C = p.c1 * s * s + (p.c1 * al - p.lambda - p.q) * s - al * p.q;
    const auto r = quadratic_roots(A, B, C);
    return {r.hi, r.disc, s};
}

namespace {

GammaStep first_step(double m, const ModelParams& p) {
    GammaStep st;
    st.g2 = gamma2_initial(m, p);
    const auto r = solve_g1_g3(st.g2, p);
    st.g1 = m * st.g2;
    st.g3 = r.g3;
    st.disc_g1 = r.disc;
    const double al = p.alpha();
    const double A = (m * m + m) * p.c1 + (1.0 + m) * p.c2;
    const double B = m * (al * p.c1 - p.q - p.lambda) + al * p.c2 - p.q - p.lambda;
    st.disc_g2 = B * B + 4.0 * A * al * p.q;
    return st;
}

GammaStep next_step(const GammaStep& prev, double a, const ModelParams& p) {
    GammaStep st;
    const auto adv = advance_gamma2(prev, a, p);
    st.g2 = adv.g2;
    st.disc_g2 = adv.disc;
    const auto r = solve_g1_g3(st.g2, p);
    st.g1 = adv.s + a * st.g2;
    st.g3 = r.g3;
    st.disc_g1 = r.disc;
    return st;
}

}  // namespace

std::vector<GammaStep> build_family(double init_slope, double link_slope, const ModelParams& p,
                                    int n) {
    std::vector<GammaStep> out;
    if (n <= 0) return out;
    out.reserve(static_cast<std::size_t>(n));
    out.push_back(first_step(init_slope, p));
    while (static_cast<int>(out.size()) < n) out.push_back(next_step(out.back(), link_slope, p));
    return out;
}

GammaSequences build_sequences(const BarrierSpec& barrier, const ModelParams& params,
                               const SequenceOptions& opt) {
    validate_model(params);
    validate_barrier(barrier, params);
    if (!barrier.is_reflection(params))
        throw DomainError("series solution requires reflection rates delta = (c1 + 1, c2 - a)");
    if (opt.max_terms < 2) throw std::invalid_argument("max_terms must be >= 2");

    const double al = params.alpha();
    const double a = barrier.a, b = barrier.b;
    const double d1 = params.c1 + 1.0, d2 = params.c2 - a;

    GammaSequences seq;
    seq.a = a;
    seq.b = b;
    seq.alpha = al;
    seq.a_prime = (a - params.c2) / (params.c1 + 1.0);

    auto& F = seq.steps;
    auto& P = seq.primed_steps;
    F.push_back(first_step(a, params));
    P.push_back(first_step(seq.a_prime, params));

    F[0].D_scaled = barrier.delta0() / (F[0].g1 * d1 + F[0].g2 * d2);
    F[0].D = F[0].D_scaled * std::exp(-F[0].g2 * b);
    P[0].D = 1.0;
    P[0].D_scaled = std::exp(P[0].g2 * b);

    auto next_D = [&](const GammaStep& k, const GammaStep& k1) {
        return k.rho(al) * (k.g3 * d1 + k.g2 * d2) / (k1.g1 * d1 + k1.g2 * d2) * k.D_scaled;
    };
    auto e_term = [&](const GammaStep& s) { return s.D_scaled * (1.0 - s.rho(al)); };

    double num = e_term(F[0]), den = e_term(P[0]);
    int converged_at = -1;
    double tail = 1.0;
    while (static_cast<int>(F.size()) < opt.max_terms) {
        auto f = next_step(F.back(), a, params);
        auto g = next_step(P.back(), a, params);
        f.D_scaled = next_D(F.back(), f);
        g.D_scaled = next_D(P.back(), g);
        f.D = f.D_scaled * std::exp(-f.g2 * b);
        g.D = g.D_scaled * std::exp(-g.g2 * b);
        F.push_back(f);
        P.push_back(g);
        const double tf = e_term(f), tg = e_term(g);
        num += tf;
        den += tg;
        if (converged_at < 0) {
            tail = std::max(std::abs(tf) / std::abs(num), std::abs(tg) / std::abs(den));
            if (tail < opt.tail_tol) converged_at = static_cast<int>(F.size());
        }
        if (converged_at >= 0 && static_cast<int>(F.size()) >= converged_at + opt.guard_terms) break;
    }
    if (converged_at < 0) {
        std::ostringstream os;
        os << "gamma series for E did not converge in " << opt.max_terms
           << " terms (tail ratio " << tail << ")";
        throw ConvergenceError(os.str());
    }
    seq.E = -num / den;
    seq.tail_ratio = tail;
    return seq;
}

void write_sequences_csv(std::ostream& os, const GammaSequences& seq) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "k,g1,g2,g3,D,g1',g2',g3',D'\n" << std::setprecision(17);
    const std::size_t n = std::max(seq.steps.size(), seq.primed_steps.size());
    for (std::size_t k = 0; k < n; ++k) {
        os << k;
        for (const auto* fam : {&seq.steps, &seq.primed_steps}) {
            if (k < fam->size()) {
                const auto& s = (*fam)[k];
                os << ',' << s.g1 << ',' << s.g2 << ',' << s.g3 << ',' << s.D;
            } else {
                os << ",,,,";
            }
        }
        os << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace twodiv
