#include "twodiv/impulse_valuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "twodiv/exit_march.hpp"
#include "twodiv/quadrature.hpp"

namespace twodiv {

std::vector<std::string> impulse_violations(const ImpulseSpec& s) {
    std::vector<std::string> out;
    if (!(s.u1 >= 0.0)) out.emplace_back("u1 >= 0 violated");
    if (!(s.u2 >= 0.0)) out.emplace_back("u2 >= 0 violated");
    if (!(s.K > 0.0)) out.emplace_back("K > 0 violated");
    return out;
}

const ImpulseSpec& validate_impulse(const ImpulseSpec& spec) {
    auto v = impulse_violations(spec);
    if (!v.empty()) throw ModelError(std::move(v));
    return spec;
}

const char* to_string(ImpulseMethod m) {
    switch (m) {
        case ImpulseMethod::ClosedFormHigh: return "closed-form";
        case ImpulseMethod::QuadratureLow: return "quadrature";
        case ImpulseMethod::SurvivalRatioLow: return "quadrature-survival-ratio";
    }
    return "?";
}

double lower_barrier(double t, const ImpulseSpec& s, const ModelParams& p) {
    return std::max(0.0, s.u2 - s.u1 - (p.c1 - p.c2) * t);
}

namespace {

ImpulseValuation assemble(const ImpulseSpec& s, const ModelParams& p, double P, double I,
                          ImpulseMethod method) {
    const double lq = p.lambda / (p.q + p.lambda);
    ImpulseValuation out;
    out.method = method;
    out.p = lq * P;
    out.tau_moment = I;
    out.A = p.c1 / (p.q + p.lambda) - s.K * out.p + lq * (p.c1 - p.c2) * I;
    if (!(out.p >= 0.0 && out.p < 1.0)) {
        std::ostringstream os;
        os << "cycle discount factor p = " << out.p << " outside [0, 1)";
        throw std::logic_error(os.str());
    }
    out.value = out.A / (1.0 - out.p);
    if (out.A < 0.0) out.warning = "A < 0: each impulse pays less than its cost on average";
    return out;
}

// -d/dq of P by central differences, Richardson-extrapolated once.
double tau_moment_fd(const std::function<double(double)>& P, double q, double h) {
    const double d1 = (P(q + h) - P(q - h)) / (2.0 * h);
    const double d2 = (P(q + 0.5 * h) - P(q - 0.5 * h)) / h;
    return -(4.0 * d2 - d1) / 3.0;
}

void check_common(const ImpulseSpec& s, const ModelParams& p) {
    p.alpha();
    validate_model(p);
    validate_impulse(s);
}

}  // namespace

ImpulseValuation impulse_v1_high(const ImpulseSpec& s, const ModelParams& p) {
    check_common(s, p);
    if (!(s.u1 > s.u2)) throw DomainError("closed form needs u1 > u2");

    const double al = p.alpha(), u2 = s.u2;
    const auto sp = scale_params(p);
    const double W = w_q(u2, sp);
    const double dW = dw_dq(u2, sp);
    const double gap = sp.q_plus - sp.q_minus;
    const double ep = std::exp(sp.q_plus * u2), em = std::exp(sp.q_minus * u2), ea = std::exp(-al * u2);

    // N = int_0^{u2} W(u2 - x) alpha e^{-alpha x} dx and its q-derivative.
    const double N = al / p.c2 * (ep - em) / gap;
    auto G = [&](double qq, double e) { return (e - ea) / (qq + al); };
    auto H = [&](double qq, double e) {
        const double beta = qq + al;
        return (u2 / beta - 1.0 / (beta * beta)) * e + ea / (beta * beta);
    };
    const double dN = al / p.c2 *
                      (sp.dA_plus * G(sp.q_plus, ep) + sp.A_plus * sp.dq_plus * H(sp.q_plus, ep) -
                       sp.dA_minus * G(sp.q_minus, em) - sp.A_minus * sp.dq_minus * H(sp.q_minus, em));
    const double P = N / W;
    const double I = N * dW / (W * W) - dN / W;
    return assemble(s, p, P, I, ImpulseMethod::ClosedFormHigh);
}

ImpulseValuation impulse_v1_low(const ImpulseSpec& s, const ModelParams& p, const LowCaseOptions& opt) {
    check_common(s, p);
    if (!(s.u1 <= s.u2)) throw DomainError("low case needs u1 <= u2");
    const double al = p.alpha();
    const double h = opt.dq_step > 0.0 ? opt.dq_step : 1e-4 * p.q;
    if (!(h < p.q)) throw DomainError("dq_step must be below q");

    std::function<double(double)> P;
    ImpulseMethod method = ImpulseMethod::QuadratureLow;
    quad::Options qo;
    qo.abs_tol = opt.quad_tol;

    if (s.u1 == s.u2) {
        // Barrier is 0 throughout: the exit functional is W(u2 - x) / W(u2).
        P = [&](double q) {
            const auto sp = scale_params_at(p, q);
            const double W = w_q(s.u2, sp);
            return quad::integrate([&](double x) { return w_q(s.u2 - x, sp) / W * al * std::exp(-al * x); },
                                   0.0, s.u1, qo)
                .value;
        };
        if (opt.route == LowRoute::SurvivalRatio) method = ImpulseMethod::SurvivalRatioLow;
    } else if (opt.route == LowRoute::ExitMarch) {
        const int n = exit_march_steps(s, p, opt.z_cells);
        P = [&, n](double q) {
            const double coarse = exit_march_integral(s, p, q, n);
            const double fine = exit_march_integral(s, p, q, 2 * n);
            return (4.0 * fine - coarse) / 3.0;
        };
    } else {
        method = ImpulseMethod::SurvivalRatioLow;
        P = [&](double q) {
            const auto tilt = phi_inverse_at(p, q);
            const double top = v_q(s.u2, s, tilt, p, opt.inner_tol);
            if (!(top > 0.0)) throw ConvergenceError("survival functional vanished at u2");
            auto f = [&](double x) {
                return std::exp(-tilt.phi * x) * v_q(s.u2 - x, s, tilt, p, opt.inner_tol) / top * al *
                       std::exp(-al * x);
            };
            const auto r = quad::integrate(f, 0.0, s.u1, qo);
            return r.value;
        };
    }

    const double P0 = P(p.q);
    const double I = tau_moment_fd(P, p.q, h);
    return assemble(s, p, P0, I, method);
}

ImpulseValuation impulse_v1(const ImpulseSpec& s, const ModelParams& p, const LowCaseOptions& low) {
    return s.u1 > s.u2 ? impulse_v1_high(s, p) : impulse_v1_low(s, p, low);
}

double erlang_mixture_density(int j, double t, double x, const TiltedModel& tilt, const ModelParams& p,
                              double trunc_tol) {
    if (j != 1 && j != 2) throw std::invalid_argument("company index must be 1 or 2");
    if (!(t > 0.0) || x < 0.0) return 0.0;
    const double lt = tilt.lambda_q * t;
    const double beta = tilt.alpha_q * (j == 1 ? p.c1 : p.c2);
    if (x == 0.0) return std::exp(-lt) * lt * beta;

    const double mu = lt * beta * x;
    // Terms T_i = e^{-lt} lt^i / i! * beta^i x^{i-1} e^{-beta x} / (i-1)!, T_{i+1}/T_i = mu / (i (i+1)).
    auto log_term = [&](int i) {
        return -lt - beta * x + i * std::log(lt * beta) + (i - 1) * std::log(x) - std::lgamma(i + 1.0) -
               std::lgamma(static_cast<double>(i));
    };
    const int mode = std::max(1, static_cast<int>(std::ceil(0.5 * (std::sqrt(1.0 + 4.0 * mu) - 1.0))));
    double sum = 1.0, term = 1.0;
    for (int i = mode - 1; i >= 1; --i) {
        term *= static_cast<double>(i) * (i + 1) / mu;
        sum += term;
        if (term < trunc_tol * sum) break;
    }
    term = 1.0;
    for (int i = mode;; ++i) {
        const double r = mu / (static_cast<double>(i) * (i + 1));
        term *= r;
        sum += term;
        const double rn = mu / (static_cast<double>(i + 1) * (i + 2));
        if (rn < 1.0 && term * rn / (1.0 - rn) < trunc_tol * sum) break;
        if (i > mode + 100000) break;
    }
    return std::exp(log_term(mode)) * sum;
}

double tilted_ruin_probability(double z, const TiltedModel& tilt, const ModelParams& p) {
    if (z < 0.0) throw DomainError("tilted ruin probability needs z >= 0");
    return tilt.lambda_q / (p.c2 * tilt.alpha_q) * std::exp(-(tilt.alpha_q - tilt.lambda_q / p.c2) * z);
}

double ballot_crossing_density(double z, double R, double v, const TiltedModel& tilt, const ModelParams& p,
                               double tol) {
    if (!(R > 0.0) || v < 0.0 || z < 0.0) throw DomainError("ballot density needs R > 0, v >= 0, z >= 0");
    const double c1 = p.c1;
    const double phi = v - z / c1 + R;
    if (phi < 0.0) throw DomainError("ballot density: z beyond the no-claim position");
    auto f = [&](double t, double x) { return erlang_mixture_density(1, t, x, tilt, p); };

    double r = f(R, phi);
    if (z / c1 < R) r -= std::exp(-tilt.lambda_q * z / c1) * f(R - z / c1, phi);
    if (phi > v) {
        quad::Options qo;
        qo.abs_tol = tol;
        const auto conv = quad::integrate(
            [&](double w) {
                const double left = R + v - w;
                if (!(left > 0.0)) return 0.0;
                return z / (c1 * left) * f(left, phi - w) * f(w - v, w);
            },
            v, phi, qo);
        r -= conv.value;
    }
    return r / c1;
}

double v_q(double y, const ImpulseSpec& s, const TiltedModel& tilt, const ModelParams& p, double tol) {
    if (!(s.u1 <= s.u2)) throw DomainError("survival functional needs u1 <= u2");
    const double floor0 = s.u2 - s.u1;
    if (y < floor0) throw DomainError("survival functional needs y >= u2 - u1");
    const double R = floor0 / (p.c1 - p.c2);
    if (R == 0.0) return 1.0 - tilted_ruin_probability(y, tilt, p);

    const double v = (y - floor0) / p.c1;
    const double top = p.c1 * (v + R);
    quad::Options qo;
    qo.abs_tol = tol;
    const double kink[] = {p.c1 * R};
    const auto body = quad::integrate(
        [&](double z) {
            return ballot_crossing_density(z, R, v, tilt, p, tol) * (1.0 - tilted_ruin_probability(z, tilt, p));
        },
        0.0, top, qo, kink);
    return body.value + std::exp(-tilt.lambda_q * R) * (1.0 - tilted_ruin_probability(top, tilt, p));
}

}  // namespace twodiv
