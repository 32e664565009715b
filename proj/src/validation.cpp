#include "twodiv/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "twodiv/barrier_valuation.hpp"
#include "twodiv/quadrature.hpp"
#include "twodiv/scale_function.hpp"

namespace twodiv {

namespace {

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

CheckResult worst(const std::string& name, double value, double limit) {
    return {name, value <= limit, "max " + fmt("%.3e", value) + " (limit " + fmt("%.1e", limit) + ")"};
}

double rel(double x, double y) { return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}); }

}  // namespace

std::vector<CheckResult> check_gamma_family(const std::vector<GammaStep>& F, double m, double a,
                                            const ModelParams& p, const std::string& label) {
    std::vector<CheckResult> out;
    int bad_sign = -1, bad_disc = -1, bad_mono = -1;
    double resid = 0.0, link = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const auto& s = F[k];
        if (bad_sign < 0 && !(s.g2 > 0.0 && s.g3 < 0.0 && s.g1 > s.g3)) bad_sign = static_cast<int>(k);
        if (bad_disc < 0 && !(s.disc_g1 > 0.0 && s.disc_g2 > 0.0)) bad_disc = static_cast<int>(k);
        resid = std::max({resid, characteristic_residual(s.g1, s.g2, p), characteristic_residual(s.g3, s.g2, p)});
        if (k + 1 < F.size()) {
            const auto& n = F[k + 1];
            link = std::max(link, rel(s.g3 - a * s.g2, n.g1 - a * n.g2));
            if (bad_mono < 0 && !(n.g2 > s.g2 && n.g3 < s.g3)) bad_mono = static_cast<int>(k);
        }
    }
    auto at = [](int k) { return k < 0 ? std::string("all terms") : "fails at k=" + std::to_string(k); };
    out.push_back({label + " signs g2>0, g3<0, g1>g3", bad_sign < 0, at(bad_sign)});
    out.push_back({label + " discriminants > 0", bad_disc < 0, at(bad_disc)});
    out.push_back(worst(label + " root residual", resid, 1e-9));
    if (!F.empty()) out.push_back(worst(label + " g1_0 = m g2_0", rel(F[0].g1, m * F[0].g2), 1e-12));
    out.push_back(worst(label + " linkage g3_k - a g2_k = g1_k+1 - a g2_k+1", link, 1e-9));
    out.push_back({label + " g2 increasing, g3 decreasing", bad_mono < 0, at(bad_mono)});
    return out;
}

std::vector<CheckResult> check_gamma_invariants(double a, const ModelParams& p, int n) {
    const double ap = (a - p.c2) / (p.c1 + 1.0);
    const auto F = build_family(a, a, p, n);
    const auto P = build_family(ap, a, p, n);
    const std::string tag = "gamma a=" + fmt("%g", a);
    auto out = check_gamma_family(F, a, a, p, tag);
    auto more = check_gamma_family(P, ap, a, p, tag + " primed");
    out.insert(out.end(), more.begin(), more.end());
    out.push_back({tag + " a' < 0", ap < 0.0, "a' = " + fmt("%.6g", ap)});
    if (n > 41) {
        const double limit = (p.c1 * a + p.c1) / (p.c1 * a + p.c2);
        for (const auto* fam : {&F, &P}) {
            const double r = (*fam)[41].g2 / (*fam)[40].g2;
            const double err = std::abs(r / limit - 1.0);
            out.push_back({tag + (fam == &P ? " primed" : "") + " g2 ratio at k=40", err < 0.01,
                           "ratio " + fmt("%.6f", r) + " vs " + fmt("%.6f", limit)});
            const auto& s = (*fam)[40];
            const double e1 = std::abs(s.g1 / s.g2 / (-p.c2 / p.c1) - 1.0);
            const double e3 = std::abs(s.g3 / s.g2 + 1.0);
            out.push_back({tag + (fam == &P ? " primed" : "") + " g1/g2 -> -c2/c1, g3/g2 -> -1 at k=40",
                           e1 < 0.01 && e3 < 0.01,
                           "g1/g2 " + fmt("%.6f", s.g1 / s.g2) + ", g3/g2 " + fmt("%.6f", s.g3 / s.g2)});
        }
    }
    return out;
}

void read_sequences_csv(std::istream& in, std::vector<GammaStep>& steps, std::vector<GammaStep>& primed) {
    steps.clear();
    primed.clear();
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        while (cols.size() < 9) cols.emplace_back();
        auto take = [&](int off, std::vector<GammaStep>& dst) {
            if (cols[off].empty()) return;
            GammaStep s;
            s.g1 = std::stod(cols[off]);
            s.g2 = std::stod(cols[off + 1]);
            s.g3 = std::stod(cols[off + 2]);
            s.D = std::stod(cols[off + 3]);
            s.disc_g1 = s.disc_g2 = 1.0;  // not stored in the dump
            dst.push_back(s);
        };
        take(1, steps);
        take(5, primed);
    }
}

std::vector<CheckResult> check_barrier_series(double a, double b, const ModelParams& p) {
    std::vector<CheckResult> out;
    const auto br = BarrierSpec::reflection(a, b, p);
    const std::string tag = "series a=" + fmt("%g", a) + " b=" + fmt("%g", b);

    const double corner = v1_barrier({0.0, b}, br, p).value;
    out.push_back(worst(tag + " V(0,b) = 0", std::abs(corner), 1e-6));

    // 20 points strictly below the line with u1 < u2.
    double worst_pide = 0.0;
    for (double u1 : {0.25, 0.5, 1.0, 1.5, 2.0})
        for (double u2f : {0.2, 0.35, 0.5, 0.65}) {
            const double top = b - a * u1;
            const double u2 = u1 + 0.1 + u2f * (top - u1 - 0.1);
            const Reserves u{u1, u2};
            const double v = v1_barrier(u, br, p).value;
            const double r = pide_residual(u, br, p, 1e-4);
            worst_pide = std::max(worst_pide, std::abs(r) / ((p.lambda + p.q) * v));
        }
    out.push_back(worst(tag + " PIDE residual / ((lambda+q) V)", worst_pide, 1e-4));

    double worst_bnd = 0.0;
    const double u1_max = b / (1.0 + a);  // u1 < u2 on the line
    for (int i = 1; i <= 10; ++i) {
        const double u1 = u1_max * i / 11.0;
        const double r = boundary_residual({u1, b - a * u1}, br, p, 1e-4);
        worst_bnd = std::max(worst_bnd, std::abs(r) / br.delta0());
    }
    out.push_back(worst(tag + " boundary residual / delta0", worst_bnd, 1e-3));

    {
        const Reserves u{1.0, 2.0};
        const double v20 = v1_barrier(u, BarrierSpec::reflection(a, 20, p), p).value;
        const double v40 = v1_barrier(u, BarrierSpec::reflection(a, 40, p), p).value;
        const double v80 = v1_barrier(u, BarrierSpec::reflection(a, 80, p), p).value;
        out.push_back({"series a=" + fmt("%g", a) + " decreasing in b at 20,40,80", v20 > v40 && v40 > v80 && v80 >= 0.0,
                       fmt("%.6g", v20) + " > " + fmt("%.6g", v40) + " > " + fmt("%.6g", v80)});
    }
    {
        SequenceOptions o1, o2;
        o2.guard_terms = 2 * o1.guard_terms + 10;
        const auto s1 = build_sequences(br, p, o1);
        const auto s2 = build_sequences(br, p, o2);
        const double v1 = evaluate_series(s1, 1.0, 2.0).value, v2 = evaluate_series(s2, 1.0, 2.0).value;
        out.push_back(worst(tag + " stable under extra terms", rel(v1, v2), 1e-11));
    }
    return out;
}

std::vector<CheckResult> check_scale_function(const ModelParams& p) {
    std::vector<CheckResult> out;
    const auto sp = scale_params(p);
    out.push_back({"scale q+ > 0 > q-", sp.q_plus > 0.0 && sp.q_minus < 0.0,
                   "q+ = " + fmt("%.10g", sp.q_plus) + ", q- = " + fmt("%.10g", sp.q_minus)});
    const double r = std::max(std::abs(psi(sp.q_plus, p) - p.q), std::abs(psi(sp.q_minus, p) - p.q)) / p.q;
    out.push_back(worst("scale psi(q+-) = q", r, 1e-12));
    out.push_back(worst("scale A+ - A- = 1", std::abs(sp.A_plus - sp.A_minus - 1.0), 1e-12));
    out.push_back(worst("scale W(0) = 1/c2", std::abs(w_q(0.0, sp) - 1.0 / p.c2), 1e-14));

    double worst_lt = 0.0;
    for (double d : {0.5, 1.0, 2.0}) {
        const double theta = sp.q_plus + d;
        quad::Options qo;
        qo.abs_tol = 0.0;
        qo.rel_tol = 1e-12;
        const double lt = quad::integrate([&](double x) { return std::exp(-theta * x) * w_q(x, sp); }, 0.0, 200.0, qo,
                                          std::vector<double>{1.0, 5.0, 20.0, 60.0})
                              .value;
        worst_lt = std::max(worst_lt, std::abs(lt * (psi(theta, p) - p.q) - 1.0));
    }
    out.push_back(worst("scale Laplace transform = 1/(psi - q)", worst_lt, 1e-6));

    double worst_d = 0.0;
    const double h = 1e-6;
    const auto up = scale_params_at(p, p.q + h), dn = scale_params_at(p, p.q - h);
    for (double x : {0.5, 2.0, 10.0}) {
        const double fd = (w_q(x, up) - w_q(x, dn)) / (2.0 * h);
        worst_d = std::max(worst_d, std::abs(dw_dq(x, sp) - fd) / std::abs(fd));
    }
    out.push_back(worst("scale dW/dq vs central difference", worst_d, 1e-5));
    out.push_back(worst("scale dW/dq(0) = 0", std::abs(dw_dq(0.0, sp)), 1e-12));

    const auto tilt = phi_inverse(p);
    out.push_back(worst("tilt Phi(q) = q+", std::abs(tilt.phi - sp.q_plus), 1e-12));
    out.push_back({"tilt lambda_q < lambda", tilt.lambda_q < p.lambda, fmt("lambda_q = %.10g", tilt.lambda_q)});
    return out;
}

std::vector<CheckResult> run_validation(const ModelParams& params) {
    validate_model(params);
    std::vector<CheckResult> out;
    for (double a : {0.1, 0.2, 0.5, 1.0}) {
        if (!(a < params.c2)) continue;
        auto g = check_gamma_invariants(a, params, 60);
        out.insert(out.end(), g.begin(), g.end());
    }
    auto s = check_barrier_series(0.1, 14.0, params);
    out.insert(out.end(), s.begin(), s.end());
    auto w = check_scale_function(params);
    out.insert(out.end(), w.begin(), w.end());
    return out;
}

void write_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
    os << "check,status,detail\n";
    for (const auto& c : checks) os << c.name << ',' << (c.pass ? "PASS" : "FAIL") << ',' << c.detail << '\n';
}

}  // namespace twodiv
