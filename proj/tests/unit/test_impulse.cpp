#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "twodiv/errors.hpp"
#include "twodiv/impulse_valuation.hpp"
#include "twodiv/quadrature.hpp"
#include "twodiv/rng.hpp"
#include "twodiv/simulator.hpp"
#include "oracles.hpp"

using namespace twodiv;

namespace {

double mc_mean(const ImpulseSpec& s, const ModelParams& p, std::uint64_t n, std::uint64_t cycles, double* se) {
    SimConfig cfg;
    cfg.n_paths = n;
    cfg.master_seed = 5;
    cfg.max_cycles = cycles;
    const auto e = estimate_impulse_moments(s, p, cfg);
    *se = e.moment(1).std_error;
    return e.moment(1).mean;
}

}  // namespace

TEST_SUITE("impulse_valuation") {

TEST_CASE("Erlang mixture matches the Bessel form") {
    const auto p = reference_params();
    const auto tilt = phi_inverse(p);
    for (int j : {1, 2})
        for (double t : {0.1, 1.0, 5.0})
            for (double x : {0.01, 0.3, 1.0, 4.0}) {
                const double c = j == 1 ? p.c1 : p.c2;
                const double ref = c * oracle::compound_poisson_density(c * x, t, tilt.lambda_q, tilt.alpha_q);
                CHECK(erlang_mixture_density(j, t, x, tilt, p) == doctest::Approx(ref).epsilon(1e-11));
            }
}

TEST_CASE("Erlang mixture carries the mass missing from the atom") {
    const auto p = reference_params();
    const auto tilt = phi_inverse(p);
    for (double t : {0.1, 1.0, 5.0}) {
        quad::Options o;
        o.abs_tol = 1e-12;
        const double m = quad::integrate_to_infinity([&](double x) { return erlang_mixture_density(2, t, x, tilt, p); }, 0.0, o).value;
        CHECK(std::abs(m + std::exp(-tilt.lambda_q * t) - 1.0) < 1e-8);
    }
}

TEST_CASE("Erlang mixture against sampled compound Poisson sums (KS)") {
    const auto p = reference_params();
    const auto tilt = phi_inverse(p);
    const double t = 2.0;
    PhiloxStream rng(2024, 0);
    std::vector<double> xs;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double s = 0.0, clock = rng.exponential(tilt.lambda_q);
        while (clock < t) {
            s += rng.exponential(tilt.alpha_q);
            clock += rng.exponential(tilt.lambda_q);
        }
        xs.push_back(s / p.c1);
    }
    std::sort(xs.begin(), xs.end());
    const double atom = std::exp(-tilt.lambda_q * t);
    double D = 0.0, F = atom, last = 0.0;
    quad::Options o;
    o.abs_tol = 1e-12;
    for (int i = 0; i < n; ++i) {
        if (xs[i] <= 0.0) continue;
        F += quad::integrate([&](double x) { return erlang_mixture_density(1, t, x, tilt, p); }, last, xs[i], o).value;
        last = xs[i];
        D = std::max({D, std::abs(F - double(i + 1) / n), std::abs(F - double(i) / n)});
    }
    CHECK(D < 1.63 / std::sqrt(double(n)));  // 1% level
}

TEST_CASE("tilted ruin probability equals the Pollaczek-Khinchine sum") {
    const auto p = reference_params();
    const auto tilt = phi_inverse(p);
    for (double z : {0.0, 0.5, 2.0, 10.0})
        CHECK(std::abs(tilted_ruin_probability(z, tilt, p) - oracle::pk_ruin(z, p.c2, tilt.lambda_q, tilt.alpha_q)) < 1e-12);
    CHECK_THROWS_AS(tilted_ruin_probability(-1.0, tilt, p), DomainError);
}

TEST_CASE("high case: each piece against its own oracle") {
    const auto p = reference_params();
    const ImpulseSpec s{3.0, 2.0, 0.5};
    const auto v = impulse_v1_high(s, p);
    CHECK(v.method == ImpulseMethod::ClosedFormHigh);
    CHECK(v.p > 0.0);
    CHECK(v.p < 1.0);
    CHECK(v.value == doctest::Approx(v.A / (1.0 - v.p)));

    auto P = [&](double q) { return oracle::cycle_transform(s.u2, q, p); };
    const double lq = p.lambda / (p.lambda + p.q);
    CHECK(v.p == doctest::Approx(lq * P(p.q)).epsilon(1e-10));
    const double h = 1e-5;
    CHECK(v.tau_moment == doctest::Approx(-(P(p.q + h) - P(p.q - h)) / (2 * h)).epsilon(1e-6));

    double se = 0.0;
    const double mc = mc_mean(s, p, 40000, SimConfig{}.max_cycles, &se);
    CHECK(std::abs(mc - v.value) < 4.0 * se);
    const double a_mc = mc_mean(s, p, 40000, 1, &se);
    CHECK(std::abs(a_mc - v.A) < 4.0 * se);
}

TEST_CASE("low case: both routes against Monte Carlo") {
    const auto p = reference_params();
    const ImpulseSpec s{1.0, 2.0, 0.5};
    const auto march = impulse_v1_low(s, p);
    CHECK(march.method == ImpulseMethod::QuadratureLow);
    double se = 0.0;
    const double mc = mc_mean(s, p, 40000, SimConfig{}.max_cycles, &se);
    CHECK(std::abs(mc - march.value) < 4.0 * se);
    LowCaseOptions o;
    o.route = LowRoute::SurvivalRatio;
    const auto ratio = impulse_v1_low(s, p, o);
    CHECK(ratio.method == ImpulseMethod::SurvivalRatioLow);
    CHECK(ratio.value == doctest::Approx(march.value).epsilon(0.02));
}

TEST_CASE("u1 = u2 joins the closed form") {
    const auto p = reference_params();
    const auto seam = impulse_v1({2.0, 2.0, 0.5}, p);
    const auto high = impulse_v1({2.0 + 1e-9, 2.0, 0.5}, p);
    CHECK(seam.value == doctest::Approx(high.value).epsilon(1e-6));
    CHECK(seam.p == doctest::Approx(high.p).epsilon(1e-6));
}

TEST_CASE("survival functional at the barrier-free start is one minus ruin") {
    const auto p = reference_params();
    const auto tilt = phi_inverse(p);
    const ImpulseSpec s{2.0, 2.0, 0.5};
    CHECK(v_q(1.5, s, tilt, p) == doctest::Approx(1.0 - tilted_ruin_probability(1.5, tilt, p)));
    const ImpulseSpec low{1.0, 2.0, 0.5};
    const double a = v_q(1.1, low, tilt, p), b = v_q(1.5, low, tilt, p), c = v_q(2.0, low, tilt, p);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c < 1.0);
    CHECK_THROWS_AS(v_q(0.5, low, tilt, p), DomainError);
}

TEST_CASE("moving lower barrier") {
    const auto p = reference_params();
    const ImpulseSpec s{1.0, 2.0, 0.5};
    CHECK(lower_barrier(0.0, s, p) == 1.0);
    CHECK(lower_barrier(0.5, s, p) == doctest::Approx(0.5));
    CHECK(lower_barrier(2.0, s, p) == 0.0);
    CHECK(lower_barrier(0.0, {3.0, 2.0, 0.5}, p) == 0.0);
}

TEST_CASE("invalid inputs") {
    const auto p = reference_params();
    CHECK_THROWS_AS(impulse_v1({1.0, 2.0, 0.0}, p), ModelError);
    CHECK_THROWS_AS(impulse_v1({-1.0, 2.0, 0.5}, p), ModelError);
    CHECK_THROWS_AS(impulse_v1_high({1.0, 2.0, 0.5}, p), DomainError);
    CHECK_THROWS_AS(impulse_v1_low({3.0, 2.0, 0.5}, p), DomainError);
    CHECK(impulse_violations({-1.0, -1.0, 0.0}).size() == 3);
}

TEST_CASE("large cost gives a warning") {
    const auto p = reference_params();
    const auto v = impulse_v1({3.0, 2.0, 50.0}, p);
    CHECK(v.A < 0.0);
    CHECK_FALSE(v.warning.empty());
}

}
