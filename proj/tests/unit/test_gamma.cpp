#include <doctest.h>

#include <cmath>
#include <sstream>

#include "twodiv/errors.hpp"
#include "twodiv/gamma_engine.hpp"
#include "twodiv/validation.hpp"

using namespace twodiv;

namespace {

// Root of f on [lo, hi] by plain bisection; f(lo) and f(hi) must differ in sign.
template <class F>
double bisect(F f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) lo = mid, flo = fm;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("gamma_engine") {

TEST_CASE("g1, g3 agree with bisection on the characteristic equation") {
    const auto p = reference_params();
    for (double g2 : {0.05, 0.5, 3.0, 40.0}) {
        const auto r = solve_g1_g3(g2, p);
        const double mid = 0.5 * (r.g1 + r.g3);  // vertex of the quadratic in g1
        auto f = [&](double g1) { return characteristic(g1, g2, p); };
        const double span = 10.0 * (1.0 + std::abs(r.g1) + std::abs(r.g3));
        CHECK(r.g1 == doctest::Approx(bisect(f, mid, mid + span)).epsilon(1e-12));
        CHECK(r.g3 == doctest::Approx(bisect(f, mid - span, mid)).epsilon(1e-12));
        CHECK(r.g1 > r.g3);
    }
}

TEST_CASE("gamma2_initial solves the characteristic equation on the ray g1 = m g2") {
    const auto p = reference_params();
    for (double m : {0.1, 0.5, 1.0, -0.58}) {
        const double g2 = gamma2_initial(m, p);
        CHECK(g2 > 0.0);
        CHECK(std::abs(characteristic(m * g2, g2, p)) < 1e-12);
        auto f = [&](double g) { return characteristic(m * g, g, p); };
        CHECK(g2 == doctest::Approx(bisect(f, 1e-12, 50.0)).epsilon(1e-12));
    }
}

TEST_CASE("gamma2_initial rejects a non-positive leading coefficient") {
    const auto p = reference_params();
    CHECK_THROWS_AS(gamma2_initial(-1.0, p), DomainError);
}

TEST_CASE("families satisfy the sign, linkage and growth invariants") {
    const auto p = reference_params();
    for (double a : {0.1, 0.2, 0.5, 1.0}) {
        for (const auto& c : check_gamma_invariants(a, p, 60)) {
            INFO(c.name << ": " << c.detail);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("the E series converges and D'_0 is one") {
    const auto p = reference_params();
    const auto seq = build_sequences(BarrierSpec::reflection(0.1, 14.0, p), p);
    CHECK(seq.tail_ratio < 1e-12);
    REQUIRE_FALSE(seq.primed_steps.empty());
    CHECK(seq.primed_steps[0].D == doctest::Approx(1.0));
    CHECK(seq.a_prime == doctest::Approx((0.1 - 3.0) / 5.0));
    // term ratio at (0, b) shrinks
    const auto& s = seq.steps;
    auto term = [&](std::size_t k) { return std::abs(s[k].D_scaled * (1.0 - s[k].rho(seq.alpha))); };
    CHECK(term(8) / term(7) < term(2) / term(1));
}

TEST_CASE("too few terms raise ConvergenceError") {
    const auto p = reference_params();
    SequenceOptions o;
    o.max_terms = 3;
    CHECK_THROWS_AS(build_sequences(BarrierSpec::reflection(0.1, 14.0, p), p, o), ConvergenceError);
}

TEST_CASE("refraction that is not reflection is refused") {
    const auto p = reference_params();
    auto b = BarrierSpec::reflection(0.1, 14.0, p);
    b.delta2 = 1.0;
    CHECK_THROWS_AS(build_sequences(b, p), DomainError);
}

TEST_CASE("sequence dump round-trips") {
    const auto p = reference_params();
    const auto seq = build_sequences(BarrierSpec::reflection(0.2, 10.0, p), p);
    std::stringstream ss;
    write_sequences_csv(ss, seq);
    std::vector<GammaStep> s, ps;
    read_sequences_csv(ss, s, ps);
    REQUIRE(s.size() == seq.steps.size());
    REQUIRE(ps.size() == seq.primed_steps.size());
    CHECK(s.back().g2 == seq.steps.back().g2);
    CHECK(ps[3].g3 == seq.primed_steps[3].g3);
}

}
