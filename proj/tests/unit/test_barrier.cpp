#include <doctest.h>

#include <cmath>
#include <sstream>

#include "twodiv/barrier_valuation.hpp"
#include "twodiv/errors.hpp"
#include "twodiv/simulator.hpp"

using namespace twodiv;

TEST_SUITE("barrier_valuation") {

TEST_CASE("series agrees with the Monte Carlo oracle") {
    const auto p = reference_params();
    struct Case {
        Reserves u;
        double a, b;
    };
    for (const Case& c : {Case{{1, 2}, 0.1, 14}, Case{{0.5, 1.5}, 1.0, 6}}) {
        const auto br = BarrierSpec::reflection(c.a, c.b, p);
        const double v = v1_barrier(c.u, br, p).value;
        SimConfig cfg;
        cfg.n_paths = 40000;
        cfg.master_seed = 11;
        const auto mc = estimate_barrier_moments(c.u, br, p, cfg);
        const auto& m = mc.moment(1);
        INFO("series " << v << " mc " << m.mean << " +- " << m.std_error);
        CHECK(std::abs(v - m.mean) < 4.0 * m.std_error + mc.truncation_bias_bound);
    }
}

TEST_CASE("V vanishes at the corner (0, b)") {
    const auto p = reference_params();
    for (double b : {6.0, 14.0, 20.0}) CHECK(std::abs(v1_barrier({0.0, b}, BarrierSpec::reflection(0.1, b, p), p).value) < 1e-8);
}

TEST_CASE("PIDE and boundary residuals are small") {
    const auto p = reference_params();
    const auto br = BarrierSpec::reflection(0.1, 14.0, p);
    for (Reserves u : {Reserves{0.5, 3.0}, Reserves{2.0, 8.0}, Reserves{1.0, 12.0}}) {
        const double v = v1_barrier(u, br, p).value;
        CHECK(std::abs(pide_residual(u, br, p, 1e-4)) < 1e-4 * (p.lambda + p.q) * v);
    }
    for (double u1 : {1.0, 5.0, 10.0})
        CHECK(std::abs(boundary_residual({u1, 14.0 - 0.1 * u1}, br, p, 1e-4)) < 1e-3 * br.delta0());
}

TEST_CASE("residual operator on a function with known residual") {
    // V = u1 + u2: c.grad V = c1 + c2, integral term = lambda int_0^m (u1+u2-2v) alpha e^{-alpha v} dv.
    const auto p = reference_params();
    const Reserves u{1.0, 2.0};
    const double al = p.alpha(), m = 1.0;
    const double e = std::exp(-al * m);
    const double mass = 1.0 - e;
    const double first = (1.0 - e * (1.0 + al * m)) / al;
    const double expect = p.c1 + p.c2 - (p.lambda + p.q) * 3.0 + p.lambda * (3.0 * mass - 2.0 * first);
    CHECK(pide_residual([](double x, double y) { return x + y; }, u, p, 1e-4) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("value decreases as the barrier moves away and increases in u1") {
    const auto p = reference_params();
    const Reserves u{1.0, 2.0};
    double prev = 1e300;
    for (double b : {14.0, 20.0, 40.0, 80.0}) {
        const double v = v1_barrier(u, BarrierSpec::reflection(0.1, b, p), p).value;
        CHECK(v < prev);
        prev = v;
    }
    const auto br = BarrierSpec::reflection(0.1, 14.0, p);
    double last = -1.0;
    for (double u1 : {0.0, 0.5, 1.0, 1.5, 1.9}) {
        const double v = v1_barrier({u1, 2.0}, br, p).value;
        CHECK(v > last);
        last = v;
    }
}

TEST_CASE("region checks") {
    const auto p = reference_params();
    const auto br = BarrierSpec::reflection(0.5, 4.0, p);
    CHECK_THROWS_AS(v1_barrier({2.0, 3.5}, br, p), DomainError);   // interior
    CHECK_THROWS_AS(v1_barrier({-1.0, 1.0}, br, p), DomainError);  // outside
    CHECK_THROWS_AS(v1_barrier({2.0, 1.0}, br, p), DomainError);   // u1 >= u2
    ModelParams bad = p;
    bad.claims = SampledClaims{"uniform", 0.5, [](double x) { return x; }};
    CHECK_THROWS_AS(v1_barrier({1.0, 2.0}, br, bad), UnsupportedDistribution);
}

TEST_CASE("cache returns the same sequences") {
    const auto p = reference_params();
    SequenceCache cache;
    const auto br = BarrierSpec::reflection(0.3, 9.0, p);
    const auto a = v1_barrier({1.0, 2.0}, br, p, 1e-12, &cache);
    const auto b = v1_barrier({0.5, 3.0}, br, p, 1e-12, &cache);
    CHECK(a.sequences == b.sequences);
    CHECK(cache.size() == 1);
    ModelParams p2 = p;
    p2.q = 0.2;
    v1_barrier({1.0, 2.0}, BarrierSpec::reflection(0.3, 9.0, p2), p2, 1e-12, &cache);
    CHECK(cache.size() == 2);
    const auto fresh = v1_barrier({1.0, 2.0}, br, p, 1e-12, nullptr);
    CHECK(fresh.value == a.value);
}

TEST_CASE("sweep csv marks failed cells") {
    std::ostringstream os;
    write_sweep_csv(os, {SweepRow{0.1, 14, 1, 2, 37.9, 14, 0.0, ""}, SweepRow{0.1, 1, 1, 2, 0, 0, 0, "interior"}});
    const auto s = os.str();
    CHECK(s.rfind("a,b,u1,u2,v1,terms,tail\n", 0) == 0);
    CHECK(s.find("nan") != std::string::npos);
}

}
