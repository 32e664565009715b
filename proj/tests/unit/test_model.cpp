#include <doctest.h>

#include <sstream>

#include "twodiv/config.hpp"
#include "twodiv/errors.hpp"
#include "twodiv/model.hpp"

using namespace twodiv;

TEST_SUITE("model") {

TEST_CASE("reference parameters are valid") {
    const auto p = reference_params();
    CHECK(p.c1 == 4.0);
    CHECK(p.c2 == 3.0);
    CHECK(p.lambda == 1.0);
    CHECK(p.q == doctest::Approx(0.1));
    CHECK(p.alpha() == 2.0);
    CHECK(model_violations(p).empty());
}

TEST_CASE("every violation is reported at once") {
    ModelParams p = reference_params();
    p.c1 = 2.0;  // below c2
    p.q = -1.0;
    try {
        validate_model(p);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(e.violations().size() >= 2);
    }
}

TEST_CASE("net profit condition for company 2") {
    ModelParams p = reference_params();
    p.c2 = 0.4;  // lambda / alpha = 0.5
    CHECK_FALSE(model_violations(p).empty());
}

TEST_CASE("sampled claims are rejected by the analytic side") {
    ModelParams p = reference_params();
    p.claims = SampledClaims{"pareto", 0.5, [](double u) { return 0.5 * u; }};
    CHECK_THROWS_AS(p.alpha(), UnsupportedDistribution);
    CHECK(p.claims.sample(0.5) == doctest::Approx(0.25));
}

TEST_CASE("reflection barrier rates") {
    const auto p = reference_params();
    const auto b = BarrierSpec::reflection(0.1, 14.0, p);
    CHECK(b.delta1 == doctest::Approx(p.c1 + 1.0));
    CHECK(b.delta2 == doctest::Approx(p.c2 - 0.1));
    CHECK(b.is_reflection(p));
    auto other = b;
    other.delta1 += 0.5;
    CHECK_FALSE(other.is_reflection(p));
}

TEST_CASE("point classification") {
    const auto p = reference_params();
    const auto b = BarrierSpec::reflection(0.5, 4.0, p);
    CHECK(classify_point({1.0, 2.0}, b) == Region::Complement);
    CHECK(classify_point({2.0, 3.0}, b) == Region::OnLine);
    CHECK(classify_point({2.0, 3.5}, b) == Region::Interior);
    CHECK(classify_point({-0.1, 1.0}, b) == Region::OutsideQuadrant);
    CHECK(classify_point({0.0, 4.0 + 1e-13}, b) == Region::OnLine);
}

TEST_CASE("config parser") {
    std::istringstream in("# model\nc1 = 5\nlambda=0.5  # comment\n\nq = 0.05\n");
    const auto p = parse_model_config(in);
    CHECK(p.c1 == 5.0);
    CHECK(p.c2 == 3.0);
    CHECK(p.lambda == 0.5);
    CHECK(p.q == 0.05);
    CHECK(p.alpha() == 2.0);
}

TEST_CASE("config parser rejects bad documents") {
    for (const char* doc : {"c3 = 1\n", "c1 = 4\nc1 = 5\n", "c1 = four\n", "c1\n", "q = 0.1x\n"}) {
        std::istringstream in(doc);
        CHECK_THROWS_AS(parse_model_config(in), ConfigError);
    }
    CHECK_THROWS_AS(load_model_config("/nonexistent/model.cfg"), ConfigError);
}

}
