#include <doctest.h>

#include <sstream>

#include "twodiv/optimizer.hpp"
#include "twodiv/reference_tables.hpp"

using namespace twodiv;

TEST_SUITE("optimizer") {

TEST_CASE("sweep argmax is the largest evaluated cell") {
    const auto p = reference_params();
    const std::vector<double> as{0.1, 0.5, 1.0}, bs{6.0, 10.0, 14.0, 20.0};
    const auto r = sweep_barrier({1.0, 2.0}, as, bs, p);
    REQUIRE(r.grid.size() == 12);
    REQUIRE(r.has_argmax);
    double best = -1.0;
    for (const auto& row : r.grid) {
        CHECK(row.error.empty());
        best = std::max(best, row.v1);
    }
    CHECK(r.argmax_value == best);
    CHECK(r.grid[1].a == 0.1);
    CHECK(r.grid[1].b == 10.0);
}

TEST_CASE("failing cells are kept and skipped") {
    const auto p = reference_params();
    const auto r = sweep_barrier({1.0, 2.0}, {0.1}, {1.0, 14.0}, p);  // b=1: point inside the region
    REQUIRE(r.grid.size() == 2);
    CHECK_FALSE(r.grid[0].error.empty());
    CHECK(r.argmax_b == 14.0);
    std::ostringstream os;
    write_sweep_result(os, r);
    CHECK(os.str().find("argmax,0.1,14,") != std::string::npos);
}

TEST_CASE("no evaluable cell means no argmax") {
    const auto p = reference_params();
    const auto r = sweep_barrier({1.0, 2.0}, {0.1}, {1.0}, p);
    CHECK_FALSE(r.has_argmax);
}

TEST_CASE("ties go to the first cell") {
    const auto p = reference_params();
    const auto r = sweep_barrier({1.0, 2.0}, {0.1, 0.1}, {14.0}, p);
    CHECK(r.argmax_a == 0.1);
    CHECK(r.grid.size() == 2);
    CHECK(r.grid[0].v1 == r.grid[1].v1);
}

TEST_CASE("threaded sweep equals serial sweep") {
    const auto p = reference_params();
    SweepOptions o;
    o.threads = 3;
    o.cache = nullptr;
    const std::vector<double> as(kTableA.begin(), kTableA.end()), bs(kTableB.begin(), kTableB.end());
    const auto a = sweep_barrier({1.0, 2.0}, as, bs, p);
    const auto b = sweep_barrier({1.0, 2.0}, as, bs, p, o);
    REQUIRE(a.grid.size() == b.grid.size());
    for (std::size_t i = 0; i < a.grid.size(); ++i) CHECK(a.grid[i].v1 == b.grid[i].v1);
}

TEST_CASE("refinement never goes below its start and respects the budget") {
    const auto p = reference_params();
    const auto r = refine_barrier({1.0, 2.0}, p, {0.1, 1.0}, {6.0, 28.0}, 0.5, 14.0, 60);
    REQUIRE_FALSE(r.accepted.empty());
    for (std::size_t i = 1; i < r.accepted.size(); ++i) CHECK(r.accepted[i] >= r.accepted[i - 1]);
    CHECK(r.v1 >= r.accepted.front());
    CHECK(r.evaluations <= 60);
    CHECK(r.a >= 0.1);
    CHECK(r.a <= 1.0);
}

TEST_CASE("reference tables") {
    for (int id : {1, 2, 3}) CHECK(reference_table(id).cells.size() == 24);
    CHECK(reference_table(4).cells.empty());
    CHECK(reference_table(1).argmax_a == 0.1);
    CHECK(reference_table(1).argmax_b == 14.0);
}

}
