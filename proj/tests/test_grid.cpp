#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracdrift/grid.hpp"

using namespace fracdrift;

TEST_CASE("make_grid produces the uniform partition") {
    const TimeGrid g = make_grid(1.0, 4);
    CHECK(g.node_count() == 5);
    CHECK(g.node(0) == doctest::Approx(0.0));
    CHECK(g.node(1) == doctest::Approx(0.25));
    CHECK(g.node(2) == doctest::Approx(0.5));
    CHECK(g.node(3) == doctest::Approx(0.75));
    CHECK(g.node(4) == doctest::Approx(1.0));
}

TEST_CASE("single step grid") {
    const TimeGrid g = make_grid(2.0, 1);
    CHECK(g.node_count() == 2);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(1) == 2.0);
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(make_grid(0.0, 4), ValidationError);
    CHECK_THROWS_AS(make_grid(-1.0, 4), ValidationError);
    CHECK_THROWS_AS(make_grid(1.0, 0), ValidationError);
    CHECK_THROWS_AS(make_grid(std::numeric_limits<double>::infinity(), 4), ValidationError);
}

TEST_CASE("step widths sum to T within one rounding unit per step") {
    for (const auto& [T, n] : std::vector<std::pair<double, std::size_t>>{{1.0, 7}, {2.5, 1000}, {0.3, 4096}}) {
        const TimeGrid g = make_grid(T, n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g.node(i + 1) - g.node(i);
        CHECK(std::abs(acc - T) <= n * std::numeric_limits<double>::epsilon() * T);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(g.node(i + 1) - g.node(i) == doctest::Approx(T / n).epsilon(1e-12));
    }
}

TEST_CASE("sampled path validates length and finiteness") {
    const TimeGrid g = make_grid(1.0, 2);
    CHECK_NOTHROW(SampledPath(g, {0.0, 1.0, 2.0}));
    CHECK_THROWS_AS(SampledPath(g, {0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(SampledPath(g, {0.0, std::numeric_limits<double>::quiet_NaN(), 2.0}), ValidationError);
}
