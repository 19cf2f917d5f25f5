#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "vsdk/errors.hpp"
#include "vsdk/geometry.hpp"

using namespace vsdk;

namespace {
constexpr double kPi = std::numbers::pi;

std::size_t expected_count(int n1, int n2) {
    return static_cast<std::size_t>(2 * n1 * n2 + n1 + n2);
}
} // namespace

TEST_CASE("NodeSet basics") {
    NodeSet set(2);
    CHECK(set.empty());
    const double p[2] = {0.25, -0.5};
    set.append(p);
    CHECK(set.size() == 1);
    CHECK(set.coord(0, 0) == 0.25);
    CHECK(set.coord(0, 1) == -0.5);

    const double bad[3] = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(set.append(std::span<const double>(bad, 3)), ParameterError);

    set.append(p);
    CHECK(set.has_duplicates());

    NodeSet::Storage outside(1, 2);
    outside << 1.5, 0.0;
    NodeSet boxed(std::move(outside), BoundingBox{-1.0, 1.0});
    CHECK_FALSE(boxed.within_bounds());
}

TEST_CASE("lissajous parameter validation") {
    CHECK_THROWS_AS(lissajous_nodes({2, 4, 2}), ParameterError);
    CHECK_THROWS_AS(lissajous_nodes({2, 3, 3}), ParameterError);
    CHECK_THROWS_AS(lissajous_nodes({0, 3, 2}), ParameterError);
    CHECK_NOTHROW(lissajous_nodes({2, 3, 1}));
}

TEST_CASE("lissajous first samples for (2,3)") {
    const NodeSet nodes = lissajous_nodes({2, 3, 2});
    REQUIRE(nodes.size() == 17);
    // k = 0: (cos 0, cos(-pi/6)).
    CHECK(nodes.coord(0, 0) == 1.0);
    CHECK(nodes.coord(0, 1) == doctest::Approx(0.8660254037844387).epsilon(1e-15));
    // k = 1: t = pi/12, (cos(pi/4), cos(pi/6 - pi/6)).
    CHECK(nodes.coord(1, 0) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(nodes.coord(1, 1) == 1.0);
}

TEST_CASE("lissajous node counts for the odd-sum family") {
    for (int n = 2; n <= 50; ++n) {
        CAPTURE(n);
        CHECK(lissajous_nodes({n, n + 1, 2}).size() == expected_count(n, n + 1));
    }
    // order of the frequencies does not matter for the count
    CHECK(lissajous_nodes({33, 32, 2}).size() == 2177);
    CHECK(lissajous_nodes({32, 33, 2}).size() == 2177);
    // a non-consecutive coprime pair with odd sum
    CHECK(lissajous_nodes({3, 8, 2}).size() == expected_count(3, 8));
    CHECK(lissajous_nodes({5, 12, 2}).size() == expected_count(5, 12));
}

TEST_CASE("lissajous nodes are distinct and inside the square") {
    for (auto [a, b] : {std::pair{2, 3}, {10, 11}, {33, 32}}) {
        CAPTURE(a);
        const NodeSet nodes = lissajous_nodes({a, b, 2});
        CHECK(nodes.within_bounds());
        CHECK_FALSE(nodes.has_duplicates());
    }
}

TEST_CASE("degenerate eps=1 curves deduplicate cleanly") {
    const NodeSet nodes = lissajous_nodes({2, 3, 1});
    CHECK(nodes.size() == 6); // regression pin; no closed-form count is claimed
    CHECK(nodes.within_bounds());
    CHECK_FALSE(nodes.has_duplicates());
}

TEST_CASE("lissajous generation is deterministic") {
    const NodeSet a = lissajous_nodes({7, 8, 2});
    const NodeSet b = lissajous_nodes({7, 8, 2});
    REQUIRE(a.size() == b.size());
    CHECK(a.matrix() == b.matrix());
}

TEST_CASE("closed-form fill distance") {
    CHECK(fill_distance_closed(2, 3) ==
          doctest::Approx(0.5018364556508212).epsilon(1e-14));
    // symmetric in the frequencies
    CHECK(fill_distance_closed(3, 2) == fill_distance_closed(2, 3));

    const double h1011 = fill_distance_closed(10, 11);
    CHECK(h1011 >= 0.5 * std::sin(kPi / 10));
    CHECK(h1011 <= kPi / 20);

    for (int n = 2; n <= 40; ++n) {
        CAPTURE(n);
        const double h = fill_distance_closed(n, n + 1);
        const double lo = 0.5 * std::max(std::sin(kPi / n), std::sin(kPi / (n + 1)));
        const double hi = std::max(kPi / (2 * n), kPi / (2 * (n + 1)));
        CHECK(h >= lo);
        CHECK(h <= hi);
    }

    CHECK_THROWS_AS(fill_distance_closed(1, 2), ParameterError);
    CHECK_THROWS_AS(fill_distance_closed(2, 4), ParameterError);
}

TEST_CASE("brute-force fill distance on simple sets") {
    NodeSet::Storage one(1, 2);
    one << 0.0, 0.0;
    const NodeSet single{NodeSet::Storage(one)};
    CHECK(fill_distance_brute(single, 101) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // the evaluation grid itself has fill distance zero
    const NodeSet grid = uniform_grid(11);
    CHECK(fill_distance_brute(grid, 11) == 0.0);

    CHECK_THROWS_AS(fill_distance_brute(NodeSet(2), 101), DomainError);
    CHECK_THROWS_AS(fill_distance_brute(single, 1), ParameterError);
}

TEST_CASE("brute-force fill distance shrinks when nodes are added") {
    NodeSet nodes = lissajous_nodes({2, 3, 2});
    const double before = fill_distance_brute(nodes, 201);
    const double extra[2] = {-0.5, -0.05}; // near the widest gap
    nodes.append(extra);
    CHECK(fill_distance_brute(nodes, 201) <= before);
}

TEST_CASE("closed form matches brute force for the smallest pair") {
    const NodeSet nodes = lissajous_nodes({2, 3, 2});
    const double brute = fill_distance_brute(nodes, 2001);
    CHECK(std::abs(fill_distance_closed(2, 3) - brute) <= 2.0 * (2.0 / 2000.0));
}

TEST_CASE("uniform grid") {
    const NodeSet g2 = uniform_grid(2);
    REQUIRE(g2.size() == 4);
    CHECK(g2.coord(0, 0) == -1.0);
    CHECK(g2.coord(0, 1) == -1.0);
    CHECK(g2.coord(1, 0) == 1.0);  // x varies fastest
    CHECK(g2.coord(1, 1) == -1.0);
    CHECK(g2.coord(3, 0) == 1.0);
    CHECK(g2.coord(3, 1) == 1.0);

    const NodeSet g3 = uniform_grid(3);
    REQUIRE(g3.size() == 9);
    CHECK(g3.coord(4, 0) == 0.0);
    CHECK(g3.coord(4, 1) == 0.0);

    const NodeSet g150 = uniform_grid(150);
    CHECK(g150.size() == 22500);
    CHECK(g150.coord(1, 0) - g150.coord(0, 0) ==
          doctest::Approx(2.0 / 149.0).epsilon(1e-14));
    CHECK(g150.within_bounds());

    CHECK_THROWS_AS(uniform_grid(1), ParameterError);
}

TEST_CASE("gcd helper") {
    CHECK(gcd_ll(12, 18) == 6);
    CHECK(gcd_ll(35, 64) == 1);
}
