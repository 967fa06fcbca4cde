#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cuspext/geometry.hpp"
#include "oracles.hpp"

using namespace cuspext;
using namespace cuspext::geometry;

TEST_CASE("cusp membership matches the polar inequality") {
    const auto cusp = DomainSpec::cusp(0.5);  // gamma = 1
    // (r=0.5, theta=0.25): 0.25 < 0.5^1
    const double r1 = 0.5, t1 = 0.25;
    const double pt1[2] = {r1 * std::cos(t1), r1 * std::sin(t1)};
    CHECK(contains(cusp, pt1));
    // (r=0.5, theta=0.75): outside
    const double t2 = 0.75;
    const double pt2[2] = {r1 * std::cos(t2), r1 * std::sin(t2)};
    CHECK_FALSE(contains(cusp, pt2));
    // points on the axis interval belong to the domain
    const double axis[2] = {0.5, 0.0};
    CHECK(contains(cusp, axis));
    const double origin[2] = {0.0, 0.0};
    CHECK_FALSE(contains(cusp, origin));
}

TEST_CASE("disc and square membership") {
    const double center[2] = {0.0, 0.0};
    CHECK(contains(DomainSpec::disc(), center));
    const double edge[2] = {1.0, 0.0};
    CHECK_FALSE(contains(DomainSpec::disc(), edge));
    const double inside[2] = {0.25, 0.75};
    CHECK(contains(DomainSpec::square(), inside));
}

TEST_CASE("membership rejects dimension mismatch") {
    const double p3[3] = {0.1, 0.1, 0.1};
    CHECK_THROWS_AS(contains(DomainSpec::disc(), p3), validation_error);
}

TEST_CASE("membership symmetry under reflection in the axis") {
    std::mt19937_64 rng(2024);
    for (double gt : {0.4, 0.5, 0.75}) {
        const auto cusp = DomainSpec::cusp(gt);
        for (int i = 0; i < 200; ++i) {
            const double r = uniform01(rng);
            const double theta = (2.0 * uniform01(rng) - 1.0) * kPi;
            const double up[2] = {r * std::cos(theta), r * std::sin(theta)};
            const double dn[2] = {up[0], -up[1]};
            CHECK(contains(cusp, up) == contains(cusp, dn));
        }
    }
}

TEST_CASE("analytic measures") {
    CHECK(measure(DomainSpec::disc()) == Catch::Approx(kPi));
    CHECK(measure(DomainSpec::square()) == 1.0);
    CHECK(measure(DomainSpec::ball(3)) == Catch::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    // Cusp area 2/(gamma+2); cross-checked below by Monte-Carlo sampling.
    const auto cusp1 = DomainSpec::cusp(0.5);
    CHECK(measure(cusp1) == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
    for (double gt : {0.4, 0.6}) {
        const auto c = DomainSpec::cusp(gt);
        CHECK(measure(c) == Catch::Approx(2.0 / (c.gamma + 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("cusp measure agrees with Monte-Carlo membership sampling") {
    const auto cusp = DomainSpec::cusp(0.5);
    const double mc = oracles::mc_area(
        [&](double x, double y) {
            const double pt[2] = {x, y};
            return contains(cusp, pt);
        },
        99991, 400000);
    CHECK(mc == Catch::Approx(measure(cusp)).margin(0.01));
}

TEST_CASE("pick measure converges and respects rotational symmetry") {
    const auto pick3 = DomainSpec::pick(3, 0.5);  // gamma = 1
    // Reference: 2 pi int_0^1 r^2 (1 - cos r) dr evaluated densely.
    long double ref = 0.0L;
    const int n = 2000000;
    for (int i = 0; i < n; ++i) {
        const long double r = (i + 0.5L) / n;
        ref += r * r * (1.0L - cosl(r));
    }
    ref *= 2.0L * oracles::kPiL / n;
    CHECK(measure(pick3) == Catch::Approx(static_cast<double>(ref)).epsilon(1e-5));
    // Ridge cross-section: pick in n-1 dimensions.
    CHECK(measure(DomainSpec::ridge(3, 0.5)) == Catch::Approx(measure(DomainSpec::cusp(0.5))));
    CHECK(measure(DomainSpec::ridge(4, 0.5)) == Catch::Approx(measure(pick3)));
}

TEST_CASE("cusp measure below disc measure for every gamma") {
    for (double gt : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(measure(DomainSpec::cusp(gt)) < measure(DomainSpec::disc()));
}

TEST_CASE("graded grid weight sums") {
    SECTION("disc grid is exact") {
        const auto g = graded_grid(Region::interior(DomainSpec::disc()), 16, 1.0);
        CHECK(g.nodes.size() == 16 * 16);
        double sum = 0;
        for (double w : g.weights) sum += w;
        CHECK(sum == Catch::Approx(kPi).epsilon(0.02));
    }
    SECTION("cusp interior and complement are exact by construction") {
        const auto cusp = DomainSpec::cusp(0.5);
        for (int N : {16, 64}) {
            const auto gi = graded_grid(Region::interior(cusp), N, 2.0);
            double si = 0;
            for (double w : gi.weights) si += w;
            CHECK(si == Catch::Approx(measure(cusp)).epsilon(1e-12));
            const auto gc = graded_grid(Region::complement(cusp), N, 2.0);
            double sc = 0;
            for (double w : gc.weights) sc += w;
            CHECK(sc == Catch::Approx(kPi - measure(cusp)).epsilon(1e-12));
        }
    }
    SECTION("pick weight sums converge monotonically") {
        const auto pick = DomainSpec::pick(3, 0.5);
        const double target = measure(pick);
        double prev_err = std::numeric_limits<double>::infinity();
        for (int N : {16, 32, 64, 128}) {
            const auto g = graded_grid(Region::interior(pick), N, 2.0);
            double s = 0;
            for (double w : g.weights) s += w;
            const double err = std::abs(s - target) / target;
            CHECK(err < prev_err + 1e-3);
            prev_err = err;
        }
        CHECK(prev_err < 1e-3);
    }
}

TEST_CASE("grading keeps nodes away from the origin") {
    const auto g = graded_grid(Region::interior(DomainSpec::cusp(0.5)), 8, 2.0);
    const double rmin = std::pow(0.5 / 8, 2.0);
    for (const auto& node : g.nodes) CHECK(node[0] >= rmin);
}

TEST_CASE("grid nodes lie strictly inside their region") {
    const auto cusp = DomainSpec::cusp(0.5);
    const auto gi = graded_grid(Region::interior(cusp), 16, 2.0);
    for (const auto& node : gi.nodes) {
        CHECK(cusp_contains_polar(cusp.gamma, node[0], node[1]));
        const auto cart = node_to_cartesian(CoordSystem::Polar2D, node);
        CHECK(contains(cusp, cart.span()));
    }
    const auto gc = graded_grid(Region::complement(cusp), 16, 2.0);
    for (const auto& node : gc.nodes) {
        CHECK_FALSE(cusp_contains_polar(cusp.gamma, node[0], node[1]));
        CHECK(node[0] < 1.0);
    }
}

TEST_CASE("ridge grid couples the cross-section with the z axis") {
    const auto ridge = DomainSpec::ridge(3, 0.5);
    const auto g = graded_grid(Region::interior(ridge), 8, 2.0);
    double sum = 0;
    for (double w : g.weights) sum += w;
    CHECK(sum == Catch::Approx(measure(ridge)).epsilon(1e-10));
    for (const auto& node : g.nodes) {
        CHECK(node.n == 3);
        CHECK(node[2] > 0.0);
        CHECK(node[2] < 1.0);
    }
}

TEST_CASE("unsupported regions are rejected") {
    CHECK_THROWS_AS(Region::complement(DomainSpec::disc()), validation_error);
    CHECK_THROWS_AS(graded_grid(Region::interior(DomainSpec::disc()), 4, 1.0), validation_error);
    CHECK_THROWS_AS(graded_grid(Region::interior(DomainSpec::disc()), 16, 0.5), validation_error);
}

TEST_CASE("domain spec validation") {
    CHECK_THROWS_AS(DomainSpec::cusp(1.5), validation_error);
    CHECK_THROWS_AS(DomainSpec::cusp(0.0), validation_error);
    CHECK_THROWS_AS(DomainSpec::ridge(2, 0.5), validation_error);
    const auto c = DomainSpec::cusp(0.25);
    CHECK(c.gamma == Catch::Approx((1.0 - 0.25) / 0.25));
}
