#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cuspext/extension.hpp"

using namespace cuspext;
using namespace cuspext::extension;

namespace {
const auto kDisc = geometry::Region::interior(geometry::DomainSpec::disc());
const auto kCusp1 = geometry::Region::interior(geometry::DomainSpec::cusp(0.5));  // gamma = 1
}  // namespace

TEST_CASE("constants extend to constants") {
    const auto f = test_function("one");
    const auto ef = extend(f, 1.0);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const double r = 0.05 + 0.9 * uniform01(rng);
        const double t = (2 * uniform01(rng) - 1) * kPi;
        CHECK(ef.value(r * std::cos(t), r * std::sin(t)) == Catch::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("restriction identity on the cusp") {
    const auto f = test_function("x2_minus_y2");
    const auto ef = extend(f, 1.0);
    geometry::for_each_cell(kCusp1, 16, 2.0, [&](const PointND& node, double) {
        const double x = node[0] * std::cos(node[1]);
        const double y = node[0] * std::sin(node[1]);
        CHECK(ef.value(x, y) == f.value(x, y));  // exact, no interpolation on the inside branch
    });
}

TEST_CASE("extension at the shared boundary uses the trace value") {
    const auto f = test_function("x");
    const auto ef = extend(f, 1.0);
    const double r = 0.5;
    const double theta = std::pow(r, 1.0);  // on the upper boundary curve
    const double x = r * std::cos(theta), y = r * std::sin(theta);
    CHECK(ef.value(x, y) == Catch::Approx(f.value(x, y)).epsilon(1e-12));
}

TEST_CASE("extension linearity") {
    const auto f = test_function("x");
    const auto g = test_function("x2");
    SampledFunction combo;
    combo.value = [&](double x, double y) { return 2.5 * f.value(x, y) - 0.75 * g.value(x, y); };
    combo.grad = [&](double x, double y) {
        const auto a = f.grad(x, y), b = g.grad(x, y);
        return std::array<double, 2>{2.5 * a[0] - 0.75 * b[0], 2.5 * a[1] - 0.75 * b[1]};
    };
    const auto ef = extend(f, 1.0), eg = extend(g, 1.0), ec = extend(combo, 1.0);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const double r = 0.05 + 0.9 * uniform01(rng);
        const double t = (2 * uniform01(rng) - 1) * kPi;
        const double x = r * std::cos(t), y = r * std::sin(t);
        CHECK(ec.value(x, y) ==
              Catch::Approx(2.5 * ef.value(x, y) - 0.75 * eg.value(x, y)).margin(1e-12));
    }
}

TEST_CASE("gradient seminorm oracles on the disc") {
    CHECK(gradient_seminorm(test_function("one"), kDisc, 2.0, 64, 1.0) ==
          Catch::Approx(0.0).margin(1e-14));
    CHECK(gradient_seminorm(test_function("x"), kDisc, 2.0, 64, 1.0) ==
          Catch::Approx(std::sqrt(kPi)).epsilon(1e-4));
    CHECK(gradient_seminorm(test_function("x2_minus_y2"), kDisc, 2.0, 128, 1.0) ==
          Catch::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-4));
}

TEST_CASE("seminorm homogeneity") {
    const auto f = test_function("x2");
    SampledFunction scaled;
    scaled.value = [&](double x, double y) { return -3.0 * f.value(x, y); };
    scaled.grad = [&](double x, double y) {
        const auto g = f.grad(x, y);
        return std::array<double, 2>{-3.0 * g[0], -3.0 * g[1]};
    };
    const double a = gradient_seminorm(f, kCusp1, 1.5, 32, 2.0);
    const double b = gradient_seminorm(scaled, kCusp1, 1.5, 32, 2.0);
    CHECK(b == Catch::Approx(3.0 * a).epsilon(1e-12));
}

TEST_CASE("analytic chain rule matches central differences of composed values") {
    for (const char* name : {"x", "x2_minus_y2", "r_pow"}) {
        const auto f = test_function(name);
        const auto ef_analytic = extend(f, 1.0);
        SampledFunction f_fd = f;
        f_fd.mode = GradientMode::CentralDifference;
        f_fd.fd_step = 1e-6;
        const auto ef_fd = extend(f_fd, 1.0);
        // sample complement points away from the interface and the axis
        std::mt19937_64 rng(11);
        for (int i = 0; i < 60; ++i) {
            const double r = 0.15 + 0.7 * uniform01(rng);
            const double lo = std::pow(r, 1.0) + 0.15;  // clear of the boundary curve
            const double hi = kPi - 0.1;
            if (lo >= hi) continue;
            const double theta = lo + (hi - lo) * uniform01(rng);
            const auto ga = polar_frame_grad(ef_analytic, r, theta);
            const auto gf = polar_frame_grad(ef_fd, r, theta);
            const double na = std::hypot(ga[0], ga[1]);
            const double nf = std::hypot(gf[0], gf[1]);
            INFO(name << " at r=" << r << " theta=" << theta);
            CHECK(na == Catch::Approx(nf).epsilon(1e-4));
            CHECK(ga[0] == Catch::Approx(gf[0]).margin(1e-4 * (1 + na)));
            CHECK(ga[1] == Catch::Approx(gf[1]).margin(1e-4 * (1 + na)));
        }
    }
}

TEST_CASE("extension inequality for the battery") {
    const std::vector<std::string> battery = {"one", "x", "y", "x2", "x2_minus_y2", "r_pow_cos"};
    for (double q : {1.0, 1.2}) {
        const distortion::ExponentPair exps(2.0, q);
        for (const auto& name : battery) {
            const auto check = verify_extension_inequality(test_function(name), 1.0, exps, 96, 2.0);
            INFO(name << " with q=" << q << ": lhs=" << check.lhs << " rhs=" << check.rhs);
            CHECK(check.pass);
        }
    }
}

TEST_CASE("constant function passes trivially") {
    const auto check =
        verify_extension_inequality(test_function("one"), 1.0, distortion::ExponentPair(2.0, 1.0),
                                    32, 2.0);
    CHECK(check.lhs == Catch::Approx(0.0).margin(1e-12));
    CHECK(check.pass);
}

TEST_CASE("alpha outside the admissible range is rejected") {
    CHECK_THROWS_AS(verify_extension_inequality(test_function("x"), 1.0,
                                                distortion::ExponentPair(2.0, 1.8), 32, 2.0),
                    numerical_error);
}

TEST_CASE("extension rejects points outside the open disc") {
    const auto ef = extend(test_function("x"), 1.0);
    CHECK_THROWS_AS(ef.value(1.5, 0.0), std::domain_error);
}
