#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cuspext/common.hpp"
#include "cuspext/distortion.hpp"
#include "cuspext/geometry.hpp"
#include "cuspext/maps.hpp"

namespace cuspext::extension {

// ---------------------------------------------------------------------------
// Scalar test functions on planar domains. Values and gradients take
// Cartesian input; gradients are either closed-form or central differences
// of the value (the two modes give independent evaluation paths).
// ---------------------------------------------------------------------------

enum class GradientMode { Analytic, CentralDifference };

struct SampledFunction {
    std::string name = "custom";
    std::function<double(double, double)> value;
    std::function<std::array<double, 2>(double, double)> grad;  // Analytic mode only
    GradientMode mode = GradientMode::Analytic;
    double fd_step = 1e-6;
};

/// Gradient in the orthonormal polar frame (radial, tangential) at (r, theta);
/// the tangential component carries the 1/r factor.
inline std::array<double, 2> polar_frame_grad(const SampledFunction& f, double r, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    if (f.mode == GradientMode::Analytic) {
        const auto g = f.grad(r * ct, r * st);
        return {g[0] * ct + g[1] * st, -g[0] * st + g[1] * ct};
    }
    const double h = f.fd_step;
    auto at = [&](double rr, double tt) { return f.value(rr * std::cos(tt), rr * std::sin(tt)); };
    const double rlo = r - h > 0.0 ? r - h : r;  // one-sided if the step would cross the origin
    const double fr = (at(r + h, theta) - at(rlo, theta)) / (r + h - rlo);
    const double dth = h / r;
    const double ft = (at(r, theta + dth) - at(r, theta - dth)) / (2.0 * dth * r);
    return {fr, ft};
}

inline std::array<double, 2> cartesian_grad(const SampledFunction& f, double x, double y) {
    if (f.mode == GradientMode::Analytic) return f.grad(x, y);
    const double h = f.fd_step;
    return {(f.value(x + h, y) - f.value(x - h, y)) / (2.0 * h),
            (f.value(x, y + h) - f.value(x, y - h)) / (2.0 * h)};
}

// ---------------------------------------------------------------------------
// Fixed function catalogue (used by the battery manifest).
// ---------------------------------------------------------------------------

inline SampledFunction test_function(const std::string& name, double param = 0.0) {
    SampledFunction f;
    f.name = name;
    if (name == "one") {
        f.value = [](double, double) { return 1.0; };
        f.grad = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
    } else if (name == "x") {
        f.value = [](double x, double) { return x; };
        f.grad = [](double, double) { return std::array<double, 2>{1.0, 0.0}; };
    } else if (name == "y") {
        f.value = [](double, double y) { return y; };
        f.grad = [](double, double) { return std::array<double, 2>{0.0, 1.0}; };
    } else if (name == "x2") {
        f.value = [](double x, double) { return x * x; };
        f.grad = [](double x, double) { return std::array<double, 2>{2.0 * x, 0.0}; };
    } else if (name == "x2_minus_y2") {
        f.value = [](double x, double y) { return x * x - y * y; };
        f.grad = [](double x, double y) { return std::array<double, 2>{2.0 * x, -2.0 * y}; };
    } else if (name == "r_pow") {
        const double e = param != 0.0 ? param : 0.3;
        f.value = [e](double x, double y) { return std::pow(std::hypot(x, y), e); };
        f.grad = [e](double x, double y) {
            const double r = std::hypot(x, y);
            const double fr = e * std::pow(r, e - 1.0);
            return std::array<double, 2>{fr * x / r, fr * y / r};
        };
    } else if (name == "r_pow_cos") {
        const double e = param != 0.0 ? param : 0.6;
        f.value = [e](double x, double y) {
            const double r = std::hypot(x, y);
            return std::pow(r, e) * (x / r);  // r^e cos(theta)
        };
        f.grad = [e](double x, double y) {
            const double r = std::hypot(x, y);
            const double c = x / r, s = y / r;
            const double fr = e * std::pow(r, e - 1.0) * c;
            const double ft = -std::pow(r, e - 1.0) * s;
            return std::array<double, 2>{fr * c - ft * s, fr * s + ft * c};
        };
    } else {
        throw validation_error("unknown test function: " + name);
    }
    return f;
}

inline std::vector<std::string> catalogue_names() {
    return {"one", "x", "y", "x2", "x2_minus_y2", "r_pow", "r_pow_cos"};
}

// ---------------------------------------------------------------------------
// Extension by reflection composition: E(f) = f on the cusp, f o phi on the
// complement of the cusp in the disc. On the shared boundary both branches
// agree (the reflection fixes it), so the piecewise value is continuous.
// ---------------------------------------------------------------------------

namespace detail {

struct ReflectedPoint {
    double R, theta_img;
    maps::MapJet jet;
};

inline ReflectedPoint reflect_polar(double gamma, double r, double theta) {
    ReflectedPoint rp;
    rp.jet = maps::cusp_reflection_2d(gamma, r, theta * r);
    rp.R = rp.jet.image[0];
    rp.theta_img = rp.jet.image[1] / rp.R;
    return rp;
}

/// Exact polar-frame gradient of f o phi at a complement point. Uses the
/// (r,s) chart partials of both f and the reflection; the shear terms from
/// s = theta r are carried on both sides, so the result is a genuine
/// Euclidean gradient and matches polar central differences of the
/// composed values.
inline std::array<double, 2> composed_polar_grad(const SampledFunction& f, double gamma,
                                                 double r, double theta) {
    const ReflectedPoint rp = reflect_polar(gamma, r, theta);
    const auto img = polar_frame_grad(f, rp.R, rp.theta_img);  // (F_r, F_t) at the image
    const double fR_chart = img[0] - rp.theta_img * img[1];    // dF/dR at fixed S
    const double fS_chart = img[1];                            // dF/dS at fixed R
    const double Sr = rp.jet.differential.at(1, 0);
    const double Ss = rp.jet.differential.at(1, 1);
    const double gr_chart = fR_chart + fS_chart * Sr;  // d(f o phi)/dr at fixed s
    const double gs_chart = fS_chart * Ss;             // d(f o phi)/ds at fixed r
    return {gr_chart + theta * gs_chart, gs_chart};    // back to the polar frame
}

}  // namespace detail

/// Builds E(f) for the planar cusp with aperture exponent gamma. The returned
/// function evaluates on the whole disc; its gradient mode follows f.
inline SampledFunction extend(const SampledFunction& f, double gamma) {
    SampledFunction ext;
    ext.name = f.name + "_extended";
    ext.mode = f.mode;
    ext.fd_step = f.fd_step;
    auto inside = [gamma](double r, double theta) {
        return std::abs(theta) <= std::pow(r, gamma);
    };
    ext.value = [f, gamma, inside](double x, double y) {
        const double r = std::hypot(x, y);
        if (!(r > 0.0 && r < 1.0))
            throw std::domain_error("extend: point outside the open unit disc");
        const double theta = std::atan2(y, x);
        if (inside(r, theta)) return f.value(x, y);
        const auto rp = detail::reflect_polar(gamma, r, theta);
        if (std::abs(rp.theta_img) > std::pow(rp.R, gamma) * (1.0 + 1e-9))
            throw numerical_error("extend: reflection image escaped the cusp");
        return f.value(rp.R * std::cos(rp.theta_img), rp.R * std::sin(rp.theta_img));
    };
    if (f.mode == GradientMode::Analytic) {
        ext.grad = [f, gamma, inside](double x, double y) {
            const double r = std::hypot(x, y);
            const double theta = std::atan2(y, x);
            std::array<double, 2> pol;
            if (inside(r, theta)) {
                const SampledFunction& base = f;
                pol = polar_frame_grad(base, r, theta);
            } else {
                pol = detail::composed_polar_grad(f, gamma, r, theta);
            }
            const double ct = std::cos(theta), st = std::sin(theta);
            return std::array<double, 2>{pol[0] * ct - pol[1] * st, pol[0] * st + pol[1] * ct};
        };
    }
    return ext;
}

/// L_p seminorm of the gradient over a planar region by graded quadrature.
inline double gradient_seminorm(const SampledFunction& f, const geometry::Region& region,
                                double p, int N, double beta) {
    if (!(p >= 1.0)) throw validation_error("gradient_seminorm: p must be >= 1");
    std::vector<PointND> nodes;
    std::vector<double> weights;
    geometry::for_each_cell(region, N, beta, [&](const PointND& node, double w) {
        nodes.push_back(node);
        weights.push_back(w);
    });
    const bool cartesian = region.domain.kind == geometry::DomainKind::Square2D;
    const double sum = blocked_sum(nodes.size(), [&](std::size_t i) {
        std::array<double, 2> g;
        if (cartesian)
            g = cartesian_grad(f, nodes[i][0], nodes[i][1]);
        else
            g = polar_frame_grad(f, nodes[i][0], nodes[i][1]);
        return std::pow(std::hypot(g[0], g[1]), p) * weights[i];
    });
    return std::pow(sum, 1.0 / p);
}

/// Seminorm overload dispatching the extended function's own frame handling:
/// inside the cusp the plain gradient, outside the composed chain rule.
struct ExtensionCheck {
    double lhs = 0.0;         // |grad E(f)|_{L_q(disc)}
    double rhs_factor = 0.0;  // extension norm bound
    double rhs = 0.0;         // rhs_factor * |grad f|_{L_p(cusp)}
    bool pass = false;
};

/// Empirical test of the extension inequality for one test function:
/// the extended gradient seminorm on the disc must not exceed the bound
/// composed from the closed-form distortion estimate (slack covers
/// quadrature bias on the two grids).
inline ExtensionCheck verify_extension_inequality(const SampledFunction& f, double gamma,
                                                  const distortion::ExponentPair& exps, int N,
                                                  double beta, double slack = 0.05) {
    const auto cusp = geometry::DomainSpec::cusp_gamma(gamma);
    const auto range = distortion::alpha_range(gamma, 2, exps.p);
    if (!range.contains(exps.alpha))
        throw numerical_error("verify_extension_inequality: alpha outside the admissible range");
    ExtensionCheck check;
    const SampledFunction ef = extend(f, gamma);
    check.lhs = gradient_seminorm(ef, geometry::Region::interior(geometry::DomainSpec::disc()),
                                  exps.q, N, beta);
    const double kbound = distortion::kpq_bound_closed_form(gamma, exps, 2);
    check.rhs_factor = distortion::extension_norm_bound(geometry::measure(cusp), kbound, exps);
    const double src = gradient_seminorm(f, geometry::Region::interior(cusp), exps.p, N, beta);
    check.rhs = check.rhs_factor * src;
    check.pass = check.lhs <= check.rhs * (1.0 + slack);
    return check;
}

}  // namespace cuspext::extension
