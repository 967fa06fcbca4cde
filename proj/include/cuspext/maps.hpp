#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cuspext/common.hpp"

namespace cuspext::maps {

// ---------------------------------------------------------------------------
// Map evaluation bundle.
//
// The planar reflection is written in the (r,s) chart, s = theta * r, which
// is treated as an orthonormal frame for norm and Jacobian purposes: op_norm
// and jacobian of the jet are taken directly from the (r,s) differential.
// ---------------------------------------------------------------------------

struct MapJet {
    PointND image;
    Mat differential;
    double op_norm = 0.0;
    double jacobian = 0.0;
};

constexpr double kMinRadius = 1e-12;  // below this the chart is numerically singular

namespace detail {

struct CuspBlock {
    double S;    // image second coordinate, signed
    double S_r;  // dS/dr
    double S_s;  // dS/ds
};

/// Core of the cusp reflection: maps the strip r^(g+1) <= |s| <= pi r of the
/// punctured disc onto the cusp wedge |S| <= r^(g+1), fixing the shared
/// boundary. The lower half plane is handled by odd symmetry in s.
inline CuspBlock cusp_block(double gamma, double r, double s) {
    if (!(r > kMinRadius && r < 1.0))
        throw std::domain_error("cusp reflection: r must lie in (0,1)");
    const double sign = s < 0.0 ? -1.0 : 1.0;
    const double sa = std::abs(s);
    const double rg = std::pow(r, gamma);
    const double lo = rg * r;        // shared boundary, s = r^(gamma+1)
    const double hi = kPi * r;       // outer ray, s = pi r
    const double slack = 1e-12 * std::max(1.0, hi);
    if (sa < lo - slack || sa > hi + slack)
        throw std::domain_error("cusp reflection: point outside the admissible strip");
    const double denom = kPi - rg;
    CuspBlock b;
    const double core = (kPi * r - sa) / denom;
    b.S = sign * rg * core;
    b.S_s = -rg / denom;
    b.S_r = sign * (gamma * rg / r * core +
                    rg * (kPi * denom + gamma * (rg / r) * (kPi * r - sa)) / (denom * denom));
    return b;
}

}  // namespace detail

/// Planar reflection of the punctured disc minus the cusp onto the cusp,
/// in (r,s) coordinates. Returns image, differential, spectral norm and
/// Jacobian determinant (negative; magnitude r^gamma / (pi - r^gamma)).
inline MapJet cusp_reflection_2d(double gamma, double r, double s) {
    const auto b = detail::cusp_block(gamma, r, s);
    MapJet jet;
    jet.image = PointND{r, b.S};
    jet.differential = Mat::zero(2);
    jet.differential.at(0, 0) = 1.0;
    jet.differential.at(0, 1) = 0.0;
    jet.differential.at(1, 0) = b.S_r;
    jet.differential.at(1, 1) = b.S_s;
    jet.jacobian = b.S_s;  // dR/dr * dS/ds, off-diagonal term vanishes
    jet.op_norm = spectral_norm_2x2(1.0, 0.0, b.S_r, b.S_s);
    return jet;
}

/// Inverse of the planar reflection on the cusp wedge: s = pi r - S (pi - r^g)/r^g.
inline PointND cusp_reflection_inverse_2d(double gamma, double R, double S) {
    if (!(R > kMinRadius && R < 1.0))
        throw std::domain_error("cusp reflection inverse: R must lie in (0,1)");
    const double rg = std::pow(R, gamma);
    const double cap = rg * R;
    const double slack = 1e-12 * std::max(1.0, cap);
    if (!(std::abs(S) > 0.0) || std::abs(S) > cap + slack)
        throw std::domain_error("cusp reflection inverse: point outside the cusp wedge");
    const double sign = S < 0.0 ? -1.0 : 1.0;
    const double s = kPi * R - std::abs(S) * (kPi - rg) / rg;
    return PointND{R, sign * s};
}

/// Jet of the inverse reflection (needed for the dual distortion integrals).
inline MapJet cusp_reflection_inverse_jet_2d(double gamma, double R, double S) {
    const PointND pre = cusp_reflection_inverse_2d(gamma, R, S);
    const double sign = S < 0.0 ? -1.0 : 1.0;
    const double rg = std::pow(R, gamma);
    MapJet jet;
    jet.image = pre;
    jet.differential = Mat::zero(2);
    jet.differential.at(0, 0) = 1.0;
    jet.differential.at(1, 0) = sign * (kPi + std::abs(S) * kPi * gamma / (rg * R));
    jet.differential.at(1, 1) = -(kPi - rg) / rg;
    jet.jacobian = jet.differential.at(1, 1);
    jet.op_norm = spectral_norm_2x2(1.0, 0.0, jet.differential.at(1, 0), jet.differential.at(1, 1));
    return jet;
}

/// Rotationally symmetric reflection for picks: the (r,s) block of the planar
/// reflection with an identity block on the remaining angles. The spherical
/// volume factor belongs to the quadrature weights, not the jet.
inline MapJet pick_reflection_nd(double gamma, int n, const PointND& pt) {
    if (n < 2) throw validation_error("pick reflection: n must be >= 2");
    if (pt.n != n) throw validation_error("pick reflection: point dimension mismatch");
    if (n >= 3 && pt[1] < 0.0)
        throw std::domain_error("pick reflection: s must be nonnegative for n >= 3");
    const auto b = detail::cusp_block(gamma, pt[0], pt[1]);
    MapJet jet;
    jet.image = pt;
    jet.image[1] = b.S;
    jet.differential = Mat::identity(n);
    jet.differential.at(1, 0) = b.S_r;
    jet.differential.at(1, 1) = b.S_s;
    jet.jacobian = b.S_s;
    jet.op_norm = spectral_norm_2x2(1.0, 0.0, b.S_r, b.S_s);  // identity block adds nothing
    return jet;
}

/// Ridge reflection: the (n-1)-dimensional pick reflection on the leading
/// block and identity on the final coordinate.
inline MapJet ridge_reflection_nd(double gamma, int n, const PointND& pt) {
    if (n < 3) throw validation_error("ridge reflection: n must be >= 3");
    if (pt.n != n) throw validation_error("ridge reflection: point dimension mismatch");
    const double z = pt[n - 1];
    if (!(z > 0.0 && z < 1.0))
        throw std::domain_error("ridge reflection: last coordinate must lie in (0,1)");
    PointND lead;
    lead.n = n - 1;
    for (int i = 0; i < n - 1; ++i) lead[i] = pt[i];
    MapJet base = pick_reflection_nd(gamma, n - 1, lead);
    MapJet jet;
    jet.image = base.image;
    jet.image[n - 1] = z;
    jet.image.n = n;
    jet.differential = Mat::identity(n);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) jet.differential.at(i, j) = base.differential.at(i, j);
    jet.jacobian = base.jacobian;
    jet.op_norm = base.op_norm;
    return jet;
}

// ---------------------------------------------------------------------------
// Radial stretch maps x -> (x_i |x|^(a_i)).
// ---------------------------------------------------------------------------

struct RadialMapSpec {
    std::vector<double> alphas;  // nondecreasing, all > -1
    double alpha_sum = 0.0;

    explicit RadialMapSpec(std::vector<double> a) : alphas(std::move(a)) {
        if (alphas.empty()) throw validation_error("radial map: empty exponent vector");
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            if (!(alphas[i] > -1.0))
                throw validation_error("radial map: every exponent must exceed -1");
            if (i > 0 && alphas[i] < alphas[i - 1])
                throw validation_error("radial map: exponents must be nondecreasing");
        }
        for (double v : alphas) alpha_sum += v;
    }
};

/// Jet of the radial stretch with the diagonal differential model
/// d_i = (1 + a_i x_i^2/|x|^2) |x|^(a_i).
inline MapJet radial_map(const RadialMapSpec& spec, std::span<const double> x) {
    const int n = static_cast<int>(spec.alphas.size());
    if (static_cast<int>(x.size()) != n)
        throw validation_error("radial map: point dimension mismatch");
    const double r = norm2(x);
    if (!(r > kMinRadius)) throw std::domain_error("radial map: jet is singular at the origin");
    MapJet jet;
    jet.image.n = n;
    jet.differential = Mat::zero(n);
    jet.jacobian = 1.0;
    jet.op_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ai = spec.alphas[static_cast<std::size_t>(i)];
        const double ra = std::pow(r, ai);
        jet.image[i] = x[static_cast<std::size_t>(i)] * ra;
        const double ti = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] / (r * r);
        const double d = (1.0 + ai * ti) * ra;
        jet.differential.at(i, i) = d;
        jet.jacobian *= d;
        jet.op_norm = std::max(jet.op_norm, d);
    }
    return jet;
}

/// Numeric check of the product lower bound prod(1 + a_i t_i) >= 1 + sum a_i t_i
/// used when estimating the radial Jacobian; it can fail for mixed-sign
/// exponents, so it is verified per point rather than assumed.
inline bool radial_jacobian_chain_holds(const RadialMapSpec& spec, std::span<const double> x) {
    const double r2 = [&] {
        double s = 0;
        for (double v : x) s += v * v;
        return s;
    }();
    if (!(r2 > 0)) return false;
    double prod = 1.0, sum = 1.0;
    for (std::size_t i = 0; i < spec.alphas.size(); ++i) {
        const double t = x[i] * x[i] / r2;
        prod *= 1.0 + spec.alphas[i] * t;
        sum += spec.alphas[i] * t;
    }
    return prod >= sum - 1e-12;
}

/// Pointwise distortion |D phi| / |J|^(1/p), with the finite-distortion
/// convention at J = 0: zero differential gives 0, otherwise +infinity.
inline double p_dilatation(const MapJet& jet, double p) {
    if (!(p >= 1.0)) throw validation_error("p_dilatation: p must be >= 1");
    const double jac = std::abs(jet.jacobian);
    if (jac == 0.0)
        return jet.op_norm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return jet.op_norm / std::pow(jac, 1.0 / p);
}

enum class RadialClass { PQuasiconformal, NotPQuasiconformal, Quasiconformal };

/// Three-case classification of the radial stretch:
/// all exponents equal -> quasiconformal; smallest exponent positive ->
/// p-quasiconformal exactly for p >= sum/min; smallest negative ->
/// p-quasiconformal exactly for p in [1, sum/min] (empty if sum/min < 1).
inline RadialClass radial_classify(const RadialMapSpec& spec, int n, double p) {
    if (static_cast<int>(spec.alphas.size()) != n)
        throw validation_error("radial classify: dimension mismatch");
    if (!(p >= 1.0)) throw validation_error("radial classify: p must be >= 1");
    const double a1 = spec.alphas.front();
    const double a = spec.alpha_sum;
    constexpr double eps = 1e-12;
    if (std::abs(a1) < eps) {
        if (std::abs(a) < eps) return RadialClass::Quasiconformal;  // identity-like
        throw std::domain_error(
            "radial classify: indeterminate case (smallest exponent zero, nonzero sum)");
    }
    const bool all_equal = spec.alphas.back() - spec.alphas.front() < eps;
    if (all_equal) return RadialClass::Quasiconformal;
    const double threshold = a / a1;
    if (a1 > 0.0)
        return p >= threshold - eps ? RadialClass::PQuasiconformal
                                    : RadialClass::NotPQuasiconformal;
    // a1 < 0: admissible interval [1, threshold], empty when threshold < 1.
    return (threshold >= 1.0 - eps && p <= threshold + eps) ? RadialClass::PQuasiconformal
                                                            : RadialClass::NotPQuasiconformal;
}

/// Uniform bound on the spectral norm of the planar reflection differential.
inline double cusp_op_norm_bound(double gamma) {
    const double pm1 = kPi - 1.0;
    const double term = (gamma + 1.0) * (gamma + 1.0) * std::pow(kPi, 4) / std::pow(pm1, 4);
    return std::sqrt(1.0 + term + 1.0 / (pm1 * pm1));
}

}  // namespace cuspext::maps
