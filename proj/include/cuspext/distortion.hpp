#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cuspext/common.hpp"
#include "cuspext/geometry.hpp"
#include "cuspext/maps.hpp"

namespace cuspext::distortion {

// ---------------------------------------------------------------------------
// Exponent bookkeeping. Both parametrizations of the composition-operator
// norm are kept: the Lebesgue exponent kappa with 1/q - 1/p = 1/kappa and the
// correction factor alpha = q/p; their consistency (kappa = pq/(p-q) =
// p alpha/(1-alpha)) is asserted at construction.
// ---------------------------------------------------------------------------

struct ExponentPair {
    double p = 2.0;
    double q = 2.0;
    double kappa = std::numeric_limits<double>::infinity();
    double alpha = 1.0;

    ExponentPair(double p_, double q_) : p(p_), q(q_) {
        if (!(p > 1.0) || !std::isfinite(p))
            throw validation_error("exponents: p must lie in (1, infinity)");
        if (!(q >= 1.0 && q <= p))
            throw validation_error("exponents: q must lie in [1, p]");
        alpha = q / p;
        if (p == q) {
            kappa = std::numeric_limits<double>::infinity();
        } else {
            kappa = p * q / (p - q);
            const double kappa_alpha = p * alpha / (1.0 - alpha);
            if (std::abs(kappa - kappa_alpha) > 1e-12 * kappa)
                throw numerical_error("exponents: kappa parametrizations disagree");
            const double resid = 1.0 / q - 1.0 / p - 1.0 / kappa;
            if (std::abs(resid) > 1e-12)
                throw numerical_error("exponents: 1/q - 1/p != 1/kappa");
        }
    }
};

struct DistortionReport {
    double estimate = 0.0;
    std::vector<std::pair<int, double>> refinement_series;
    bool converged = false;
    bool diverged = false;  // grew by >= diverge_ratio for diverge_consecutive doublings
    std::optional<double> closed_form_bound;
};

/// Jet evaluator over grid nodes in their native coordinates.
using JetFn = std::function<maps::MapJet(const PointND&)>;

inline JetFn identity_jet(int n) {
    return [n](const PointND&) {
        maps::MapJet jet;
        jet.image.n = n;
        jet.differential = Mat::identity(n);
        jet.op_norm = 1.0;
        jet.jacobian = 1.0;
        return jet;
    };
}

/// Planar reflection jet on complement-grid nodes (r, theta): s = theta r.
inline JetFn cusp_reflection_jet(double gamma) {
    return [gamma](const PointND& node) {
        return maps::cusp_reflection_2d(gamma, node[0], node[1] * node[0]);
    };
}

/// Inverse reflection jet on cusp-grid nodes (r, theta): S = theta r.
inline JetFn cusp_inverse_jet(double gamma) {
    return [gamma](const PointND& node) {
        return maps::cusp_reflection_inverse_jet_2d(gamma, node[0], node[1] * node[0]);
    };
}

/// Pick reflection jet on reduced spherical nodes (r, theta1, ...).
inline JetFn pick_reflection_jet(double gamma, int n) {
    return [gamma, n](const PointND& node) {
        PointND pt = node;
        pt[1] = node[1] * node[0];  // s = theta1 * r
        return maps::pick_reflection_nd(gamma, n, pt);
    };
}

/// Ridge reflection jet on reduced nodes (cross-section block, z).
inline JetFn ridge_reflection_jet(double gamma, int n) {
    return [gamma, n](const PointND& node) {
        PointND pt = node;
        pt[1] = node[1] * node[0];
        return maps::ridge_reflection_nd(gamma, n, pt);
    };
}

struct RefinementSettings {
    int max_doublings = 5;
    double converge_rel = 0.01;     // relative change per doubling
    double diverge_ratio = 1.1;     // growth factor flagging divergence
    int diverge_consecutive = 3;
};

/// Distortion functional by graded quadrature with grid-doubling refinement.
/// For q < p this is the L_kappa norm of the pointwise dilatation; for q = p
/// the maximum over nodes stands in for the essential supremum. Divergent
/// integrals are reported as converged = false with a growing series.
inline DistortionReport kpq_numeric(const JetFn& map, const geometry::Region& region,
                                    const ExponentPair& exps, const geometry::GradedGrid& grid,
                                    std::optional<double> closed_form_bound = std::nullopt,
                                    const RefinementSettings& settings = {}) {
    DistortionReport report;
    report.closed_form_bound = closed_form_bound;
    const bool sup_mode = exps.p == exps.q;
    int N = grid.N;
    int grow_streak = 0;
    for (int level = 0; level <= settings.max_doublings; ++level, N *= 2) {
        double value = 0.0;
        if (sup_mode) {
            double vmax = 0.0;
            geometry::for_each_cell(region, N, grid.grading_beta,
                                    [&](const PointND& node, double) {
                                        vmax = std::max(vmax, maps::p_dilatation(map(node), exps.p));
                                    });
            value = vmax;
        } else {
            std::vector<PointND> nodes;
            std::vector<double> weights;
            geometry::for_each_cell(region, N, grid.grading_beta,
                                    [&](const PointND& node, double w) {
                                        nodes.push_back(node);
                                        weights.push_back(w);
                                    });
            const double sum = blocked_sum(nodes.size(), [&](std::size_t i) {
                const double k = maps::p_dilatation(map(nodes[i]), exps.p);
                return std::pow(k, exps.kappa) * weights[i];
            });
            value = std::pow(sum, 1.0 / exps.kappa);
        }
        report.refinement_series.emplace_back(N, value);
        report.estimate = value;
        if (!std::isfinite(value)) {
            report.diverged = true;
            break;
        }
        if (level > 0) {
            const double prev = report.refinement_series[report.refinement_series.size() - 2].second;
            const double rel = std::abs(value - prev) / std::max(prev, 1e-300);
            if (rel < settings.converge_rel) {
                report.converged = true;
                break;
            }
            grow_streak = value >= prev * settings.diverge_ratio ? grow_streak + 1 : 0;
            if (grow_streak >= settings.diverge_consecutive) report.diverged = true;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Closed forms for the cusp reflections.
// ---------------------------------------------------------------------------

struct AlphaRange {
    double lo = 0.0;   // 1/p
    double hi = 0.0;   // n/(gamma+n), exclusive
    bool empty = false;

    bool contains(double alpha) const { return !empty && alpha >= lo && alpha < hi; }
};

/// Admissible correction-factor interval [1/p, n/(gamma+n)) for the cusp
/// reflection in dimension n; empty when 1/p >= n/(gamma+n).
inline AlphaRange alpha_range(double gamma, int n, double p) {
    if (!(gamma > 0.0)) throw validation_error("alpha_range: gamma must be positive");
    if (n < 2) throw validation_error("alpha_range: n must be >= 2");
    if (!(p > 1.0)) throw validation_error("alpha_range: p must exceed 1");
    AlphaRange r;
    r.lo = 1.0 / p;
    r.hi = double(n) / (gamma + n);
    r.empty = r.lo >= r.hi;
    return r;
}

/// Envelope constant of the reflection differential:
/// pi (1 + (gamma+1)^2 pi^4/(pi-1)^4 + 1/(pi-1)^2)^(p/2).
inline double cgamma(double gamma, double p) {
    if (!(gamma > 0.0)) throw validation_error("cgamma: gamma must be positive");
    if (!(p >= 1.0)) throw validation_error("cgamma: p must be >= 1");
    const double pm1 = kPi - 1.0;
    const double base =
        1.0 + (gamma + 1.0) * (gamma + 1.0) * std::pow(kPi, 4) / std::pow(pm1, 4) +
        1.0 / (pm1 * pm1);
    return kPi * std::pow(base, p / 2.0);
}

/// Closed-form upper bound on the distortion functional of the cusp
/// reflection, on the K scale (the q-th root of the elementary-integral
/// bound), so it compares directly against kpq_numeric estimates.
inline double kpq_bound_closed_form(double gamma, const ExponentPair& exps, int n) {
    const AlphaRange range = alpha_range(gamma, n, exps.p);
    if (!range.contains(exps.alpha))
        throw numerical_error("kpq_bound_closed_form: alpha outside the convergence range");
    const double a = exps.alpha;
    const double inner = (1.0 - a) / (n * (1.0 - a) - a * gamma);
    const double bound_q = std::pow(2.0 * kPi, 1.0 - a) * std::pow(cgamma(gamma, exps.p), a) *
                           std::pow(inner, 1.0 - a);
    return std::pow(bound_q, 1.0 / exps.q);
}

/// Extension-operator norm bound from the reflection distortion:
/// (|W|^((p-q)/p) + K^q)^(1/q) for q < p, (1 + K^p)^(1/p) for q = p.
inline double extension_norm_bound(double measure_tilde, double kpq, const ExponentPair& exps) {
    if (!(measure_tilde > 0.0))
        throw validation_error("extension_norm_bound: measure must be positive");
    if (!(kpq >= 0.0)) throw validation_error("extension_norm_bound: negative distortion");
    if (exps.p == exps.q) return std::pow(1.0 + std::pow(kpq, exps.p), 1.0 / exps.p);
    const double m = std::pow(measure_tilde, (exps.p - exps.q) / exps.p);
    return std::pow(m + std::pow(kpq, exps.q), 1.0 / exps.q);
}

/// Duality exponents p' = p/(p-n+1), q' = q/(q-n+1) for the inverse
/// composition operator; requires n-1 < q <= p.
inline std::pair<double, double> duality_exponents(double p, double q, int n) {
    if (n < 2) throw validation_error("duality_exponents: n must be >= 2");
    if (!(q > n - 1.0)) throw validation_error("duality_exponents: q must exceed n-1");
    if (!(q <= p)) throw validation_error("duality_exponents: q must not exceed p");
    if (!std::isfinite(p)) throw validation_error("duality_exponents: p must be finite");
    return {p / (p - n + 1.0), q / (q - n + 1.0)};
}

struct DualityReport {
    DistortionReport forward;                  // K_{p,q} of the reflection on the complement
    std::optional<DistortionReport> inverse;  // K_{q',p'} of the inverse on the cusp
    bool both_converged = false;
    bool skipped = false;                      // forward alpha out of range, inverse not run
    double p_dual = 0.0;
    double q_dual = 0.0;
};

/// Planar duality check: the forward reflection in (p,q) and the inverse
/// reflection in (q',p') should both have finite distortion functionals.
inline DualityReport duality_check(double gamma, double p, double q, int start_N, double beta,
                                   const RefinementSettings& settings = {}) {
    const ExponentPair fwd(p, q);
    const auto [pd, qd] = duality_exponents(p, q, 2);
    DualityReport report;
    report.p_dual = pd;
    report.q_dual = qd;
    const auto cusp = geometry::DomainSpec::cusp_gamma(gamma);
    const auto complement = geometry::Region::complement(cusp);
    geometry::GradedGrid seed;
    seed.N = start_N;
    seed.grading_beta = beta;
    std::optional<double> closed;
    const AlphaRange range = alpha_range(gamma, 2, p);
    if (range.contains(fwd.alpha)) closed = kpq_bound_closed_form(gamma, fwd, 2);
    report.forward = kpq_numeric(cusp_reflection_jet(gamma), complement, fwd, seed, closed, settings);
    if (!range.contains(fwd.alpha)) {
        report.skipped = true;
        return report;
    }
    // Inverse operator pair: larger exponent first.
    const ExponentPair inv(qd, pd);
    report.inverse = kpq_numeric(cusp_inverse_jet(gamma), geometry::Region::interior(cusp), inv,
                                 seed, std::nullopt, settings);
    report.both_converged = report.forward.converged && report.inverse->converged;
    return report;
}

}  // namespace cuspext::distortion
