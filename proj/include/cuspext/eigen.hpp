#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cuspext/common.hpp"
#include "cuspext/distortion.hpp"
#include "cuspext/geometry.hpp"

namespace cuspext::eigen {

// ---------------------------------------------------------------------------
// Structured tensor grids for the Rayleigh-quotient minimization. Grid
// functions are node values; the discrete gradient energy integrates the
// bilinear cell interpolant at 2x2 Gauss points with the metric of the
// underlying chart, so the energy has no spurious null modes and the
// Neumann condition is the natural do-nothing one.
//
// Charts:
//   Square  (x, y) in (0,1)^2
//   Disc    (r, theta), radial nodes r_i = (i/N)^beta (the center cell of
//           radius (1/N)^beta is omitted; its measure vanishes as N grows)
//   Cusp    (r, v) with theta = v r^gamma, v in (-1,1), radial grading beta
// ---------------------------------------------------------------------------

struct TensorGrid {
    enum class Kind { Square, Disc, Cusp };
    Kind kind = Kind::Square;
    double gamma = 0.0;
    double beta = 1.0;
    int na = 0, nb = 0;          // node counts along the two axes
    std::vector<double> a, b;    // node coordinates
    bool periodic_b = false;
    std::vector<double> node_mass;  // lumped cell measure per node
    double total_mass = 0.0;

    int node(int i, int j) const { return i * nb + j; }
    int num_nodes() const { return na * nb; }
    int cells_a() const { return na - 1; }
    int cells_b() const { return periodic_b ? nb : nb - 1; }
};

namespace detail {

struct CellGeom {
    int i0, j0, i1, j1;
    double a0, da, b0, db;
};

inline CellGeom cell_geom(const TensorGrid& g, int ci, int cj) {
    CellGeom c;
    c.i0 = ci;
    c.i1 = ci + 1;
    c.j0 = cj;
    c.j1 = g.periodic_b ? (cj + 1) % g.nb : cj + 1;
    c.a0 = g.a[static_cast<std::size_t>(c.i0)];
    c.da = g.a[static_cast<std::size_t>(c.i1)] - c.a0;
    c.b0 = g.b[static_cast<std::size_t>(c.j0)];
    const double b1 = g.b[static_cast<std::size_t>(c.j1)];
    c.db = g.periodic_b && c.j1 == 0 ? (b1 + 2.0 * kPi) - c.b0 : b1 - c.b0;
    return c;
}

/// Physical gradient components and volume factor at a chart point.
struct Metric {
    // g_phys = (m00 * u_a + m01 * u_b, m11 * u_b); volume element factor vol.
    double m00, m01, m11, vol;
};

inline Metric metric_at(const TensorGrid& g, double a, double b) {
    switch (g.kind) {
        case TensorGrid::Kind::Square: return {1.0, 0.0, 1.0, 1.0};
        case TensorGrid::Kind::Disc: return {1.0, 0.0, 1.0 / a, a};
        case TensorGrid::Kind::Cusp: {
            const double rg = std::pow(a, g.gamma);
            return {1.0, -g.gamma * b / a, 1.0 / (rg * a), rg * a};
        }
    }
    return {1.0, 0.0, 1.0, 1.0};
}

constexpr double kGaussOffset = 0.28867513459481288225;  // 1/(2 sqrt(3))

struct GaussPoint {
    double xi, eta;
};

inline std::array<GaussPoint, 4> gauss_points() {
    const double lo = 0.5 - kGaussOffset, hi = 0.5 + kGaussOffset;
    return {GaussPoint{lo, lo}, GaussPoint{hi, lo}, GaussPoint{lo, hi}, GaussPoint{hi, hi}};
}

}  // namespace detail

inline TensorGrid make_square_grid(int N) {
    if (N < 4) throw validation_error("square grid: N must be >= 4");
    TensorGrid g;
    g.kind = TensorGrid::Kind::Square;
    g.na = g.nb = N + 1;
    g.a.resize(static_cast<std::size_t>(g.na));
    for (int i = 0; i <= N; ++i) g.a[static_cast<std::size_t>(i)] = double(i) / N;
    g.b = g.a;
    return g;
}

inline TensorGrid make_disc_grid(int N, double beta = 1.0, int M = 0) {
    if (N < 4) throw validation_error("disc grid: N must be >= 4");
    if (M <= 0) M = N;
    TensorGrid g;
    g.kind = TensorGrid::Kind::Disc;
    g.beta = beta;
    g.na = N;
    g.nb = M;
    g.periodic_b = true;
    g.a.resize(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i)
        g.a[static_cast<std::size_t>(i - 1)] = std::pow(double(i) / N, beta);
    g.b.resize(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) g.b[static_cast<std::size_t>(j)] = -kPi + j * (2.0 * kPi / M);
    return g;
}

inline TensorGrid make_cusp_grid(double gamma, int N, double beta = 2.0, int M = 0) {
    if (N < 4) throw validation_error("cusp grid: N must be >= 4");
    if (!(gamma > 0)) throw validation_error("cusp grid: gamma must be positive");
    if (M <= 0) M = N;
    TensorGrid g;
    g.kind = TensorGrid::Kind::Cusp;
    g.gamma = gamma;
    g.beta = beta;
    g.na = N;
    g.nb = M + 1;
    g.a.resize(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i)
        g.a[static_cast<std::size_t>(i - 1)] = std::pow(double(i) / N, beta);
    g.b.resize(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) g.b[static_cast<std::size_t>(j)] = -1.0 + j * (2.0 / M);
    return g;
}

/// Computes the lumped node masses (shape-function weighted cell measures).
inline void compute_node_mass(TensorGrid& g) {
    g.node_mass.assign(static_cast<std::size_t>(g.num_nodes()), 0.0);
    g.total_mass = 0.0;
    const auto gps = detail::gauss_points();
    for (int ci = 0; ci < g.cells_a(); ++ci)
        for (int cj = 0; cj < g.cells_b(); ++cj) {
            const auto c = detail::cell_geom(g, ci, cj);
            for (const auto& gp : gps) {
                const double a = c.a0 + gp.xi * c.da;
                const double b = c.b0 + gp.eta * c.db;
                const auto m = detail::metric_at(g, a, b);
                const double w = m.vol * c.da * c.db * 0.25;
                g.total_mass += w;
                const double s00 = (1 - gp.xi) * (1 - gp.eta), s10 = gp.xi * (1 - gp.eta);
                const double s01 = (1 - gp.xi) * gp.eta, s11 = gp.xi * gp.eta;
                g.node_mass[static_cast<std::size_t>(g.node(c.i0, c.j0))] += s00 * w;
                g.node_mass[static_cast<std::size_t>(g.node(c.i1, c.j0))] += s10 * w;
                g.node_mass[static_cast<std::size_t>(g.node(c.i0, c.j1))] += s01 * w;
                g.node_mass[static_cast<std::size_t>(g.node(c.i1, c.j1))] += s11 * w;
            }
        }
}

// ---------------------------------------------------------------------------
// Discrete gradient energy sum |grad u|^p w and its exact derivative.
// For p < 2 the integrand is regularized as (|g|^2 + eps^2)^(p/2).
// ---------------------------------------------------------------------------

inline double smoothing_eps(double p) { return p < 2.0 ? 1e-8 : 0.0; }

inline double discrete_energy(const TensorGrid& g, std::span<const double> u, double p,
                              double eps) {
    const auto gps = detail::gauss_points();
    const double e2 = eps * eps;
    double total = 0.0;
    for (int ci = 0; ci < g.cells_a(); ++ci)
        for (int cj = 0; cj < g.cells_b(); ++cj) {
            const auto c = detail::cell_geom(g, ci, cj);
            const double u00 = u[static_cast<std::size_t>(g.node(c.i0, c.j0))];
            const double u10 = u[static_cast<std::size_t>(g.node(c.i1, c.j0))];
            const double u01 = u[static_cast<std::size_t>(g.node(c.i0, c.j1))];
            const double u11 = u[static_cast<std::size_t>(g.node(c.i1, c.j1))];
            for (const auto& gp : gps) {
                const double a = c.a0 + gp.xi * c.da;
                const double b = c.b0 + gp.eta * c.db;
                const auto m = detail::metric_at(g, a, b);
                const double w = m.vol * c.da * c.db * 0.25;
                const double uxi = (u10 - u00) * (1 - gp.eta) + (u11 - u01) * gp.eta;
                const double ueta = (u01 - u00) * (1 - gp.xi) + (u11 - u10) * gp.xi;
                const double ua = uxi / c.da, ub = ueta / c.db;
                const double g1 = m.m00 * ua + m.m01 * ub;
                const double g2 = m.m11 * ub;
                total += std::pow(g1 * g1 + g2 * g2 + e2, p / 2.0) * w;
            }
        }
    return total;
}

/// Exact gradient of discrete_energy with respect to the node values; the
/// diagonal of the Gauss-Newton approximation is accumulated alongside when
/// requested (used as a preconditioner).
inline void discrete_energy_grad(const TensorGrid& g, std::span<const double> u, double p,
                                 double eps, std::span<double> grad,
                                 std::vector<double>* diag = nullptr) {
    std::fill(grad.begin(), grad.end(), 0.0);
    if (diag) diag->assign(grad.size(), 0.0);
    const auto gps = detail::gauss_points();
    const double e2 = eps * eps;
    for (int ci = 0; ci < g.cells_a(); ++ci)
        for (int cj = 0; cj < g.cells_b(); ++cj) {
            const auto c = detail::cell_geom(g, ci, cj);
            const int k00 = g.node(c.i0, c.j0), k10 = g.node(c.i1, c.j0);
            const int k01 = g.node(c.i0, c.j1), k11 = g.node(c.i1, c.j1);
            const double u00 = u[static_cast<std::size_t>(k00)], u10 = u[static_cast<std::size_t>(k10)];
            const double u01 = u[static_cast<std::size_t>(k01)], u11 = u[static_cast<std::size_t>(k11)];
            for (const auto& gp : gps) {
                const double a = c.a0 + gp.xi * c.da;
                const double b = c.b0 + gp.eta * c.db;
                const auto m = detail::metric_at(g, a, b);
                const double w = m.vol * c.da * c.db * 0.25;
                const double uxi = (u10 - u00) * (1 - gp.eta) + (u11 - u01) * gp.eta;
                const double ueta = (u01 - u00) * (1 - gp.xi) + (u11 - u10) * gp.xi;
                const double ua = uxi / c.da, ub = ueta / c.db;
                const double g1 = m.m00 * ua + m.m01 * ub;
                const double g2 = m.m11 * ub;
                const double t = g1 * g1 + g2 * g2 + e2;
                const double factor = p * std::pow(t, p / 2.0 - 1.0) * w;
                // d(ua)/du_c = cxi/da, d(ub)/du_c = ceta/db per corner
                const double cxi[4] = {-(1 - gp.eta), (1 - gp.eta), -gp.eta, gp.eta};
                const double ceta[4] = {-(1 - gp.xi), -gp.xi, (1 - gp.xi), gp.xi};
                const int idx[4] = {k00, k10, k01, k11};
                for (int cidx = 0; cidx < 4; ++cidx) {
                    const double dua = cxi[cidx] / c.da;
                    const double dub = ceta[cidx] / c.db;
                    const double dg1 = m.m00 * dua + m.m01 * dub;
                    const double dg2 = m.m11 * dub;
                    grad[static_cast<std::size_t>(idx[cidx])] += factor * (g1 * dg1 + g2 * dg2);
                    if (diag)
                        (*diag)[static_cast<std::size_t>(idx[cidx])] +=
                            factor * (dg1 * dg1 + dg2 * dg2);
                }
            }
        }
}

// ---------------------------------------------------------------------------
// Norms, the nonlinear mean, and the Rayleigh quotient on grid functions.
// ---------------------------------------------------------------------------

inline double lq_norm(std::span<const double> u, std::span<const double> mass, double q) {
    double s = 0;
    for (std::size_t k = 0; k < u.size(); ++k) s += std::pow(std::abs(u[k]), q) * mass[k];
    return std::pow(s, 1.0 / q);
}

inline double constraint_value(std::span<const double> u, std::span<const double> mass, double q,
                               double c) {
    double s = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double d = u[k] - c;
        s += mass[k] * std::copysign(std::pow(std::abs(d), q - 1.0), d);
    }
    return s;
}

/// The unique shift c with integral |u-c|^(q-2) (u-c) = 0; the map is
/// continuous and strictly decreasing in c, so bisection applies. For q = 2
/// this is the weighted mean.
inline double constraint_shift(std::span<const double> u, std::span<const double> mass, double q) {
    if (!(q > 1.0)) throw validation_error("constraint projection requires q > 1");
    const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
    if (*mx - *mn <= 0.0)
        throw std::domain_error("constraint projection: constant grid function");
    if (q == 2.0) {
        double num = 0, den = 0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            num += mass[k] * u[k];
            den += mass[k];
        }
        return num / den;
    }
    double lo = *mn, hi = *mx;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (constraint_value(u, mass, q, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

/// Projects u onto the constraint set in place and returns the shift.
inline double constraint_project(std::span<double> u, std::span<const double> mass, double q) {
    const double c = constraint_shift(u, mass, q);
    for (double& v : u) v -= c;
    return c;
}

/// Rayleigh quotient |grad u|_p^p / |u|_q^p of a grid function.
inline double rayleigh(const TensorGrid& g, std::span<const double> u, double p, double q) {
    const double nq = lq_norm(u, g.node_mass, q);
    if (!(nq > 0.0)) throw std::domain_error("rayleigh: function vanishes in L_q");
    const double e = discrete_energy(g, u, p, 0.0);
    if (e == 0.0) {
        // Nonzero constants violate the constraint; treat them as degenerate.
        const double resid = std::abs(constraint_value(u, g.node_mass, q, 0.0));
        if (resid > 1e-12 * nq) throw std::domain_error("rayleigh: constant grid function");
    }
    return e / std::pow(nq, p);
}

// ---------------------------------------------------------------------------
// Minimization.
// ---------------------------------------------------------------------------

struct MinimizeSettings {
    int N = 64;
    double beta = 0.0;   // 0 -> per-domain default (1 for disc/square, 2 for cusp)
    int M = 0;           // 0 -> same as N
    int max_iters = 4000;   // per refinement level
    int restarts = 5;
    std::uint64_t seed = 42;
    bool continuation = true;
};

struct EigenResult {
    double mu = 0.0;
    TensorGrid grid;
    std::vector<double> minimizer;
    double constraint_residual = 0.0;
    int iterations = 0;
    std::vector<double> history;  // accepted Rayleigh values on the finest level
};

namespace detail {

inline TensorGrid build_grid(const geometry::DomainSpec& domain, int N, double beta, int M) {
    switch (domain.kind) {
        case geometry::DomainKind::Square2D: return make_square_grid(N);
        case geometry::DomainKind::Disc2D:
            return make_disc_grid(N, beta == 0.0 ? 1.0 : beta, M);
        case geometry::DomainKind::Cusp2D:
            return make_cusp_grid(domain.gamma, N, beta == 0.0 ? 2.0 : beta, M);
        default:
            throw validation_error("minimize_mu: supported regions are square, disc and cusp2d");
    }
}

/// Bilinear interpolation of a coarse grid function at (a,b), used for
/// coarse-to-fine continuation.
inline double interp(const TensorGrid& g, std::span<const double> u, double a, double b) {
    auto bracket = [](const std::vector<double>& xs, double x) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        int hi = static_cast<int>(it - xs.begin());
        hi = std::clamp(hi, 1, static_cast<int>(xs.size()) - 1);
        return hi - 1;
    };
    const int i0 = bracket(g.a, a);
    const double ta = std::clamp((a - g.a[static_cast<std::size_t>(i0)]) /
                                     (g.a[static_cast<std::size_t>(i0 + 1)] - g.a[static_cast<std::size_t>(i0)]),
                                 0.0, 1.0);
    int j0;
    double tb;
    if (g.periodic_b) {
        const double span = 2.0 * kPi;
        double bb = b;
        while (bb < g.b.front()) bb += span;
        while (bb >= g.b.front() + span) bb -= span;
        const auto it = std::upper_bound(g.b.begin(), g.b.end(), bb);
        j0 = static_cast<int>(it - g.b.begin()) - 1;
        j0 = std::clamp(j0, 0, g.nb - 1);
        const double b0 = g.b[static_cast<std::size_t>(j0)];
        const double b1 = j0 + 1 < g.nb ? g.b[static_cast<std::size_t>(j0 + 1)] : g.b.front() + span;
        tb = std::clamp((bb - b0) / (b1 - b0), 0.0, 1.0);
    } else {
        j0 = bracket(g.b, b);
        tb = std::clamp((b - g.b[static_cast<std::size_t>(j0)]) /
                            (g.b[static_cast<std::size_t>(j0 + 1)] - g.b[static_cast<std::size_t>(j0)]),
                        0.0, 1.0);
    }
    const int j1 = g.periodic_b ? (j0 + 1) % g.nb : j0 + 1;
    const double u00 = u[static_cast<std::size_t>(g.node(i0, j0))];
    const double u10 = u[static_cast<std::size_t>(g.node(i0 + 1, j0))];
    const double u01 = u[static_cast<std::size_t>(g.node(i0, j1))];
    const double u11 = u[static_cast<std::size_t>(g.node(i0 + 1, j1))];
    return (1 - ta) * ((1 - tb) * u00 + tb * u01) + ta * ((1 - tb) * u10 + tb * u11);
}

inline std::vector<double> prolong(const TensorGrid& coarse, std::span<const double> u,
                                   const TensorGrid& fine) {
    std::vector<double> out(static_cast<std::size_t>(fine.num_nodes()));
    for (int i = 0; i < fine.na; ++i)
        for (int j = 0; j < fine.nb; ++j)
            out[static_cast<std::size_t>(fine.node(i, j))] =
                interp(coarse, u, fine.a[static_cast<std::size_t>(i)], fine.b[static_cast<std::size_t>(j)]);
    return out;
}

/// Projects onto the constraint set and normalizes in L_q. Returns false if
/// the function degenerated to a constant.
inline bool project_normalize(std::span<double> u, std::span<const double> mass, double q) {
    const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
    if (*mx - *mn <= 0.0) return false;
    constraint_project(u, mass, q);
    const double nq = lq_norm(u, mass, q);
    if (!(nq > 0.0)) return false;
    for (double& v : u) v /= nq;
    return true;
}

struct DescentOutcome {
    double energy = 0.0;
    int iterations = 0;
    std::vector<double> history;
};

/// Projected descent on the normalized constraint manifold. For the
/// quadratic case p = q = 2 each step minimizes the quotient exactly over
/// span{u, d} (two-point Ritz step); otherwise an Armijo backtracking step
/// on the preconditioned gradient direction is used.
inline DescentOutcome descend(const TensorGrid& g, std::vector<double>& u, double p, double q,
                              int max_iters) {
    const double eps = smoothing_eps(p);
    const std::size_t n = u.size();
    const auto& mass = g.node_mass;
    DescentOutcome out;
    if (!project_normalize(u, mass, q))
        throw std::domain_error("minimize_mu: degenerate start vector");
    double energy = discrete_energy(g, u, p, eps);
    out.history.push_back(energy);
    std::vector<double> grad(n), d(n), trial(n);
    std::vector<double> diag;
    const bool quadratic = p == 2.0 && q == 2.0;
    double tau = 1.0;
    int flat_streak = 0;
    for (int iter = 0; iter < max_iters; ++iter) {
        discrete_energy_grad(g, u, p, eps, grad, &diag);
        // Quotient gradient at unit L_q norm.
        double gd_dot = 0.0;
        double diag_floor = 0.0;
        for (double v : diag) diag_floor += v;
        diag_floor = std::max(1e-300, 1e-8 * diag_floor / double(n));
        for (std::size_t k = 0; k < n; ++k) {
            const double uq = std::copysign(std::pow(std::abs(u[k]), q - 1.0), u[k]);
            const double gr = grad[k] - p * energy * mass[k] * uq;
            d[k] = -gr / std::max(diag[k], diag_floor);
            gd_dot += gr * d[k];
        }
        if (!(gd_dot < 0.0)) break;  // no descent direction left
        double new_energy = energy;
        bool accepted = false;
        if (quadratic) {
            // Keep the two-dimensional trial space inside the constraint plane.
            double dm = 0, mm = 0;
            for (std::size_t k = 0; k < n; ++k) {
                dm += mass[k] * d[k];
                mm += mass[k];
            }
            const double shift = dm / mm;
            for (double& v : d) v -= shift;
            // Quadratic forms on span{u, d}: energy E(x) = x^T A x, mass x^T M x;
            // grad already holds 2 A u from the top of the iteration.
            discrete_energy_grad(g, d, p, eps, trial, nullptr);  // trial = 2 A d
            double add = 0, aud = 0;
            for (std::size_t k = 0; k < n; ++k) {
                aud += 0.5 * grad[k] * d[k];
                add += 0.5 * trial[k] * d[k];
            }
            double mud = 0, mdd = 0;
            for (std::size_t k = 0; k < n; ++k) {
                mud += mass[k] * u[k] * d[k];
                mdd += mass[k] * d[k] * d[k];
            }
            const double A11 = energy, A12 = aud, A22 = add;
            const double M12 = mud, M22 = mdd;
            const double qa = M22 - M12 * M12;
            const double qb = -(A11 * M22 + A22 - 2.0 * A12 * M12);
            const double qc = A11 * A22 - A12 * A12;
            if (qa > 0.0) {
                const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
                const double lambda = (-qb - std::sqrt(disc)) / (2.0 * qa);
                const double y1 = -(A12 - lambda * M12), y2 = A11 - lambda;
                const double scale = std::max(std::abs(y1), std::abs(y2));
                if (scale > 0.0 && std::isfinite(lambda) && lambda <= energy * (1.0 + 1e-13)) {
                    for (std::size_t k = 0; k < n; ++k)
                        trial[k] = y1 / scale * u[k] + y2 / scale * d[k];
                    if (project_normalize(trial, mass, q)) {
                        const double e = discrete_energy(g, trial, p, eps);
                        if (e <= energy) {
                            u.swap(trial);
                            new_energy = e;
                            accepted = true;
                        }
                    }
                }
            }
        }
        if (!accepted) {
            // Armijo backtracking on the projected evaluation.
            double step = tau;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t k = 0; k < n; ++k) trial[k] = u[k] + step * d[k];
                if (project_normalize(trial, mass, q)) {
                    const double e = discrete_energy(g, trial, p, eps);
                    if (e <= energy + 1e-4 * step * gd_dot) {
                        u.swap(trial);
                        new_energy = e;
                        accepted = true;
                        tau = std::min(step * 1.5, 1e6);
                        break;
                    }
                }
                step *= 0.5;
                if (step < 1e-18) break;
            }
        }
        if (!accepted) break;
        ++out.iterations;
        out.history.push_back(new_energy);
        const double rel = (energy - new_energy) / std::max(new_energy, 1e-300);
        energy = new_energy;
        flat_streak = rel < 1e-12 ? flat_streak + 1 : 0;
        if (flat_streak >= 6) break;
    }
    out.energy = energy;
    return out;
}

}  // namespace detail

/// Minimizes the Neumann Rayleigh quotient over grid functions with the
/// zero q-mean constraint. Runs seeded random restarts (optionally in
/// parallel), each with coarse-to-fine continuation; returns the best value
/// with the lowest-seed tie break.
inline EigenResult minimize_mu(const geometry::DomainSpec& domain, double p, double q,
                               const MinimizeSettings& settings = {}) {
    if (!(p > 1.0)) throw validation_error("minimize_mu: p must exceed 1");
    if (!(q > 1.0)) throw validation_error("minimize_mu: q must exceed 1");
    // Refinement ladder: coarse start, doubling up to the requested N.
    std::vector<int> levels;
    int N = settings.N;
    levels.push_back(N);
    if (settings.continuation) {
        while (N > 16) {
            N /= 2;
            levels.push_back(N);
        }
        std::reverse(levels.begin(), levels.end());
    }
    std::vector<TensorGrid> grids;
    grids.reserve(levels.size());
    for (int lvlN : levels) {
        const int M = settings.M > 0 ? std::max(8, settings.M * lvlN / settings.N) : 0;
        TensorGrid g = detail::build_grid(domain, lvlN, settings.beta, M);
        compute_node_mass(g);
        grids.push_back(std::move(g));
    }

    struct RestartResult {
        double mu = std::numeric_limits<double>::infinity();
        std::vector<double> u;
        std::vector<double> history;
        int iterations = 0;
    };

    auto run_restart = [&](int k) {
        RestartResult rr;
        std::mt19937_64 rng(settings.seed + static_cast<std::uint64_t>(k));
        std::vector<double> u(static_cast<std::size_t>(grids.front().num_nodes()));
        for (double& v : u) v = 2.0 * uniform01(rng) - 1.0;
        detail::DescentOutcome outcome;
        for (std::size_t lvl = 0; lvl < grids.size(); ++lvl) {
            if (lvl > 0) u = detail::prolong(grids[lvl - 1], u, grids[lvl]);
            outcome = detail::descend(grids[lvl], u, p, q, settings.max_iters);
            rr.iterations += outcome.iterations;
        }
        rr.u = std::move(u);
        rr.history = std::move(outcome.history);
        rr.mu = outcome.energy;
        return rr;
    };

    std::vector<RestartResult> results(static_cast<std::size_t>(settings.restarts));
    const int workers = std::min(effective_threads(), settings.restarts);
    if (workers <= 1) {
        for (int k = 0; k < settings.restarts; ++k) results[static_cast<std::size_t>(k)] = run_restart(k);
    } else {
        std::vector<std::future<RestartResult>> futs;
        futs.reserve(static_cast<std::size_t>(settings.restarts));
        for (int k = 0; k < settings.restarts; ++k)
            futs.push_back(std::async(std::launch::async, run_restart, k));
        for (int k = 0; k < settings.restarts; ++k) results[static_cast<std::size_t>(k)] = futs[static_cast<std::size_t>(k)].get();
    }

    int best = 0;
    for (int k = 1; k < settings.restarts; ++k)
        if (results[static_cast<std::size_t>(k)].mu < results[static_cast<std::size_t>(best)].mu) best = k;

    EigenResult res;
    res.grid = grids.back();
    RestartResult& win = results[static_cast<std::size_t>(best)];
    res.minimizer = std::move(win.u);
    res.history = std::move(win.history);
    res.iterations = win.iterations;
    // Report the unsmoothed quotient of the found minimizer.
    res.mu = rayleigh(res.grid, res.minimizer, p, q);
    res.constraint_residual =
        std::abs(constraint_value(res.minimizer, res.grid.node_mass, q, 0.0));
    return res;
}

// ---------------------------------------------------------------------------
// Closed-form eigenvalue bounds.
// ---------------------------------------------------------------------------

/// Lower bound transported through an extension operator:
/// mu_{p,r}(inner) >= mu_{q,r}(outer)^(p/q) / |E|^p.
inline double monotonicity_bound(double mu_q_r_superdomain, double ext_norm, double p, double q) {
    if (!(ext_norm > 0.0)) throw validation_error("monotonicity_bound: extension norm must be positive");
    if (!(mu_q_r_superdomain > 0.0))
        throw validation_error("monotonicity_bound: eigenvalue must be positive");
    return std::pow(mu_q_r_superdomain, p / q) / std::pow(ext_norm, p);
}

/// Closed-form lower bound for the first nontrivial Neumann eigenvalue of the
/// cusp domain, composed from the ball eigenvalue and the displayed
/// extension-norm constant.
inline double cusp_eigen_bound(double gamma_tilde, int n, double p, double alpha,
                               double mu_q_r_ball) {
    geometry::DomainSpec::check_gamma_tilde(gamma_tilde);
    if (n < 2) throw validation_error("cusp_eigen_bound: n must be >= 2");
    if (!(p > 1.0)) throw validation_error("cusp_eigen_bound: p must exceed 1");
    const double gamma = (1.0 - gamma_tilde) / gamma_tilde;
    const double hi = double(n) / (gamma + n);
    if (!(alpha > 1.0 / p && alpha < hi))
        throw numerical_error("cusp_eigen_bound: alpha outside (1/p, n/(gamma+n))");
    if (!(mu_q_r_ball > 0.0))
        throw validation_error("cusp_eigen_bound: ball eigenvalue must be positive");
    const double inner = (1.0 - alpha) / (n * (1.0 - alpha) - alpha * gamma);
    const double B = std::pow(unit_ball_volume(n), 1.0 - alpha) +
                     std::pow(distortion::cgamma(gamma, p), alpha) * std::pow(inner, 1.0 - alpha);
    return std::pow(B, -1.0 / alpha) * std::pow(mu_q_r_ball, 1.0 / alpha);
}

/// The displayed extension-norm constant for the cusp, used to cross-check
/// cusp_eigen_bound against monotonicity_bound.
inline double cusp_extension_norm_display(double gamma_tilde, int n, double p, double alpha) {
    const double gamma = (1.0 - gamma_tilde) / gamma_tilde;
    const double inner = (1.0 - alpha) / (n * (1.0 - alpha) - alpha * gamma);
    const double B = std::pow(unit_ball_volume(n), 1.0 - alpha) +
                     std::pow(distortion::cgamma(gamma, p), alpha) * std::pow(inner, 1.0 - alpha);
    return std::pow(B, 1.0 / (alpha * p));
}

/// Convex-domain lower bound pi^2 / d^2 (sanity check only).
inline double payne_weinberger(double diameter) {
    if (!(diameter > 0.0)) throw validation_error("payne_weinberger: diameter must be positive");
    return kPi * kPi / (diameter * diameter);
}

}  // namespace cuspext::eigen
