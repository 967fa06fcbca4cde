#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuspext/common.hpp"

namespace cuspext::geometry {

// ---------------------------------------------------------------------------
// Domains.
//
// Cusp-type domains are parametrized by the Holder exponent gt in (0,1);
// the derived aperture exponent is g = (1-gt)/gt, so the planar cusp is
//   { (r,theta) : |theta| < r^g, 0 < r < 1 }
// (both halves plus the open unit interval on the axis). Picks rotate the
// planar cusp about the x1 axis inside the unit ball; ridges are a pick in
// one dimension lower crossed with (0,1).
// ---------------------------------------------------------------------------

enum class DomainKind { Disc2D, BallND, Cusp2D, PickND, RidgeND, Square2D };

inline std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::Disc2D: return "disc";
        case DomainKind::BallND: return "ball";
        case DomainKind::Cusp2D: return "cusp2d";
        case DomainKind::PickND: return "pick";
        case DomainKind::RidgeND: return "ridge";
        case DomainKind::Square2D: return "square";
    }
    return "?";
}

struct DomainSpec {
    DomainKind kind = DomainKind::Disc2D;
    int n = 2;
    double gamma_tilde = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();

    bool is_cusp_kind() const {
        return kind == DomainKind::Cusp2D || kind == DomainKind::PickND ||
               kind == DomainKind::RidgeND;
    }

    static DomainSpec disc() { return DomainSpec{DomainKind::Disc2D, 2, {}, {}}; }
    static DomainSpec square() { return DomainSpec{DomainKind::Square2D, 2, {}, {}}; }
    static DomainSpec ball(int n) {
        if (n < 2) throw validation_error("ball: dimension n must be >= 2");
        return DomainSpec{DomainKind::BallND, n, {}, {}};
    }
    static DomainSpec cusp(double gamma_tilde) {
        check_gamma_tilde(gamma_tilde);
        DomainSpec d{DomainKind::Cusp2D, 2, gamma_tilde, (1.0 - gamma_tilde) / gamma_tilde};
        return d;
    }
    /// Planar cusp given directly by the aperture exponent g > 0.
    static DomainSpec cusp_gamma(double gamma) {
        if (!(gamma > 0)) throw validation_error("cusp: gamma must be positive");
        DomainSpec d{DomainKind::Cusp2D, 2, 1.0 / (gamma + 1.0), gamma};
        return d;
    }
    static DomainSpec pick(int n, double gamma_tilde) {
        if (n < 2) throw validation_error("pick: dimension n must be >= 2");
        check_gamma_tilde(gamma_tilde);
        return DomainSpec{DomainKind::PickND, n, gamma_tilde, (1.0 - gamma_tilde) / gamma_tilde};
    }
    static DomainSpec ridge(int n, double gamma_tilde) {
        if (n < 3) throw validation_error("ridge: dimension n must be >= 3");
        check_gamma_tilde(gamma_tilde);
        return DomainSpec{DomainKind::RidgeND, n, gamma_tilde, (1.0 - gamma_tilde) / gamma_tilde};
    }

    static void check_gamma_tilde(double gt) {
        if (!(gt > 0.0 && gt < 1.0))
            throw validation_error("gamma_tilde must lie in (0,1)");
    }
};

// ---------------------------------------------------------------------------
// Membership.
// ---------------------------------------------------------------------------

namespace detail {

inline bool pick_contains(int n, double gamma, std::span<const double> x) {
    // Rotationally symmetric about the x1 axis: polar angle from x1 < r^gamma.
    double r2 = 0;
    for (double v : x) r2 += v * v;
    const double r = std::sqrt(r2);
    if (!(r > 0.0 && r < 1.0)) return false;
    const double polar = std::acos(std::clamp(x[0] / r, -1.0, 1.0));
    return polar < std::pow(r, gamma);
}

}  // namespace detail

/// Open-domain membership for a Euclidean point of dimension spec.n.
/// Points on the cusp axis interval belong to the cusp domains.
inline bool contains(const DomainSpec& spec, std::span<const double> pt) {
    if (static_cast<int>(pt.size()) != spec.n)
        throw validation_error("contains: point dimension does not match domain dimension");
    switch (spec.kind) {
        case DomainKind::Disc2D:
            return pt[0] * pt[0] + pt[1] * pt[1] < 1.0;
        case DomainKind::Square2D:
            return pt[0] > 0.0 && pt[0] < 1.0 && pt[1] > 0.0 && pt[1] < 1.0;
        case DomainKind::BallND: {
            double r2 = 0;
            for (double v : pt) r2 += v * v;
            return r2 < 1.0;
        }
        case DomainKind::Cusp2D:
        case DomainKind::PickND:
            return detail::pick_contains(spec.n, spec.gamma, pt);
        case DomainKind::RidgeND: {
            const double z = pt[spec.n - 1];
            if (!(z > 0.0 && z < 1.0)) return false;
            return detail::pick_contains(spec.n - 1, spec.gamma,
                                         pt.subspan(0, static_cast<std::size_t>(spec.n - 1)));
        }
    }
    return false;
}

/// Convenience overload for polar membership tests on the planar cusp.
inline bool cusp_contains_polar(double gamma, double r, double theta) {
    return r > 0.0 && r < 1.0 && std::abs(theta) < std::pow(r, gamma);
}

// ---------------------------------------------------------------------------
// Measures.
// ---------------------------------------------------------------------------

namespace detail {

/// int_0^u sin^m t dt by the standard reduction formula.
inline double sin_power_integral(int m, double u) {
    if (m == 0) return u;
    if (m == 1) return 1.0 - std::cos(u);
    const double su = std::sin(u), cu = std::cos(u);
    return (-cu * std::pow(su, m - 1) + (m - 1) * sin_power_integral(m - 2, u)) / m;
}

/// Midpoint rule with doubling until the relative change drops below tol.
inline double refine_integral(const std::function<double(double)>& f, double lo, double hi,
                              double tol) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    int n = 128;
    for (int level = 0; level < 10; ++level, n *= 2) {
        const double h = (hi - lo) / n;
        double s = 0;
        for (int i = 0; i < n; ++i) s += f(lo + (i + 0.5) * h);
        s *= h;
        if (level > 0 && std::abs(s - prev) <= tol * std::abs(s)) return s;
        prev = s;
    }
    return prev;
}

inline double pick_measure(int n, double gamma) {
    if (n == 2) return 2.0 / (gamma + 2.0);
    const double area = unit_sphere_area(n - 2);
    auto f = [&](double r) {
        return std::pow(r, n - 1) * sin_power_integral(n - 2, std::pow(r, gamma));
    };
    return area * refine_integral(f, 0.0, 1.0, 1e-8);
}

}  // namespace detail

/// Lebesgue measure; analytic where available, converged quadrature
/// (relative tolerance 1e-6) otherwise.
inline double measure(const DomainSpec& spec) {
    switch (spec.kind) {
        case DomainKind::Disc2D: return kPi;
        case DomainKind::Square2D: return 1.0;
        case DomainKind::BallND: return unit_ball_volume(spec.n);
        case DomainKind::Cusp2D: return 2.0 / (spec.gamma + 2.0);
        case DomainKind::PickND: return detail::pick_measure(spec.n, spec.gamma);
        case DomainKind::RidgeND: return detail::pick_measure(spec.n - 1, spec.gamma);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Regions and graded grids.
//
// A region is either a supported domain or its complement in the canonical
// superdomain (disc for the planar cusp, ball for picks, ball x (0,1) for
// ridges). Grid nodes are cell representatives in native coordinates:
//   Polar2D          (r, theta)
//   SphericalReduced (r, theta1, ..., theta_{n-1}) with the rotationally
//                    symmetric directions folded into the weights
//   RidgeReduced     (spherical block, z)
//   Cartesian2D      (x, y)
// Radial nodes are graded toward the origin: r_k = ((k-1/2)/N)^beta.
// Weights are exact cell measures where the cell geometry allows it and
// second-order approximations otherwise, so weight sums converge to the
// region measure.
// ---------------------------------------------------------------------------

enum class RegionKind { Interior, ComplementInSuper };

struct Region {
    RegionKind kind = RegionKind::Interior;
    DomainSpec domain;

    static Region interior(const DomainSpec& d) { return Region{RegionKind::Interior, d}; }
    static Region complement(const DomainSpec& d) {
        if (!d.is_cusp_kind())
            throw validation_error("complement region is only defined for cusp-type domains");
        return Region{RegionKind::ComplementInSuper, d};
    }
};

inline DomainSpec superdomain(const DomainSpec& d) {
    switch (d.kind) {
        case DomainKind::Cusp2D: return DomainSpec::disc();
        case DomainKind::PickND: return DomainSpec::ball(d.n);
        case DomainKind::RidgeND: return DomainSpec::ball(d.n - 1);  // cross section; x (0,1)
        default: throw validation_error("superdomain: unsupported domain kind");
    }
}

inline double region_measure(const Region& region) {
    if (region.kind == RegionKind::Interior) return measure(region.domain);
    const DomainSpec& d = region.domain;
    switch (d.kind) {
        case DomainKind::Cusp2D: return kPi - measure(d);
        case DomainKind::PickND: return unit_ball_volume(d.n) - measure(d);
        case DomainKind::RidgeND: return unit_ball_volume(d.n - 1) - measure(d);
        default: throw validation_error("region_measure: unsupported region");
    }
}

enum class CoordSystem { Cartesian2D, Polar2D, SphericalReduced, RidgeReduced };

struct GradedGrid {
    CoordSystem coords = CoordSystem::Polar2D;
    std::vector<PointND> nodes;
    std::vector<double> weights;
    double grading_beta = 1.0;
    int N = 0;
};

namespace detail {

struct RadialCells {
    std::vector<double> edges;  // size N+1
    std::vector<double> nodes;  // size N, ((k-1/2)/N)^beta
};

inline RadialCells radial_cells(int N, double beta) {
    RadialCells rc;
    rc.edges.resize(static_cast<std::size_t>(N) + 1);
    rc.nodes.resize(static_cast<std::size_t>(N));
    for (int k = 0; k <= N; ++k) rc.edges[static_cast<std::size_t>(k)] = std::pow(double(k) / N, beta);
    for (int k = 1; k <= N; ++k)
        rc.nodes[static_cast<std::size_t>(k - 1)] = std::pow((k - 0.5) / N, beta);
    return rc;
}

/// int over the radial cell of r^(m) dr.
inline double radial_moment(double lo, double hi, int m) {
    return (std::pow(hi, m + 1) - std::pow(lo, m + 1)) / (m + 1);
}

/// int over the radial cell of r^(g+1) dr with real exponent.
inline double radial_moment_real(double lo, double hi, double expo) {
    return (std::pow(hi, expo + 1.0) - std::pow(lo, expo + 1.0)) / (expo + 1.0);
}

template <class F>
void cusp2d_cells(double gamma, int N, double beta, bool complement, F&& emit) {
    const RadialCells rc = radial_cells(N, beta);
    const int M = N;  // angular cells per half
    for (int k = 0; k < N; ++k) {
        const double rlo = rc.edges[static_cast<std::size_t>(k)];
        const double rhi = rc.edges[static_cast<std::size_t>(k + 1)];
        const double rn = rc.nodes[static_cast<std::size_t>(k)];
        const double rg = std::pow(rn, gamma);
        if (!complement) {
            // theta = v * r^gamma, v in (-1,1): exact cell measure.
            const double radial = radial_moment_real(rlo, rhi, gamma + 1.0);
            const double dv = 2.0 / M;
            for (int j = 0; j < M; ++j) {
                const double v = -1.0 + (j + 0.5) * dv;
                PointND node{rn, v * rg};
                emit(node, dv * radial);
            }
        } else {
            // theta = r^gamma + t (pi - r^gamma), t in (0,1), mirrored below.
            const double radial =
                kPi * radial_moment(rlo, rhi, 1) - radial_moment_real(rlo, rhi, gamma + 1.0);
            const double dt = 1.0 / M;
            for (int half = 0; half < 2; ++half) {
                const double sign = half == 0 ? 1.0 : -1.0;
                for (int j = 0; j < M; ++j) {
                    const double t = (j + 0.5) * dt;
                    const double theta = rg + t * (kPi - rg);
                    PointND node{rn, sign * theta};
                    emit(node, dt * radial);
                }
            }
        }
    }
}

template <class F>
void disc_cells(int N, double beta, F&& emit) {
    const RadialCells rc = radial_cells(N, beta);
    const int M = N;
    const double dtheta = 2.0 * kPi / M;
    for (int k = 0; k < N; ++k) {
        const double radial = radial_moment(rc.edges[static_cast<std::size_t>(k)],
                                            rc.edges[static_cast<std::size_t>(k + 1)], 1);
        for (int j = 0; j < M; ++j) {
            const double theta = -kPi + (j + 0.5) * dtheta;
            PointND node{rc.nodes[static_cast<std::size_t>(k)], theta};
            emit(node, radial * dtheta);
        }
    }
}

template <class F>
void square_cells(int N, F&& emit) {
    const double h = 1.0 / N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            PointND node{(i + 0.5) * h, (j + 0.5) * h};
            emit(node, h * h);
        }
}

/// Fills the trailing spherical angles of a reduced node with interior
/// representatives (the full angular measure lives in the weight).
inline PointND reduced_spherical_node(int n, double r, double theta1) {
    PointND p;
    p.n = n;
    p[0] = r;
    p[1] = theta1;
    for (int i = 2; i < n - 1; ++i) p[i] = kPi / 2.0;
    if (n >= 3) p[n - 1] = kPi;  // azimuthal angle in (0, 2pi)
    return p;
}

template <class F>
void pick_cells(int n, double gamma, int N, double beta, bool complement, F&& emit) {
    if (n == 2) {
        cusp2d_cells(gamma, N, beta, complement, emit);
        return;
    }
    const RadialCells rc = radial_cells(N, beta);
    const int M = N;
    const double area = unit_sphere_area(n - 2);
    for (int k = 0; k < N; ++k) {
        const double rlo = rc.edges[static_cast<std::size_t>(k)];
        const double rhi = rc.edges[static_cast<std::size_t>(k + 1)];
        const double rn = rc.nodes[static_cast<std::size_t>(k)];
        const double rg = std::pow(rn, gamma);
        const double radial = radial_moment(rlo, rhi, n - 1);
        const double alo = complement ? rg : 0.0;
        const double ahi = complement ? kPi : rg;
        const double da = (ahi - alo) / M;
        for (int j = 0; j < M; ++j) {
            const double t0 = alo + j * da;
            const double t1 = t0 + da;
            const double theta1 = 0.5 * (t0 + t1);
            const double ang = sin_power_integral(n - 2, t1) - sin_power_integral(n - 2, t0);
            emit(reduced_spherical_node(n, rn, theta1), area * radial * ang);
        }
    }
}

template <class F>
void ridge_cells(int n, double gamma, int N, double beta, bool complement, F&& emit) {
    // (n-1)-dimensional pick cross-section times a uniform z grid.
    const int L = N;
    const double dz = 1.0 / L;
    pick_cells(n - 1, gamma, N, beta, complement, [&](const PointND& base, double w) {
        for (int l = 0; l < L; ++l) {
            PointND node = base;
            node[node.n] = (l + 0.5) * dz;
            node.n += 1;
            emit(node, w * dz);
        }
    });
}

}  // namespace detail

/// Visits every grid cell of the region at refinement N (grading beta),
/// calling emit(node, weight) in a canonical deterministic order.
template <class F>
void for_each_cell(const Region& region, int N, double beta, F&& emit) {
    if (N < 8) throw validation_error("grid: N must be >= 8");
    if (!(beta >= 1.0)) throw validation_error("grid: beta must be >= 1");
    const DomainSpec& d = region.domain;
    const bool comp = region.kind == RegionKind::ComplementInSuper;
    switch (d.kind) {
        case DomainKind::Cusp2D:
            detail::cusp2d_cells(d.gamma, N, beta, comp, emit);
            return;
        case DomainKind::PickND:
            detail::pick_cells(d.n, d.gamma, N, beta, comp, emit);
            return;
        case DomainKind::RidgeND:
            detail::ridge_cells(d.n, d.gamma, N, beta, comp, emit);
            return;
        case DomainKind::Disc2D:
            if (comp) throw validation_error("grid: complement of the disc is not supported");
            detail::disc_cells(N, beta, emit);
            return;
        case DomainKind::BallND:
            if (comp) throw validation_error("grid: complement of the ball is not supported");
            detail::pick_cells(d.n, 0.0, N, beta, false, emit);  // full polar range
            return;
        case DomainKind::Square2D:
            if (comp) throw validation_error("grid: complement of the square is not supported");
            detail::square_cells(N, emit);
            return;
    }
    throw validation_error("grid: unsupported region");
}

inline CoordSystem grid_coord_system(const Region& region) {
    switch (region.domain.kind) {
        case DomainKind::Square2D: return CoordSystem::Cartesian2D;
        case DomainKind::Disc2D:
        case DomainKind::Cusp2D: return CoordSystem::Polar2D;
        case DomainKind::RidgeND:
            return region.domain.n == 3 ? CoordSystem::RidgeReduced : CoordSystem::RidgeReduced;
        default: return CoordSystem::SphericalReduced;
    }
}

/// Materializes the graded quadrature grid for a region.
inline GradedGrid graded_grid(const Region& region, int N, double beta) {
    GradedGrid g;
    g.coords = grid_coord_system(region);
    g.grading_beta = beta;
    g.N = N;
    for_each_cell(region, N, beta, [&](const PointND& node, double w) {
        g.nodes.push_back(node);
        g.weights.push_back(w);
    });
    return g;
}

/// Ball-pick special case: for picks in two dimensions the node layout is
/// planar polar, matching the planar cusp.
inline PointND node_to_cartesian(CoordSystem sys, const PointND& node) {
    switch (sys) {
        case CoordSystem::Cartesian2D: return node;
        case CoordSystem::Polar2D: {
            const double r = node[0], th = node[1];
            return PointND{r * std::cos(th), r * std::sin(th)};
        }
        case CoordSystem::SphericalReduced: {
            // (r, t1, ..., t_{n-1}) with polar angles t1..t_{n-2} and azimuth t_{n-1}.
            PointND p;
            p.n = node.n;
            const double r = node[0];
            double sinprod = 1.0;
            for (int i = 0; i < node.n - 1; ++i) {
                p[i] = r * sinprod * std::cos(node[i + 1]);
                sinprod *= std::sin(node[i + 1]);
            }
            p[node.n - 1] = r * sinprod;
            return p;
        }
        case CoordSystem::RidgeReduced: {
            PointND base;
            base.n = node.n - 1;
            for (int i = 0; i < base.n; ++i) base[i] = node[i];
            PointND cart = base.n == 2
                               ? node_to_cartesian(CoordSystem::Polar2D, base)
                               : node_to_cartesian(CoordSystem::SphericalReduced, base);
            PointND p = cart;
            p[p.n] = node[node.n - 1];
            p.n += 1;
            return p;
        }
    }
    return node;
}

}  // namespace cuspext::geometry
