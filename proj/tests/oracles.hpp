#pragma once

// Test-only reference computations, kept independent of the library
// implementation paths they are used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace oracles {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// ---------------------------------------------------------------------------
// High-precision closed forms (long double, independent expression order).
// ---------------------------------------------------------------------------

inline long double cgamma_hp(long double gamma, long double p) {
    const long double pm1 = kPiL - 1.0L;
    const long double base = 1.0L + (gamma + 1.0L) * (gamma + 1.0L) * powl(kPiL, 4.0L) / powl(pm1, 4.0L) +
                             1.0L / (pm1 * pm1);
    return kPiL * powl(base, p / 2.0L);
}

/// K-scale closed-form bound: [ (2pi)^(1-a) C^a ((1-a)/(n(1-a)-a g))^(1-a) ]^(1/q).
inline long double kpq_bound_hp(long double gamma, long double p, long double q, int n) {
    const long double a = q / p;
    const long double inner = (1.0L - a) / (n * (1.0L - a) - a * gamma);
    const long double v = powl(2.0L * kPiL, 1.0L - a) * powl(cgamma_hp(gamma, p), a) *
                          powl(inner, 1.0L - a);
    return powl(v, 1.0L / q);
}

inline long double ext_norm_bound_hp(long double measure_tilde, long double k, long double p,
                                     long double q) {
    if (p == q) return powl(1.0L + powl(k, p), 1.0L / p);
    return powl(powl(measure_tilde, (p - q) / p) + powl(k, q), 1.0L / q);
}

inline long double ball_volume_hp(int n) {
    long double vprev = 2.0L, vcur = kPiL;
    if (n == 1) return vprev;
    for (int k = 3; k <= n; ++k) {
        const long double next = vprev * 2.0L * kPiL / k;
        vprev = vcur;
        vcur = next;
    }
    return vcur;
}

// ---------------------------------------------------------------------------
// Bessel functions by power series (adequate for |x| < 4) and the first
// positive zero of J1' via bisection on J1'(x) = J0(x) - J1(x)/x.
// ---------------------------------------------------------------------------

inline long double bessel_j0(long double x) {
    long double term = 1.0L, sum = 1.0L;
    const long double q = x * x / 4.0L;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        sum += term;
        if (fabsl(term) < 1e-30L * fabsl(sum)) break;
    }
    return sum;
}

inline long double bessel_j1(long double x) {
    long double term = x / 2.0L, sum = term;
    const long double q = x * x / 4.0L;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (static_cast<long double>(m) * (m + 1.0L));
        sum += term;
        if (fabsl(term) < 1e-30L * fabsl(sum)) break;
    }
    return sum;
}

inline long double bessel_j1_prime(long double x) { return bessel_j0(x) - bessel_j1(x) / x; }

/// First positive zero of J1'; (its square is the first nontrivial Neumann
/// eigenvalue of the unit disc).
inline double j1_prime_first_zero() {
    long double lo = 1.5L, hi = 2.2L;
    for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (lo + hi);
        if (bessel_j1_prime(mid) > 0.0L)
            lo = mid;
        else
            hi = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

// ---------------------------------------------------------------------------
// Monte-Carlo area of a planar membership predicate inside [-1,1]^2.
// ---------------------------------------------------------------------------

template <class Pred>
double mc_area(Pred&& inside, std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
        const double x = 2.0 * u01() - 1.0;
        const double y = 2.0 * u01() - 1.0;
        if (inside(x, y)) ++hits;
    }
    return 4.0 * static_cast<double>(hits) / samples;
}

// ---------------------------------------------------------------------------
// Central finite differences of a planar map (r,s) -> (R,S).
// ---------------------------------------------------------------------------

template <class MapFn>
std::array<double, 4> fd_differential(MapFn&& f, double r, double s, double h) {
    const auto rp = f(r + h, s), rm = f(r - h, s);
    const auto sp = f(r, s + h), sm = f(r, s - h);
    return {(rp.first - rm.first) / (2 * h), (sp.first - sm.first) / (2 * h),
            (rp.second - rm.second) / (2 * h), (sp.second - sm.second) / (2 * h)};
}

}  // namespace oracles
