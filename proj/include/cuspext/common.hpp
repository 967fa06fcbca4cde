#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cuspext {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr int kMaxDim = 6;

/// Thrown when a value fails an interface precondition (bad exponent,
/// malformed domain spec, dimension mismatch).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation cannot produce a meaningful result
/// (divergent integral where convergence was required, descent stall).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-capacity point, used both for Euclidean points and for
/// grid nodes in native (polar/spherical) coordinates.
struct PointND {
    std::array<double, kMaxDim> c{};
    int n = 0;

    PointND() = default;
    PointND(std::initializer_list<double> vals) {
        n = static_cast<int>(vals.size());
        if (n > kMaxDim) throw validation_error("PointND: dimension exceeds capacity");
        std::copy(vals.begin(), vals.end(), c.begin());
    }
    static PointND from_span(std::span<const double> v) {
        PointND p;
        p.n = static_cast<int>(v.size());
        if (p.n > kMaxDim) throw validation_error("PointND: dimension exceeds capacity");
        std::copy(v.begin(), v.end(), p.c.begin());
        return p;
    }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    std::span<const double> span() const { return {c.data(), static_cast<std::size_t>(n)}; }
};

inline double norm2(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// Small dense square matrix (n <= kMaxDim), row major.
struct Mat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    static Mat zero(int n) {
        Mat m;
        m.n = n;
        return m;
    }
    static Mat identity(int n) {
        Mat m = zero(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
    double& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

/// Determinant by LU with partial pivoting; fine for the tiny
/// differentials handled here.
inline double determinant(const Mat& m) {
    const int n = m.n;
    Mat lu = m;
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(lu.at(i, k)) > std::abs(lu.at(piv, k))) piv = i;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(lu.at(k, j), lu.at(piv, j));
            det = -det;
        }
        const double pivot = lu.at(k, k);
        if (pivot == 0.0) return 0.0;
        det *= pivot;
        for (int i = k + 1; i < n; ++i) {
            const double f = lu.at(i, k) / pivot;
            for (int j = k + 1; j < n; ++j) lu.at(i, j) -= f * lu.at(k, j);
        }
    }
    return det;
}

/// Spectral norm of a 2x2 matrix, closed form via the eigenvalues of A^T A.
inline double spectral_norm_2x2(double a, double b, double c, double d) {
    const double t = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    return std::sqrt(0.5 * (t + disc));
}

/// Spectral norm (largest singular value). Closed form up to 2x2,
/// power iteration on A^T A above that.
inline double spectral_norm(const Mat& m) {
    if (m.n == 1) return std::abs(m.at(0, 0));
    if (m.n == 2) return spectral_norm_2x2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1));
    const int n = m.n;
    // G = A^T A
    Mat g = Mat::zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += m.at(k, i) * m.at(k, j);
            g.at(i, j) = s;
        }
    std::array<double, kMaxDim> v{};
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(double(n));
    double lambda = 0;
    for (int it = 0; it < 500; ++it) {
        std::array<double, kMaxDim> w{};
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += g.at(i, j) * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = s;
        }
        double nw = 0;
        for (int i = 0; i < n; ++i) nw += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        double next = nw;
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / nw;
        if (it > 3 && std::abs(next - lambda) <= 1e-15 * std::max(1.0, next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

/// Volume of the unit ball in R^n via the exact two-step recurrence.
inline double unit_ball_volume(int n) {
    if (n < 1) throw validation_error("unit_ball_volume: n must be >= 1");
    double vprev = 2.0;      // n = 1
    double vcur = kPi;       // n = 2
    if (n == 1) return vprev;
    for (int k = 3; k <= n; ++k) {
        const double next = vprev * 2.0 * kPi / k;
        vprev = vcur;
        vcur = next;
    }
    return vcur;
}

/// Surface measure of the unit sphere S^m in R^{m+1}.
inline double unit_sphere_area(int m) {
    return (m + 1) * unit_ball_volume(m + 1);
}

// ---------------------------------------------------------------------------
// Deterministic parallel reduction.
//
// Sums f(0) + ... + f(count-1) by fixed-size blocks; block sums are combined
// sequentially in block order, so the result is independent of the number of
// worker threads.
// ---------------------------------------------------------------------------

namespace detail {
inline int& thread_override() {
    static int v = 0;
    return v;
}
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_override() = n; }

inline int effective_threads() {
    if (detail::thread_override() > 0) return detail::thread_override();
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class F>
double blocked_sum(std::size_t count, F&& f) {
    constexpr std::size_t kBlock = 16384;
    const std::size_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    const int nthreads = std::min<int>(effective_threads(), static_cast<int>(std::max<std::size_t>(1, nblocks)));
    auto worker = [&](int t) {
        for (std::size_t b = static_cast<std::size_t>(t); b < nblocks; b += static_cast<std::size_t>(nthreads)) {
            const std::size_t lo = b * kBlock;
            const std::size_t hi = std::min(count, lo + kBlock);
            double s = 0;
            for (std::size_t i = lo; i < hi; ++i) s += f(i);
            partial[b] = s;
        }
    };
    if (nthreads <= 1 || nblocks <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    double total = 0;
    for (double s : partial) total += s;
    return total;
}

/// Deterministic uniform double in [0,1) from a 64-bit generator state.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace cuspext
