#pragma once

// One-dimensional quadrature used across the library: globally adaptive
// Gauss-Kronrod (7/15) for finite intervals, Gauss-Legendre rules for tensor
// meshes, and the periodic trapezoidal rule for closed contours.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

#include "cuspdrift/error.hpp"

namespace cuspdrift::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
    // Worst remaining subinterval when the rule gave up; equal to the input
    // interval on success.
    double worst_a = 0.0, worst_b = 0.0;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    kron *= h;
    gauss *= h;
    double err = magnitude(T(kron - gauss));
    // Standard QUADPACK-style rescaling of the raw difference.
    err = std::min(err, std::pow(200.0 * err, 1.5));
    return {a, b, kron, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b]. Stops when the summed error
/// estimate is below max(abs_tol, rel_tol*|I|). Throws NumericalError with the
/// worst subinterval if `max_segments` is exhausted.
template <class T, class F>
Result<T> adaptive(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                   int max_segments = 2000) {
    using Seg = detail::Segment<T>;
    std::priority_queue<Seg> heap;
    Result<T> out;
    out.worst_a = a;
    out.worst_b = b;
    if (a == b) return out;
    heap.push(detail::gk15<T>(f, a, b));
    out.evaluations = 15;
    T total = heap.top().value;
    double err = heap.top().error;
    int segments = 1;
    while (err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
        if (segments >= max_segments) {
            const Seg& worst = heap.top();
            throw NumericalError(cuspdrift::detail::concat(
                "adaptive quadrature did not converge on [", a, ", ", b, "]; worst subinterval [",
                worst.a, ", ", worst.b, "] error ", worst.error));
        }
        Seg s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        Seg l = detail::gk15<T>(f, s.a, mid);
        Seg r = detail::gk15<T>(f, mid, s.b);
        out.evaluations += 30;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++segments;
    }
    // Re-sum for a deterministic, drift-free total.
    std::vector<Seg> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    T sum{};
    double esum = 0.0;
    for (const auto& s : segs) {
        sum += s.value;
        esum += s.error;
    }
    out.value = sum;
    out.error = esum;
    return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes, weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) p0 = 1.0;
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    /// Integrate f over [a, b] with this rule.
    template <class T, class F>
    T integrate(F&& f, double a, double b) const {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        T acc{};
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += f(c + h * nodes[i]) * weights[i];
        return acc * h;
    }
};

/// Periodic trapezoidal rule on [0, 2pi), doubling the node count until two
/// successive estimates agree to `tol`. Geometric convergence for analytic
/// periodic integrands.
template <class F>
Result<std::complex<double>> periodic_trapezoid(F&& f, double tol, int n0 = 64,
                                                int n_max = 1 << 16) {
    using C = std::complex<double>;
    Result<C> out;
    out.worst_b = 2.0 * std::numbers::pi;
    int n = n0;
    C sum{};
    for (int k = 0; k < n; ++k) sum += f(2.0 * std::numbers::pi * k / n);
    C prev = sum * (2.0 * std::numbers::pi / n);
    out.evaluations = n;
    while (n < n_max) {
        C add{};
        for (int k = 0; k < n; ++k) add += f(2.0 * std::numbers::pi * (k + 0.5) / n);
        sum += add;
        n *= 2;
        out.evaluations += n / 2;
        const C cur = sum * (2.0 * std::numbers::pi / n);
        const double diff = std::abs(cur - prev);
        prev = cur;
        if (diff < tol && n >= 2 * n0) {
            out.value = cur;
            out.error = diff;
            return out;
        }
    }
    throw NumericalError("periodic trapezoidal rule did not converge");
}

}  // namespace cuspdrift::quad
