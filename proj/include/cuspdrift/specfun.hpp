#pragma once

// Complex Gamma, digamma, Riemann/Hurwitz zeta (Euler-Maclaurin with tail
// bound) and the Macdonald-Bessel function K_nu(y) for complex order.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "cuspdrift/error.hpp"

namespace cuspdrift::specfun {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline void check_gamma_pole(cplx s) {
    if (s.real() <= 0.5 && std::abs(s.imag()) < 1e-14) {
        const double r = std::round(s.real());
        if (r <= 0.0 && std::abs(s.real() - r) < 1e-14)
            throw PoleError(cuspdrift::detail::concat("Gamma has a pole at s = ", r), cplx(r, 0.0));
    }
}

inline cplx lgamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// B_{2k} / (2k)! for k = 1..kMaxBernoulli, from B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2pi)^{2k}.
inline constexpr int kMaxBernoulli = 30;

inline const std::array<double, kMaxBernoulli + 1>& bernoulli_ratios() {
    static const std::array<double, kMaxBernoulli + 1> table = [] {
        std::array<double, kMaxBernoulli + 1> t{};
        for (int k = 1; k <= kMaxBernoulli; ++k) {
            double z2k;
            if (k == 1) {
                z2k = pi * pi / 6.0;
            } else if (k == 2) {
                z2k = std::pow(pi, 4) / 90.0;
            } else {
                z2k = 0.0;
                for (int n = 2000; n >= 1; --n) z2k += std::pow(double(n), -2.0 * k);
            }
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            t[k] = sign * 2.0 * z2k / std::pow(2.0 * pi, 2.0 * k);
        }
        return t;
    }();
    return table;
}

/// First-order jet: value and derivative with respect to s.
struct Dual {
    cplx v, d;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
inline Dual operator*(Dual a, cplx c) { return {a.v * c, a.d * c}; }
// x^(-w) for real x > 0.
inline Dual pow_neg(double x, Dual w) {
    const double lx = std::log(x);
    const cplx e = std::exp(-w.v * lx);
    return {e, -lx * w.d * e};
}

}  // namespace detail

/// log Gamma(s); the branch is continuous on Re s >= 1/2 but not the
/// principal one elsewhere. Use for exp() and differences only.
inline cplx log_gamma(cplx s) {
    detail::check_gamma_pole(s);
    if (s.real() >= 0.5) return detail::lgamma_right(s);
    // Gamma(s) = pi / (sin(pi s) Gamma(1-s))
    return std::log(pi) - std::log(std::sin(pi * s)) - detail::lgamma_right(1.0 - s);
}

/// Gamma(s) for complex s, relative accuracy about 1e-15.
inline cplx gamma_complex(cplx s) {
    detail::check_gamma_pole(s);
    if (s.real() >= 0.5) return std::exp(detail::lgamma_right(s));
    return pi / (std::sin(pi * s) * std::exp(detail::lgamma_right(1.0 - s)));
}

/// Digamma psi(s) = Gamma'(s)/Gamma(s).
inline cplx digamma(cplx s) {
    detail::check_gamma_pole(s);
    if (s.real() < 0.5) return digamma(1.0 - s) - pi / std::tan(pi * s);
    cplx shift = 0.0;
    while (std::abs(s) < 15.0) {
        shift -= 1.0 / s;
        s += 1.0;
    }
    const auto& b = detail::bernoulli_ratios();
    const cplx inv2 = 1.0 / (s * s);
    cplx acc = std::log(s) - 0.5 / s;
    cplx p = inv2;
    double fact = 1.0;  // (2k-1)! accumulated so that B_{2k}/(2k) = b[k] * (2k-1)!
    for (int k = 1; k <= 12; ++k) {
        if (k > 1) fact *= (2.0 * k - 2.0) * (2.0 * k - 1.0);
        acc -= b[k] * fact * p;
        p *= inv2;
    }
    return acc + shift;
}

/// Value, s-derivative and remainder bound of an Euler-Maclaurin evaluation.
struct ZetaValue {
    cplx value;
    cplx derivative;
    double error;
};

/// Hurwitz zeta(s, a) = sum_{n>=0} (n+a)^{-s} for real a > 0 together with its
/// s-derivative, by Euler-Maclaurin summation. The reported error bounds the
/// first omitted correction term and is kept below tol.
inline ZetaValue hurwitz_zeta_ex(cplx s, double a, double tol = 1e-16) {
    using detail::Dual;
    if (!(a > 0.0)) throw DomainError("hurwitz_zeta requires a > 0");
    if (std::abs(s - 1.0) < 1e-14) throw PoleError("zeta has a pole at s = 1", cplx(1.0, 0.0));
    const auto& b = detail::bernoulli_ratios();
    const Dual sd{s, 1.0};
    // Shift point so the asymptotic corrections decay geometrically.
    const double x0 = std::max(12.0, 0.5 * std::abs(s) + 12.0);
    const int N = std::max(0, int(std::ceil(x0 - a)));
    const double xN = N + a;

    Dual sum{0.0, 0.0};
    for (int n = N - 1; n >= 0; --n) sum = sum + detail::pow_neg(n + a, sd);

    const Dual xpow = detail::pow_neg(xN, sd);  // xN^{-s}
    const Dual one{1.0, 0.0};
    // xN^{1-s}/(s-1)
    sum = sum + (xpow * xN) / (sd - one);
    sum = sum + xpow * 0.5;
    // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * xN^{-s-2k+1}
    Dual rising = sd;            // s (s+1) ... (s+2k-2)
    Dual pw = xpow * (1.0 / xN);  // xN^{-s-1}
    const double inv2 = 1.0 / (xN * xN);
    double last = 0.0;
    bool converged = false;
    for (int k = 1; k <= detail::kMaxBernoulli; ++k) {
        const Dual term = rising * pw * b[k];
        sum = sum + term;
        last = std::abs(term.v) + std::abs(term.d);
        const double scale = std::abs(sum.v) + std::abs(sum.d);
        if (last < tol * std::max(scale, 1e-300)) {
            converged = true;
            break;
        }
        rising = rising * (sd + Dual{2.0 * k - 1.0, 0.0}) * (sd + Dual{2.0 * k, 0.0});
        pw = pw * inv2;
    }
    if (!converged && last > 1e-12 * (std::abs(sum.v) + 1.0))
        throw NumericalError("Euler-Maclaurin corrections for zeta did not converge");
    return {sum.v, sum.d, last};
}

inline cplx hurwitz_zeta(cplx s, double a) { return hurwitz_zeta_ex(s, a).value; }

/// Riemann zeta(s), s != 1.
inline cplx zeta(cplx s) { return hurwitz_zeta_ex(s, 1.0).value; }

/// zeta'(s)/zeta(s).
inline cplx zeta_logderiv(cplx s) {
    const ZetaValue z = hurwitz_zeta_ex(s, 1.0);
    if (z.value == 0.0) throw PoleError("zeta'/zeta has a pole at a zero of zeta", s);
    return z.derivative / z.value;
}

/// Result of a K-Bessel evaluation.
struct BesselKValue {
    cplx value;
    double error = 0.0;
    bool underflow = false;
};

/// K_nu(y) for complex order nu and y > 0 from
///   K_nu(y) = int_0^inf exp(-y cosh t) cosh(nu t) dt,
/// summed with the trapezoidal rule (exponentially convergent, the integrand
/// decays doubly exponentially). Step halving until two estimates agree.
inline BesselKValue bessel_k_ex(cplx nu, double y, double abs_tol = 0.0) {
    if (!(y > 0.0)) throw DomainError("bessel_k requires y > 0");
    BesselKValue out;
    const double re_nu = std::abs(nu.real());
    // exp(-y) underflows: report an exact zero.
    if (y - re_nu * std::log(2.0 * std::max(y, 1.0)) > 740.0) {
        out.value = 0.0;
        out.underflow = true;
        return out;
    }
    // e^{-y} is factored out and cosh t - 1 = 2 sinh^2(t/2) keeps the
    // exponent accurate; -y cosh t itself carries a rounding error of size y * eps.
    auto f = [&](double t) {
        const double sh = std::sinh(0.5 * t);
        const double base = -2.0 * y * sh * sh;
        return 0.5 * (std::exp(base + nu * t) + std::exp(base - nu * t));
    };
    const double outer = std::exp(-y);
    // Truncation point: exponent -y cosh t + |Re nu| t well below the peak.
    double t_peak = re_nu > 0.0 ? std::asinh(re_nu / y) : 0.0;
    const double peak = -y * (std::cosh(t_peak) - 1.0) + re_nu * t_peak;
    double t_max = t_peak + 1.0;
    while (-y * (std::cosh(t_max) - 1.0) + re_nu * t_max > peak - 50.0) t_max += 0.5;

    double h = 0.25;
    cplx sum = 0.5 * f(0.0);
    double scale = 0.5 * std::abs(sum);
    for (int k = 1; k * h <= t_max; ++k) {
        const cplx v = f(k * h);
        sum += v;
        scale += std::abs(v);
    }
    cplx prev = sum * h;
    for (int level = 0; level < 14; ++level) {
        cplx add = 0.0;
        double add_scale = 0.0;
        for (int k = 0; (k + 0.5) * h <= t_max; ++k) {
            const cplx v = f((k + 0.5) * h);
            add += v;
            add_scale += std::abs(v);
        }
        sum += add;
        scale += add_scale;
        h *= 0.5;
        const cplx cur = sum * h;
        const double diff = std::abs(cur - prev);
        prev = cur;
        // Summation rounding over a few hundred nodes.
        const double floor = 2e-15 * scale * h;
        if (level >= 1 && (diff <= floor || diff * outer <= abs_tol)) {
            out.value = cur * outer;
            out.error = std::max(diff, floor) * outer;
            if (nu.real() == 0.0) out.value = cplx(out.value.real(), 0.0);
            return out;
        }
    }
    throw NumericalError(cuspdrift::detail::concat("bessel_k did not converge for nu = ", nu,
                                                   ", y = ", y));
}

inline cplx bessel_k(cplx nu, double y) { return bessel_k_ex(nu, y).value; }

}  // namespace cuspdrift::specfun
