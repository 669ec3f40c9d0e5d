#pragma once

// eps-derivatives of the scattering coefficient at the cusp infinity of
// Gamma_0(p), two ways:
//   quadrature:  phi^(n)(s) = (1/(2s-1)) int E(z,s) [n L1 D^{n-1} + C(n,2) L2 D^{n-2}] dmu
//   zero mode:   phi(s, eps) from int_0^1 E(x+iy, s, chi_eps) dx = y^s + phi(s, eps) y^{1-s}
//                at two heights, then a central difference in eps.

#include <cmath>
#include <complex>
#include <functional>
#include <type_traits>
#include <vector>

#include "cuspdrift/eisenstein.hpp"
#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"
#include "cuspdrift/operators.hpp"
#include "cuspdrift/quadrature.hpp"

namespace cuspdrift {

/// Gamma_0(p) \ H as F together with S T^k F, k = 0..p-1. The copies reach
/// the cusp 0 (width p), so they are cut at height p Y instead of Y.
struct Gamma0Domain {
    double Y = 4.0;
    int panels_x = 2;
    int panels_low = 3;   // on [arc, Y]
    int panels_high = 6;  // on [Y, p Y], geometric
    int order = 10;

    void validate() const {
        if (!(Y >= 2.0)) throw DomainError("truncation height Y must be >= 2");
        if (panels_x < 1 || panels_low < 1 || panels_high < 1 || order < 2)
            throw DomainError("mesh parameters must be positive");
    }
};

namespace detail {

// A value together with its modulus, so one pass integrates both.
struct ValueAbs {
    cplx v;
    double a = 0.0;
    ValueAbs() = default;
    ValueAbs(cplx x) : v(x), a(std::abs(x)) {}
    ValueAbs& operator+=(const ValueAbs& o) {
        v += o.v;
        a += o.a;
        return *this;
    }
    friend ValueAbs operator*(ValueAbs x, double w) {
        x.v *= w;
        x.a *= std::abs(w);
        return x;
    }
    friend ValueAbs operator/(ValueAbs x, double w) { return x * (1.0 / w); }
};
inline double modulus(cplx x) { return std::abs(x); }
inline double modulus(const ValueAbs& x) { return std::abs(x.v); }

template <class H, class T = std::decay_t<std::invoke_result_t<H&, cplx>>>
T integrate_copy(H&& h, const GroupElement& sigma, const Gamma0Domain& dom, double y_from, double y_to,
                 int panels, bool geometric) {
    const quad::GaussLegendre gl(dom.order);
    T total{};
    const double wx = 1.0 / dom.panels_x;
    for (int px = 0; px < dom.panels_x; ++px) {
        const double x0 = -0.5 + px * wx;
        total += gl.integrate<T>(
            [&](double x) {
                const double lo = std::max(std::sqrt(1.0 - x * x), y_from);
                if (lo >= y_to) return T{};
                T col{};
                for (int k = 0; k < panels; ++k) {
                    const double a = geometric ? lo * std::pow(y_to / lo, double(k) / panels)
                                               : lo + (y_to - lo) * k / panels;
                    const double b = geometric ? lo * std::pow(y_to / lo, double(k + 1) / panels)
                                               : lo + (y_to - lo) * (k + 1) / panels;
                    col += gl.integrate<T>([&](double y) { return T(h(sigma.apply(cplx(x, y)))) / (y * y); }, a, b);
                }
                return col;
            },
            x0, x0 + wx);
    }
    return total;
}

}  // namespace detail

template <class T>
struct DomainIntegral {
    T value{};
    double truncation_error = 0.0;  // size of the next strip above the cut
};

/// int_{Gamma_0(p) \ H} h dmu for a Gamma_0(p)-invariant h decaying at both cusps.
template <class H, class T = std::decay_t<std::invoke_result_t<H&, cplx>>>
DomainIntegral<T> integrate_gamma0p(H&& h, int p, const Gamma0Domain& dom = {}) {
    dom.validate();
    if (p != 1 && !detail::is_prime(p)) throw CapabilityError("integrate_gamma0p supports level 1 or prime");
    DomainIntegral<T> out;
    const GroupElement id = GroupElement::identity();
    out.value += detail::integrate_copy(h, id, dom, 0.0, dom.Y, dom.panels_low, false);
    double strip = detail::modulus(detail::integrate_copy(h, id, dom, dom.Y, dom.Y + 2.0, 2, false));
    if (p > 1) {
        for (int k = 0; k < p; ++k) {
            const GroupElement sigma = GroupElement::inversion() * GroupElement::translation(k);
            out.value += detail::integrate_copy(h, sigma, dom, 0.0, dom.Y, dom.panels_low, false);
            out.value += detail::integrate_copy(h, sigma, dom, dom.Y, p * dom.Y, dom.panels_high, true);
            strip += detail::modulus(detail::integrate_copy(h, sigma, dom, p * dom.Y, p * (dom.Y + 2.0), 2, false));
        }
    }
    out.truncation_error = strip;
    return out;
}

struct PhiNResult {
    cplx value;
    double scale = 0.0;  // (1/|2s-1|) int |integrand| dmu
    double truncation_error = 0.0;
};

using PointFunction = std::function<cplx(cplx)>;

/// phi^(n)(s) by quadrature. D[k] evaluates D^k(., s) for k < n (D[0] = E).
inline PhiNResult phi_n_quadrature(const PointFunction& E, const std::vector<PointFunction>& D, const HolCuspForm& f,
                                   const OneFormChoice& choice, cplx s, int n, const Gamma0Domain& dom = {}) {
    if (std::abs(s - 0.5) < 1e-12) throw DomainError("phi_n_quadrature: 1/(2s-1) is singular at s = 1/2");
    if (n < 0) throw DomainError("phi_n_quadrature needs n >= 0");
    PhiNResult out;
    if (n == 0) return out;
    if (int(D.size()) < n) throw DomainError(detail::concat("phi_n_quadrature needs D^0..D^", n - 1));
    auto integrand = [&](cplx w) {
        const double step = 1e-3 * w.imag();
        cplx acc = double(n) * apply_L1(D[std::size_t(n - 1)], f, choice, w, step);
        if (n >= 2) acc += 0.5 * n * (n - 1) * apply_L2(D[std::size_t(n - 2)], f, choice, w);
        return detail::ValueAbs(E(w) * acc);
    };
    const cplx pref = 1.0 / (2.0 * s - 1.0);
    const auto I = integrate_gamma0p(integrand, f.level, dom);
    out.value = pref * I.value.v;
    out.scale = std::abs(pref) * I.value.a;
    out.truncation_error = std::abs(pref) * I.truncation_error;
    return out;
}

/// (A, phi) from a(y) = A y^s + phi y^{1-s} at two heights.
struct ZeroModeFit {
    cplx leading;  // A, 1 for the cusp at infinity
    cplx phi;
    double tail = 0.0;
};

template <class Evaluator>
ZeroModeFit scattering_from_zero_mode(Evaluator&& E, cplx s, double y1, double y2, int points = 32) {
    if (!(y1 > 0.0 && y2 > 0.0) || y1 == y2) throw DomainError("two distinct positive heights required");
    const EisensteinValue a1 = zero_mode(E, y1, points), a2 = zero_mode(E, y2, points);
    const cplx p1 = detail::cpow_real(y1, s), q1 = detail::cpow_real(y1, 1.0 - s);
    const cplx p2 = detail::cpow_real(y2, s), q2 = detail::cpow_real(y2, 1.0 - s);
    const cplx det = p1 * q2 - p2 * q1;
    ZeroModeFit out;
    out.leading = (a1.value * q2 - a2.value * q1) / det;
    out.phi = (p1 * a2.value - p2 * a1.value) / det;
    out.tail = (std::abs(p1) + std::abs(p2)) * (a1.tail_estimate + a2.tail_estimate) / std::abs(det);
    return out;
}

struct PhiDerivativeFD {
    cplx value;
    double error = 0.0;  // propagated tails / (2 eps)
    cplx phi_plus, phi_minus;
};

/// d phi(s, eps)/d eps at 0 by (phi(h) - phi(-h)) / (2h), coset-sum route.
inline PhiDerivativeFD phi1_finite_difference(const CosetSymbols& tab, cplx s, double h, double y1, double y2,
                                              const EisensteinConfig& cfg = {}) {
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    auto fit = [&](double eps) {
        auto E = [&](cplx z) { return eisenstein_coset_sum(z, s, tab, eps, cfg); };
        return scattering_from_zero_mode(E, s, y1, y2);
    };
    const ZeroModeFit a = fit(h), b = fit(-h);
    return {(a.phi - b.phi) / (2.0 * h), (a.tail + b.tail) / (2.0 * h), a.phi, b.phi};
}

}  // namespace cuspdrift
