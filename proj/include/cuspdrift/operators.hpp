#pragma once

// Pointwise differential operators on functions of z = x + i y:
// the pairing of one-forms, the deformation operators L1 and L2 for the
// one-form omega = Re(e^{i theta} f dz), and finite-difference derivatives.
//
//   <f1 dz + f2 dzbar, g1 dz + g2 dzbar> = 2 y^2 (f1 conj(g1) + f2 conj(g2))
//   delta(p dx + q dy) = -y^2 (p_x + q_y)
//   L1 h = 4 pi i <dh, omega> - 2 pi i delta(omega) h
//   L2 h = -8 pi^2 <omega, omega> h
//
// With g = e^{i theta} f: omega = (g dz + conj(g) dzbar)/2,
// <dh, omega> = y^2 (Re g h_x - Im g h_y), <omega, omega> = y^2 |g|^2 and
// delta(omega) = 0 by the Cauchy-Riemann equations.

#include <cmath>
#include <complex>
#include <functional>

#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"

namespace cuspdrift {

/// A one-form f1 dz + f2 dzbar at a point.
struct OneFormValue {
    cplx dz, dzbar;
};

struct FormPairing {
    /// <a, b> at height y.
    static cplx pair(const OneFormValue& a, const OneFormValue& b, double y) {
        return 2.0 * y * y * (a.dz * std::conj(b.dz) + a.dzbar * std::conj(b.dzbar));
    }

    /// p dx + q dy written as f1 dz + f2 dzbar.
    static OneFormValue from_dxdy(cplx p, cplx q) {
        // dx = (dz + dzbar)/2, dy = (dz - dzbar)/(2i)
        return {0.5 * (p - cplx(0, 1) * q), 0.5 * (p + cplx(0, 1) * q)};
    }

    /// delta(p dx + q dy) = -y^2 (p_x + q_y) from the two partial derivatives.
    static cplx codifferential(cplx p_x, cplx q_y, double y) { return -y * y * (p_x + q_y); }
};

/// omega = Re(e^{i theta} f dz) at z.
inline OneFormValue omega_at(const HolCuspForm& f, const OneFormChoice& choice, cplx z) {
    const cplx g = choice.phase() * eval_form(f, z);
    return {0.5 * g, 0.5 * std::conj(g)};
}

/// First partial derivatives of a function at z.
struct Gradient {
    cplx dx, dy;
};

/// Central differences of step h (second order).
template <class F>
Gradient central_gradient(F&& h_fn, cplx z, double h) {
    if (z.imag() - h <= 0.0)
        throw DomainError(detail::concat("finite-difference step ", h, " leaves the upper half-plane at ", z));
    return {(h_fn(z + h) - h_fn(z - h)) / (2.0 * h), (h_fn(z + cplx(0, h)) - h_fn(z - cplx(0, h))) / (2.0 * h)};
}

/// y^2 (d_xx + d_yy) h by the five-point stencil.
template <class F>
cplx laplacian_5pt(F&& h_fn, cplx z, double h) {
    if (z.imag() - h <= 0.0)
        throw DomainError(detail::concat("finite-difference step ", h, " leaves the upper half-plane at ", z));
    const cplx c = h_fn(z);
    const cplx lap = (h_fn(z + h) + h_fn(z - h) + h_fn(z + cplx(0, h)) + h_fn(z - cplx(0, h)) - 4.0 * c) / (h * h);
    return z.imag() * z.imag() * lap;
}

/// L1 h at z from the gradient of h.
inline cplx apply_L1_gradient(const Gradient& grad, const HolCuspForm& f, const OneFormChoice& choice, cplx z) {
    const cplx g = choice.phase() * eval_form(f, z);
    const double y = z.imag();
    // delta(omega) = 0 for holomorphic f, so only the <dh, omega> term remains.
    return cplx(0.0, 4.0 * kPi) * y * y * (g.real() * grad.dx - g.imag() * grad.dy);
}

template <class F>
cplx apply_L1(F&& h_fn, const HolCuspForm& f, const OneFormChoice& choice, cplx z, double step = 1e-4) {
    return apply_L1_gradient(central_gradient(h_fn, z, step), f, choice, z);
}

/// L2 h at z from the value h(z).
inline cplx apply_L2_value(cplx h_value, const HolCuspForm& f, const OneFormChoice& choice, cplx z) {
    const double y = z.imag();
    return -8.0 * kPi * kPi * y * y * std::norm(eval_form(f, z)) * h_value * std::norm(choice.phase());
}

template <class F>
cplx apply_L2(F&& h_fn, const HolCuspForm& f, const OneFormChoice& choice, cplx z) {
    return apply_L2_value(cplx(h_fn(z)), f, choice, z);
}

}  // namespace cuspdrift
