#pragma once

// First-order deformation functionals: the coupling <L1 u, E(., 1/2 + i t)>
// by quadrature over the standard fundamental domain, the unfolded
// Dirichlet series L(u x f, s) and L(u x F^2, s), the second-order shift
// and the scan over omega(theta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "cuspdrift/eisenstein.hpp"
#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"
#include "cuspdrift/operators.hpp"
#include "cuspdrift/quadrature.hpp"

namespace cuspdrift {

struct DirichletSeriesValue {
    cplx s;
    cplx value;
    int terms_used = 0;
    double tail_estimate = 0.0;
};

/// Tensor Gauss-Legendre mesh on {|x| <= 1/2, |z| >= 1, y <= Y}.
struct QuadratureDomain {
    double Y = 3.0;
    int panels_x = 4;
    int panels_y = 6;
    int order = 12;

    void validate() const {
        if (!(Y >= 2.0)) throw DomainError("truncation height Y must be >= 2");
        if (panels_x < 1 || panels_y < 1 || order < 2) throw DomainError("mesh parameters must be positive");
    }
};

namespace detail {

/// int over the truncated level-1 fundamental domain of h(z) dmu, y from
/// y_lo(x) = sqrt(1 - x^2) (or `y_floor` if larger) to `y_top`.
template <class H>
cplx integrate_standard_domain(H&& h, const QuadratureDomain& dom, double y_floor, double y_top) {
    const quad::GaussLegendre gl(dom.order);
    cplx total = 0.0;
    const double wx = 1.0 / dom.panels_x;
    for (int px = 0; px < dom.panels_x; ++px) {
        const double x0 = -0.5 + px * wx;
        total += gl.integrate<cplx>(
            [&](double x) {
                const double lo = std::max(std::sqrt(1.0 - x * x), y_floor);
                if (lo >= y_top) return cplx(0.0);
                const double wy = (y_top - lo) / dom.panels_y;
                cplx col = 0.0;
                for (int py = 0; py < dom.panels_y; ++py)
                    col += gl.integrate<cplx>(
                        [&](double y) { return h(cplx(x, y)) / (y * y); }, lo + py * wy, lo + (py + 1) * wy);
                return col;
            },
            x0, x0 + wx);
    }
    return total;
}

// Terms of a Maass expansion needed at height y: K_{ir}(2 pi n y) is below
// e^{-60} relative to the leading mode from there on.
inline int maass_terms_at(const MaassForm& u, double y) {
    const int need = int(std::ceil(60.0 / (2.0 * kPi * y))) + 2;
    return std::min<int>(need, int(u.b.size()));
}

// int_L^inf (log x + 1)^k x^{-sigma} dx in closed form (sigma > 1).
inline double log_power_tail(int k, double L, double sigma) {
    // x = e^{v - 1}: (log x + 1)^k x^{-sigma} dx = v^k e^{(1 - sigma)(v - 1)} dv.
    const double a = sigma - 1.0, v0 = std::log(L) + 1.0;
    // int_{v0}^inf v^k e^{-a v} dv = e^{-a v0} sum_j k!/(k-j)! v0^{k-j} / a^{j+1}
    double acc = 0.0, fall = 1.0;
    for (int j = 0; j <= k; ++j) {
        acc += fall * std::pow(v0, k - j) / std::pow(a, j + 1);
        fall *= double(k - j);
    }
    return std::exp(a) * std::exp(-a * v0) * acc;
}

// sum_{n > M} d(n)^p (log n + 1)^q n^{-sigma}: exact to 64 M, then the
// envelope d(n) <~ log n + 1 under the integral.
inline double divisor_tail(int M, double sigma, int p, int q) {
    const int L = 64 * std::max(M, 1);
    std::vector<std::uint16_t> d(std::size_t(L) + 1, 0);
    for (int k = 1; k <= L; ++k)
        for (int n = k; n <= L; n += k) ++d[std::size_t(n)];
    double acc = 0.0;
    for (int n = M + 1; n <= L; ++n)
        acc += std::pow(double(d[std::size_t(n)]), p) * std::pow(std::log(double(n)) + 1.0, q) *
               std::pow(double(n), -sigma);
    return acc + log_power_tail(p + q, double(L), sigma);
}

inline void check_series_args(const MaassForm& u, const HolCuspForm& f, cplx s, int terms) {
    if (!(s.real() > 1.0)) throw DomainError(concat("Dirichlet series needs Re s > 1, got ", s));
    if (terms < 1) throw DomainError("term count must be >= 1");
    if (std::size_t(terms) > u.b.size() || std::size_t(terms) > f.size())
        throw NumericalError(concat(terms, " terms requested; need ", terms, " coefficients of both forms, have ",
                                    u.b.size(), " (Maass) and ", f.size(), " (holomorphic)"));
}

}  // namespace detail

/// <L1 u, E(., 1/2 + i r)> over the fundamental domain, with the size of the
/// discarded cusp strip as error estimate.
struct FermiInner {
    cplx value;
    double truncation_error = 0.0;
};

inline FermiInner fermi_inner_quadrature(const MaassForm& u, const HolCuspForm& f, const OneFormChoice& choice,
                                         const QuadratureDomain& dom = {}) {
    dom.validate();
    if (u.level != f.level)
        throw DomainError(detail::concat("Maass form level ", u.level, " differs from form level ", f.level));
    if (u.level != 1)
        throw CapabilityError(detail::concat(
            "quadrature route needs E(., 1/2 + it) on the critical line, available at level 1 only (level ",
            u.level, "); use the unfolded series route (rankin_selberg)"));
    const cplx s = u.s();
    EisensteinConfig ec;
    ec.tol = 1e-12;
    auto integrand = [&](cplx z) {
        const int M = detail::maass_terms_at(u, z.imag() - 1e-4);
        auto uf = [&](cplx w) { return eval_maass(u, w, M); };
        const cplx l1 = apply_L1(uf, f, choice, z, 1e-4);
        return l1 * std::conj(eisenstein_fourier(z, s, ec).value);
    };
    FermiInner out;
    out.value = detail::integrate_standard_domain(integrand, dom, 0.0, dom.Y);
    // Both u and f decay like e^{-2 pi y}; the strip [Y, Y + 2] bounds the rest.
    QuadratureDomain strip = dom;
    strip.panels_y = 2;
    out.truncation_error = std::abs(detail::integrate_standard_domain(integrand, strip, dom.Y, dom.Y + 2.0));
    return out;
}

/// L(u x f, s) = sum a_n b_{-n} n^{-(s+1/2)}. Tail from |a_n| <= |a_1| d(n) sqrt(n)
/// and |b_n| <= |b_1| d(n).
inline DirichletSeriesValue rankin_selberg(const MaassForm& u, const HolCuspForm& f, cplx s, int terms) {
    detail::check_series_args(u, f, s, terms);
    DirichletSeriesValue out;
    out.s = s;
    out.terms_used = terms;
    for (int n = 1; n <= terms; ++n) {
        const double b = u.coeff(-n);
        if (b == 0.0) continue;
        out.value += f.coeff(std::size_t(n)) * b * detail::cpow_real(double(n), -(s + 0.5));
    }
    const double A = std::max(1.0, std::abs(f.coeff(1))), B = std::max(1.0, std::abs(u.coeff(1)));
    bool zero = std::all_of(u.b.begin(), u.b.end(), [](double v) { return v == 0.0; });
    out.tail_estimate = zero ? 0.0 : A * B * detail::divisor_tail(terms, s.real(), 2, 0);
    return out;
}

/// Convolution coefficients c_n = sum_{k1 + k2 = n} (a_{k1}/k1)(a_{k2}/k2), n = 0..M (c_0 = c_1 = 0).
inline std::vector<cplx> square_antiderivative_coeffs(const HolCuspForm& f, int M) {
    std::vector<cplx> c(std::size_t(M) + 1, 0.0);
    for (int n = 2; n <= M; ++n) {
        cplx acc = 0.0;
        for (int k = 1; k < n; ++k) acc += (f.coeff(std::size_t(k)) / double(k)) * (f.coeff(std::size_t(n - k)) / double(n - k));
        c[std::size_t(n)] = acc;
    }
    return c;
}

/// L(u x F^2, s) = sum_n c_n b_{-n} n^{-(s-1/2)}. The tail models
/// |c_n| <= K (log n + 1) / sqrt(n) with K fitted over n <= terms.
inline DirichletSeriesValue L_uF2(const MaassForm& u, const HolCuspForm& f, cplx s, int terms) {
    detail::check_series_args(u, f, s, terms);
    const auto c = square_antiderivative_coeffs(f, terms);
    DirichletSeriesValue out;
    out.s = s;
    out.terms_used = terms;
    double K = 0.0;
    for (int n = 2; n <= terms; ++n) {
        const cplx cn = c[std::size_t(n)];
        K = std::max(K, std::abs(cn) * std::sqrt(double(n)) / (std::log(double(n)) + 1.0));
        const double b = u.coeff(-n);
        if (b == 0.0) continue;
        out.value += cn * b * detail::cpow_real(double(n), -(s - 0.5));
    }
    const double B = std::max(1.0, std::abs(u.coeff(1)));
    bool zero = std::all_of(u.b.begin(), u.b.end(), [](double v) { return v == 0.0; });
    out.tail_estimate = zero ? 0.0 : K * B * detail::divisor_tail(terms, s.real(), 1, 1);
    return out;
}

/// Re s_j^(2)(0) = -(1/(4 t^2)) sum_k |<L1 u_{j,k}, E(., 1/2 + i t)>|^2.
inline double fermi_shift(const std::vector<cplx>& inner_values, double t, int m) {
    if (!(t > 0.0)) throw DomainError(detail::concat("fermi_shift needs t_j > 0, got ", t));
    if (m != int(inner_values.size()))
        throw DomainError(detail::concat("multiplicity ", m, " but ", inner_values.size(), " inner values"));
    double acc = 0.0;
    for (const cplx& v : inner_values) acc += std::norm(v);
    return -acc / (4.0 * t * t);
}

struct DirectionSample {
    double theta = 0.0;
    cplx value;
    bool zero = false;
};

struct DirectionScan {
    std::vector<DirectionSample> samples;
    int sign_changes = 0;  // of Re(conj(v_max) v) around the closed grid
};

using FirstOrderFunctional = std::function<cplx(const OneFormChoice&)>;

/// The coupling of `u` to E through the quadrature route.
inline FirstOrderFunctional quadrature_functional(const MaassForm& u, const HolCuspForm& f,
                                                  const QuadratureDomain& dom = {}) {
    return [u, f, dom](const OneFormChoice& ch) { return fermi_inner_quadrature(u, f, ch, dom).value; };
}

/// Series route: omega = (g dz + conj(g dz))/2 with g = e^{i theta} f pairs to
/// (e^{i theta} L(u x f, s) + e^{-i theta} conj(L(u x f, conj s)))/2.
inline FirstOrderFunctional series_functional(const MaassForm& u, const HolCuspForm& f, cplx s, int terms) {
    return [u, f, s, terms](const OneFormChoice& ch) {
        const cplx L = rankin_selberg(u, f, s, terms).value;
        const cplx Lc = std::conj(rankin_selberg(u, f, std::conj(s), terms).value);
        return 0.5 * (ch.phase() * L + std::conj(ch.phase()) * Lc);
    };
}

inline DirectionScan direction_scan(const FirstOrderFunctional& F, const std::vector<double>& thetas,
                                    double zero_tol = 1e-12) {
    if (thetas.empty()) throw DomainError("direction_scan needs a nonempty grid");
    DirectionScan out;
    double vmax = 0.0;
    cplx ref = 1.0;
    for (double th : thetas) {
        const cplx v = F(OneFormChoice::angle(th));
        out.samples.push_back({th, v, false});
        if (std::abs(v) > vmax) {
            vmax = std::abs(v);
            ref = v / std::abs(v);
        }
    }
    for (auto& smp : out.samples) smp.zero = std::abs(smp.value) <= zero_tol * std::max(vmax, 1.0);
    const std::size_t n = out.samples.size();
    for (std::size_t i = 0; i < n && n > 1; ++i) {
        const double a = (std::conj(ref) * out.samples[i].value).real();
        const double b = (std::conj(ref) * out.samples[(i + 1) % n].value).real();
        if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) ++out.sign_changes;
    }
    return out;
}

// --- Unfolding on the modular group ---------------------------------------

/// Sum over Gamma_inf \ SL2(Z) of psi(g z) for psi supported in a <= Im <= b.
/// psi must be 1-periodic in x.
template <class Psi>
cplx poincare_sum(Psi&& psi, cplx z, double a, double b) {
    const double y = z.imag(), x = z.real();
    cplx acc = 0.0;
    if (y >= a && y <= b) acc += psi(z);
    // Im(g z) = y / |c z + d|^2 >= a needs |c z + d|^2 <= y / a.
    const double r2 = y / a;
    for (std::int64_t c = 1; double(c * c) * y * y <= r2; ++c) {
        const double w = std::sqrt(std::max(0.0, r2 - double(c * c) * y * y));
        const auto d_lo = std::int64_t(std::ceil(-c * x - w)), d_hi = std::int64_t(std::floor(-c * x + w));
        for (std::int64_t d = d_lo; d <= d_hi; ++d) {
            if (std::gcd(c, d) != 1) continue;
            const cplx j = double(c) * z + double(d);
            const double im = y / std::norm(j);
            if (im < a || im > b) continue;
            // g z = a'/c - 1/(c (c z + d)); the a'/c shift is irrelevant to periodic psi
            // up to an integer, so use the inverse of d mod c.
            std::int64_t r0 = ((d % c) + c) % c, r1 = c, s0 = 1, s1 = 0;
            while (r1 != 0) {
                const std::int64_t q = r0 / r1;
                std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
                std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
            }
            const double ap = double(((s0 % c) + c) % c);
            acc += psi(ap / double(c) - 1.0 / (double(c) * j));
        }
    }
    return acc;
}

struct UnfoldingCheck {
    cplx folded;    // int_{Gamma \ H} (sum psi o g) G dmu
    cplx unfolded;  // int_{Gamma_inf \ H} psi G dmu
    double error_estimate = 0.0;
};

/// Both sides of the unfolding identity by nested adaptive quadrature.
/// `G` must be SL2(Z)-invariant.
template <class Psi, class Inv>
UnfoldingCheck unfolding_check(Psi&& psi, Inv&& G, double a, double b, double tol = 1e-10) {
    if (!(a > 0.0) || !(b > a)) throw DomainError("unfolding_check needs 0 < a < b");
    UnfoldingCheck out;
    double err = 0.0;
    // For z in the fundamental domain Im(g z) <= 1/Im z, so nothing survives above max(b, 1/a).
    const double top = std::max(b, 1.0 / a);
    auto inner_f = [&](double x) {
        const double lo = std::sqrt(1.0 - x * x);
        auto r = quad::adaptive<cplx>(
            [&](double y) {
                const cplx z(x, y);
                return poincare_sum(psi, z, a, b) * G(z) / (y * y);
            },
            lo, top, tol, 0.0, 4000);
        err += r.error;
        return r.value;
    };
    auto fo = quad::adaptive<cplx>(inner_f, -0.5, 0.5, tol, 0.0, 4000);
    out.folded = fo.value;
    auto inner_u = [&](double x) {
        auto r = quad::adaptive<cplx>([&](double y) { return psi(cplx(x, y)) * G(cplx(x, y)) / (y * y); }, a, b,
                                      tol, 0.0, 4000);
        err += r.error;
        return r.value;
    };
    auto un = quad::adaptive<cplx>(inner_u, 0.0, 1.0, tol, 0.0, 4000);
    out.unfolded = un.value;
    out.error_estimate = fo.error + un.error;
    return out;
}

/// SL2(Z)-invariant test functions y^6 |Delta(z)| and y^4 |E_4(z)|^2, evaluated
/// after reduction to the fundamental domain.
namespace toy {

inline double y6_abs_delta(cplx z) {
    const cplx w = reduce_to_fundamental(z).point;
    const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * w);
    cplx prod = 1.0, qn = 1.0;
    for (int n = 1; n <= 40; ++n) {
        qn *= q;
        prod *= std::pow(1.0 - qn, 24);
    }
    return std::pow(w.imag(), 6) * std::abs(q * prod);
}

inline double y4_abs_e4_sq(cplx z) {
    const cplx w = reduce_to_fundamental(z).point;
    const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * w);
    cplx acc = 1.0, qn = 1.0;
    for (int n = 1; n <= 40; ++n) {
        qn *= q;
        double s3 = 0.0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) s3 += double(d) * d * d;
        acc += 240.0 * s3 * qn;
    }
    return std::pow(w.imag(), 4) * std::norm(acc);
}

/// A randomized (psi, G) pair: psi = bump(y) * trigonometric polynomial in x
/// on a <= y <= b, G = c0 + c1 y^6|Delta| * 1e3 + c2 y^4|E4|^2.
struct Instance {
    double a = 0.3, b = 1.5;
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    double g0 = 1.0, g1 = 0.0, g2 = 0.0;

    cplx psi(cplx z) const {
        const double y = z.imag(), x = z.real();
        if (y <= a || y >= b) return 0.0;
        const double h = 0.5 * (b - a);
        const double bump = std::exp(1.0 / (h * h) - 1.0 / ((y - a) * (b - y)));
        return bump * (1.0 + t1 * std::cos(2.0 * kPi * x) + t2 * std::sin(2.0 * kPi * x) +
                       t3 * std::cos(4.0 * kPi * x));
    }
    double G(cplx z) const { return g0 + g1 * 1e3 * y6_abs_delta(z) + g2 * y4_abs_e4_sq(z); }
};

inline Instance random_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Instance in;
    in.a = 0.3 + 0.4 * U(rng);
    in.b = in.a + 0.5 + U(rng);
    in.t1 = 2.0 * U(rng) - 1.0;
    in.t2 = 2.0 * U(rng) - 1.0;
    in.t3 = 2.0 * U(rng) - 1.0;
    in.g0 = U(rng);
    in.g1 = U(rng);
    in.g2 = U(rng);
    return in;
}

}  // namespace toy

}  // namespace cuspdrift
