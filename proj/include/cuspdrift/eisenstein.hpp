#pragma once

// Non-holomorphic Eisenstein series for Gamma_0(N) at the cusp infinity.
//
// Coset route: E(z,s,chi) = sum_{Gamma_inf \ Gamma} conj chi(g) Im(g z)^s for
// Re s > 1. With the double-coset reps r = (a b; c d) of coset_reps every left
// coset is r T^m, and Im(r (z+m)) = y / (c^2 |z + m + d/c|^2), so each rep
// contributes y^s c^{-2s} G_s(x + d/c, y) with the row sum
//   G_s(t, y) = sum_{m in Z} ((t+m)^2 + y^2)^{-s}.
//
// Fourier route (level 1, trivial character, any s off the poles):
//   E = y^s + phi(s) y^{1-s}
//     + 4 pi^s sqrt(y) / (Gamma(s) zeta(2s)) sum_n n^{s-1/2} sigma_{1-2s}(n) K_{s-1/2}(2 pi n y) cos(2 pi n x)
// with phi(s) = sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s)).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"
#include "cuspdrift/fuchsian.hpp"
#include "cuspdrift/quadrature.hpp"
#include "cuspdrift/specfun.hpp"

namespace cuspdrift {

struct EisensteinConfig {
    int c_bound = 200;
    int fourier_terms = 0;  // 0: chosen from the tolerance
    double min_height = 0.05;
    double tol = 1e-13;
    double margin = 0.1;  // coset sums need Re s >= 1 + margin

    void validate() const {
        if (c_bound < 1 || fourier_terms < 0 || !(min_height > 0.0) || !(tol > 0.0) || !(margin > 0.0))
            throw DomainError("EisensteinConfig: all settings must be positive");
    }
};

struct EisensteinValue {
    cplx value;
    double tail_estimate = 0.0;
    std::size_t terms = 0;  // coset reps or Fourier modes used
};

namespace detail {

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline cplx cpow_real(double base, cplx e) { return std::exp(e * std::log(base)); }

/// The row sum G_s(t, y) as a function of t for fixed (s, y). The terms
/// |m| <= 2 are summed directly; the rest is analytic on a wide neighborhood
/// of [-1/2, 1/2] and is replaced by a Chebyshev interpolant.
class RowSum {
public:
    static constexpr int kNodes = 28;

    RowSum(cplx s, double y) : s_(s), y_(y) {
        if (!(y > 0.0)) throw DomainError("row sum requires y > 0");
        std::array<cplx, kNodes> vals;
        for (int k = 0; k < kNodes; ++k) {
            const double t = 0.5 * std::cos(kPi * (k + 0.5) / kNodes);
            vals[k] = far_part(t);
        }
        for (int j = 0; j < kNodes; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < kNodes; ++k) acc += vals[k] * std::cos(kPi * j * (k + 0.5) / kNodes);
            coef_[j] = acc * (2.0 / kNodes);
        }
        coef_[0] *= 0.5;
        chebyshev_tail_ = std::abs(coef_[kNodes - 1]) + std::abs(coef_[kNodes - 2]);
    }

    cplx operator()(double t) const {
        t -= std::round(t);
        cplx near = 0.0;
        for (int m = -2; m <= 2; ++m) near += term(t + m);
        // Clenshaw on u = 2t in [-1, 1].
        const double u = 2.0 * t;
        cplx b1 = 0.0, b2 = 0.0;
        for (int j = kNodes - 1; j >= 1; --j) {
            const cplx b0 = 2.0 * u * b1 - b2 + coef_[j];
            b2 = b1;
            b1 = b0;
        }
        return near + u * b1 - b2 + coef_[0];
    }

    /// Interpolation error scale (last Chebyshev coefficients).
    double interpolation_error() const { return chebyshev_tail_; }

    /// Exact integral over t in [0, 1): sqrt(pi) Gamma(s-1/2)/Gamma(s) y^{1-2s}.
    cplx mean() const {
        return std::sqrt(kPi) * std::exp(specfun::log_gamma(s_ - 0.5) - specfun::log_gamma(s_)) *
               cpow_real(y_, 1.0 - 2.0 * s_);
    }

    /// The same sum by direct summation plus a binomial/Hurwitz tail; used for the
    /// interpolation nodes and as an independent check.
    cplx direct(double t) const {
        t -= std::round(t);
        cplx acc = 0.0;
        for (int m = -2; m <= 2; ++m) acc += term(t + m);
        return acc + far_part(t);
    }

private:
    cplx term(double u) const { return std::exp(-s_ * std::log(u * u + y_ * y_)); }

    // sum over |m| >= 3.
    cplx far_part(double t) const {
        const int M = std::max(12, int(std::ceil(4.0 * y_)) + 3);
        cplx acc = 0.0;
        for (int m = 3; m <= M; ++m) acc += term(t + m) + term(t - m);
        // |m| > M: ((t+m)^2 + y^2)^{-s} = sum_k binom(-s,k) y^{2k} |t+m|^{-2s-2k}.
        cplx coef = 1.0;
        const double y2 = y_ * y_;
        for (int k = 0; k < 200; ++k) {
            const cplx w = 2.0 * s_ + 2.0 * double(k);
            const cplx tk = coef * (specfun::hurwitz_zeta(w, M + 1 + t) + specfun::hurwitz_zeta(w, M + 1 - t));
            acc += tk;
            if (std::abs(tk) <= 1e-18 * std::abs(acc)) return acc;
            coef *= -(s_ + double(k)) / double(k + 1) * y2;
        }
        throw NumericalError("row-sum tail expansion did not converge");
    }

    cplx s_;
    double y_;
    std::array<cplx, kNodes> coef_{};
    double chebyshev_tail_ = 0.0;
};

/// sum_{c > C, N | c} c^{-w} phi(c)^j W(c) for real w, by a direct block to
/// 64 C followed by an integral bound. weight(c) >= 0 must be nondecreasing.
template <class Weight>
double coset_tail_sum(int N, std::int64_t C, double w, bool with_totient, Weight weight) {
    const double e = with_totient ? w - 1.0 : w;  // phi(c) <= c
    if (!(e > 1.0)) throw DomainError("coset tail does not converge");
    double acc = 0.0;
    const std::int64_t first = (C / N + 1) * N;
    const std::int64_t last = std::max<std::int64_t>(64 * C, first + 64 * N);
    for (std::int64_t c = first; c <= last; c += N) acc += std::pow(double(c), -e) * weight(double(c));
    // int_{X}^{inf} x^{-e} W(x) dx / N in u = log x.
    const double X = double(last);
    auto integrand = [&](double u) { return std::exp((1.0 - e) * u) * weight(std::exp(u)); };
    const double span = 60.0 / (e - 1.0);
    const auto res = quad::adaptive<double>(integrand, std::log(X), std::log(X) + span, 1e-30, 1e-10);
    return acc + res.value / N;
}

/// Largest value of sum_n n |B_n(y)| with B_n the n-th Fourier coefficient of
/// G_s(., y) (bound through real order).
inline double row_fluctuation_bound(cplx s, double y) {
    const double sig = s.real();
    const double pref = 2.0 * std::pow(kPi, sig) * std::pow(y, 0.5 - sig) /
                        std::abs(specfun::gamma_complex(s));
    double acc = 0.0;
    for (int n = 1; n < 100000; ++n) {
        const double k = specfun::bessel_k(sig - 0.5, 2.0 * kPi * n * y).real();
        const double t = 2.0 * pref * n * std::pow(double(n), sig - 0.5) * k;
        acc += t;
        if (t < 1e-20 * acc || t == 0.0) break;
    }
    return acc;
}

}  // namespace detail

/// Per-rep data for twisted sums: the reps of coset_reps and Im <r, omega>.
struct CosetSymbols {
    GroupDescriptor group;
    CosetList cosets;
    std::vector<double> symbol;  // Im <r, omega>, 0 for the trivial twist
    double growth_c1 = 0.0, growth_c2 = 0.0;  // |symbol| <= c1 + c2 log c on the list
};

enum class SymbolRoute { manin, split_point };

/// Modular symbols for every rep up to c_bound.
inline CosetSymbols coset_symbols(const HolCuspForm& f, const OneFormChoice& choice,
                                  std::int64_t c_bound, SymbolRoute route = SymbolRoute::manin) {
    CosetSymbols out{GroupDescriptor(f.level), coset_reps(GroupDescriptor(f.level), c_bound), {}, 0, 0};
    out.symbol.resize(out.cosets.reps.size());
    std::unique_ptr<PeriodTable> table;
    if (route == SymbolRoute::manin) table = std::make_unique<PeriodTable>(f);
    for (std::size_t i = 0; i < out.cosets.reps.size(); ++i) {
        const GroupElement& g = out.cosets.reps[i];
        const cplx per = route == SymbolRoute::manin ? table->period(g) : period(f, g).value;
        out.symbol[i] = symbol_from_period(per, choice).im;
    }
    // Envelope fit: c2 from the largest |symbol|/log c, c1 absorbs small c.
    double c2 = 0.0, c1 = 0.0;
    for (std::size_t i = 0; i < out.symbol.size(); ++i) {
        const double c = double(out.cosets.reps[i].c());
        if (c >= 2.0) c2 = std::max(c2, std::abs(out.symbol[i]) / std::log(c));
    }
    for (std::size_t i = 0; i < out.symbol.size(); ++i) {
        const double c = std::max(1.0, double(out.cosets.reps[i].c()));
        c1 = std::max(c1, std::abs(out.symbol[i]) - c2 * std::log(c));
    }
    out.growth_c1 = c1;
    out.growth_c2 = c2;
    return out;
}

/// Untwisted table (all symbols zero) for plain Eisenstein sums.
inline CosetSymbols trivial_symbols(const GroupDescriptor& grp, std::int64_t c_bound) {
    CosetSymbols out{grp, coset_reps(grp, c_bound), {}, 0, 0};
    out.symbol.assign(out.cosets.reps.size(), 0.0);
    return out;
}

/// sum over reps r (c > 0) and m of weight(r) Im(r(z+m))^s, plus the identity
/// term weight(id) y^s. Returns the raw sum and the interpolation error.
template <class Weight>
EisensteinValue coset_sum_raw(cplx z, cplx s, const CosetSymbols& tab, Weight&& weight) {
    const double y = z.imag(), x = z.real();
    const detail::RowSum G(s, y);
    const cplx ys = detail::cpow_real(y, s);
    EisensteinValue out;
    cplx acc = 0.0;
    cplx block = 0.0;
    std::int64_t current_c = -1;
    cplx c_factor = 0.0;
    double mass = 0.0;  // sum over reps of |y^s c^{-2s}|
    const auto& reps = tab.cosets.reps;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const GroupElement& r = reps[i];
        if (r.c() == 0) {
            acc += weight(i) * ys;
            continue;
        }
        if (r.c() != current_c) {
            acc += c_factor * block;
            block = 0.0;
            current_c = r.c();
            c_factor = ys * detail::cpow_real(double(r.c()), -2.0 * s);
        }
        block += weight(i) * G(x + double(r.d()) / double(r.c()));
        mass += std::abs(c_factor);
    }
    acc += c_factor * block;
    out.value = acc;
    out.tail_estimate = G.interpolation_error() * mass;
    out.terms = reps.size();
    return out;
}

/// sum_{N | c, c <= C} phi(c) c^{-w} by counting reps.
inline cplx totient_partial_sum(const CosetList& cl, cplx w) {
    cplx acc = 0.0;
    for (const auto& r : cl.reps)
        if (r.c() > 0) acc += detail::cpow_real(double(r.c()), -w);
    return acc;
}

/// sum_{N | c} phi(c) c^{-w} = zeta(w-1)/zeta(w) * (local factor), N = 1 or prime.
inline cplx totient_dirichlet(int N, cplx w) {
    cplx v = specfun::zeta(w - 1.0) / specfun::zeta(w);
    if (N == 1) return v;
    if (!detail::is_prime(N)) throw CapabilityError("totient_dirichlet supports level 1 or prime");
    return v * double(N - 1) / (detail::cpow_real(double(N), w) - 1.0);
}

/// E(z, s, chi_eps) by the coset sum; `symbols` supplies Im <r, omega> per rep
/// (ignored when eps == 0). For the trivial character the constant Fourier
/// mode of the omitted reps (c > c_bound) is added in closed form, and the
/// tail estimate bounds the remaining oscillatory part.
inline EisensteinValue eisenstein_coset_sum(cplx z, cplx s, const CosetSymbols& symbols, double eps,
                                            const EisensteinConfig& cfg = {}) {
    cfg.validate();
    if (!(z.imag() > 0.0)) throw DomainError("Eisenstein series requires Im z > 0");
    if (s.real() < 1.0 + cfg.margin)
        throw DomainError(detail::concat("coset sum needs Re s >= ", 1.0 + cfg.margin, ", got ", s.real()));
    const int N = symbols.group.level;
    const std::int64_t C = symbols.cosets.bound;
    const double sig = s.real(), y = z.imag();
    EisensteinValue out;
    if (eps == 0.0) {
        out = coset_sum_raw(z, s, symbols, [](std::size_t) { return cplx(1.0); });
        const detail::RowSum G(s, y);
        const cplx w = 2.0 * s;
        const cplx missing = totient_dirichlet(N, w) - totient_partial_sum(symbols.cosets, w);
        out.value += detail::cpow_real(y, s) * G.mean() * missing;
        const double S = detail::coset_tail_sum(N, C, 2.0 * sig, false, [](double) { return 1.0; });
        out.tail_estimate += std::pow(y, sig) * S * detail::row_fluctuation_bound(s, y);
        return out;
    }
    out = coset_sum_raw(z, s, symbols, [&](std::size_t i) { return std::polar(1.0, -eps * symbols.symbol[i]); });
    // |G_s(t,y)| <= G_sigma(0, y).
    const double gmax = std::abs(detail::RowSum(cplx(sig, 0.0), y).direct(0.0));
    const double S = detail::coset_tail_sum(N, C, 2.0 * sig, true, [](double) { return 1.0; });
    out.tail_estimate += std::pow(y, sig) * S * gmax;
    return out;
}

inline EisensteinValue eisenstein_coset_sum(cplx z, cplx s, const CharacterFamily& fam, double eps,
                                            const EisensteinConfig& cfg = {}) {
    const auto tab = eps == 0.0 ? trivial_symbols(GroupDescriptor(fam.form->level), cfg.c_bound)
                                : coset_symbols(*fam.form, fam.choice, cfg.c_bound);
    return eisenstein_coset_sum(z, s, tab, eps, cfg);
}

inline EisensteinValue eisenstein_coset_sum(cplx z, cplx s, const GroupDescriptor& grp,
                                            const EisensteinConfig& cfg = {}) {
    return eisenstein_coset_sum(z, s, trivial_symbols(grp, cfg.c_bound), 0.0, cfg);
}

// ---------------------------------------------------------------------------
// Level-1 scattering function

/// phi(s) = sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s)).
inline cplx scattering_phi(cplx s) {
    if (std::abs(s - 1.0) < 1e-12) throw PoleError("phi has a pole at s = 1", cplx(1.0, 0.0));
    if (std::abs(s - 0.5) < 1e-12) return -1.0;  // removable singularity, phi(1/2) = -1
    const cplx z2 = specfun::zeta(2.0 * s);
    if (std::abs(z2) < 1e-300) throw PoleError("phi has a pole at a zero of zeta(2s)", s);
    return std::sqrt(kPi) * std::exp(specfun::log_gamma(s - 0.5) - specfun::log_gamma(s)) *
           specfun::zeta(2.0 * s - 1.0) / z2;
}

/// phi'(s)/phi(s) = psi(s-1/2) - psi(s) + 2 zeta'/zeta(2s-1) - 2 zeta'/zeta(2s).
inline cplx scattering_logderiv(cplx s) {
    if (std::abs(s - 1.0) < 1e-12) throw PoleError("phi'/phi has a pole at s = 1", cplx(1.0, 0.0));
    if (std::abs(s - 0.5) < 1e-12)
        throw PoleError("closed form for phi'/phi is singular at s = 1/2; use the limit", cplx(0.5, 0.0));
    return specfun::digamma(s - 0.5) - specfun::digamma(s) + 2.0 * specfun::zeta_logderiv(2.0 * s - 1.0) -
           2.0 * specfun::zeta_logderiv(2.0 * s);
}

/// Level-1 E(z, s) from its Fourier expansion.
inline EisensteinValue eisenstein_fourier(cplx z, cplx s, const EisensteinConfig& cfg = {}) {
    cfg.validate();
    const double y = z.imag(), x = z.real();
    if (y < cfg.min_height)
        throw DomainError(detail::concat("Fourier route needs Im z >= ", cfg.min_height, ", got ", y));
    const cplx phi = scattering_phi(s);
    EisensteinValue out;
    out.value = detail::cpow_real(y, s) + phi * detail::cpow_real(y, 1.0 - s);
    if (std::abs(s - 0.5) < 1e-12) {
        // E(z, 1/2) vanishes identically (phi(1/2) = -1 and the prefactor has 1/zeta(1)).
        out.value = 0.0;
        return out;
    }
    const cplx nu = s - 0.5;
    const cplx pref = 4.0 * std::exp(s * std::log(kPi) - specfun::log_gamma(s)) * std::sqrt(y) /
                      specfun::zeta(2.0 * s);
    const double sig = s.real();
    auto bound = [&](int n) {
        const double dn = 2.0 * std::sqrt(double(n));
        return std::abs(pref) * std::pow(double(n), sig - 0.5 + std::max(0.0, 1.0 - 2.0 * sig)) * dn *
               specfun::bessel_k(nu.real(), 2.0 * kPi * n * y).real();
    };
    int terms = cfg.fourier_terms;
    if (terms == 0) {
        terms = 1;
        while (bound(terms + 1) > 1e-3 * cfg.tol && terms < 100000) ++terms;
    }
    // sigma_{1-2s}(n) by sieve.
    std::vector<cplx> sigma(std::size_t(terms) + 1, 0.0);
    for (int d = 1; d <= terms; ++d) {
        const cplx dp = detail::cpow_real(double(d), 1.0 - 2.0 * s);
        for (int n = d; n <= terms; n += d) sigma[std::size_t(n)] += dp;
    }
    cplx acc = 0.0;
    for (int n = 1; n <= terms; ++n) {
        const cplx k = specfun::bessel_k(nu, 2.0 * kPi * n * y);
        acc += detail::cpow_real(double(n), nu) * sigma[std::size_t(n)] * k * std::cos(2.0 * kPi * n * x);
    }
    out.value += pref * acc;
    double tail = 0.0;
    for (int n = terms + 1; n <= terms + 400; ++n) {
        const double b = bound(n);
        tail += b;
        if (b < 1e-6 * tail || b == 0.0) break;
    }
    out.tail_estimate = tail;
    out.terms = std::size_t(terms);
    return out;
}

/// E^{Gamma_0(p)}_inf(z, s) = (p^s E(pz, s) - E(z, s)) / (p^{2s} - 1), trivial
/// character, through the level-1 Fourier route.
inline EisensteinValue eisenstein_level_p_fourier(int p, cplx z, cplx s, const EisensteinConfig& cfg = {}) {
    if (!detail::is_prime(p)) throw CapabilityError("eisenstein_level_p_fourier needs a prime level");
    const EisensteinValue a = eisenstein_fourier(cplx(p * z.real(), p * z.imag()), s, cfg);
    const EisensteinValue b = eisenstein_fourier(z, s, cfg);
    const cplx ps = detail::cpow_real(double(p), s);
    const cplx den = ps * ps - 1.0;
    return {(ps * a.value - b.value) / den, (std::abs(ps) * a.tail_estimate + b.tail_estimate) / std::abs(den),
            a.terms + b.terms};
}

/// Level-1 E(z, s) anywhere in H: Fourier expansion at the reduced point.
inline EisensteinValue eisenstein_level1(cplx z, cplx s, const EisensteinConfig& cfg = {}) {
    return eisenstein_fourier(reduce_to_fundamental(z).point, s, cfg);
}

/// Oldform formula for E^{Gamma_0(p)}_inf with both level-1 values taken at
/// reduced points, so any z in H is admissible.
inline EisensteinValue eisenstein_level_p(int p, cplx z, cplx s, const EisensteinConfig& cfg = {}) {
    if (!detail::is_prime(p)) throw CapabilityError("eisenstein_level_p needs a prime level");
    const EisensteinValue a = eisenstein_level1(double(p) * z, s, cfg);
    const EisensteinValue b = eisenstein_level1(z, s, cfg);
    const cplx ps = detail::cpow_real(double(p), s);
    const cplx den = ps * ps - 1.0;
    return {(ps * a.value - b.value) / den, (std::abs(ps) * a.tail_estimate + b.tail_estimate) / std::abs(den),
            a.terms + b.terms};
}

/// Zero Fourier mode int_0^1 E(x + i y) dx by the periodic trapezoidal rule
/// on `points` nodes of any evaluator (exact for modes below `points`).
template <class Evaluator>
EisensteinValue zero_mode(Evaluator&& E, double y, int points = 32) {
    if (points < 2) throw DomainError("zero_mode needs at least two nodes");
    EisensteinValue out;
    cplx acc = 0.0;
    double tail = 0.0;
    for (int k = 0; k < points; ++k) {
        const EisensteinValue v = E(cplx((k + 0.5) / points, y));
        acc += v.value;
        tail = std::max(tail, v.tail_estimate);
    }
    out.value = acc / double(points);
    out.tail_estimate = tail;
    out.terms = std::size_t(points);
    return out;
}

/// M(T) = -(1/4pi) int_{-T}^{T} phi'/phi(1/2 + it) dt (level 1).
struct WeylIntegral {
    double value = 0.0;
    double imag_residue = 0.0;
    double quadrature_error = 0.0;
};

inline WeylIntegral weyl_M(double T, double tol = 1e-10) {
    if (T < 0.0) throw DomainError("weyl_M requires T >= 0");
    WeylIntegral out;
    if (T == 0.0) return out;
    // The integrand is real and even in t; integrate over [0, T] and double.
    // t = 0 is the removable point s = 1/2 of the closed form; start just off it.
    auto f = [](double t) {
        const double tt = std::max(t, 1e-9);
        return scattering_logderiv(cplx(0.5, tt));
    };
    const auto r = quad::adaptive<cplx>(f, 0.0, T, tol, 0.0, 20000);
    out.value = -(2.0 / (4.0 * kPi)) * r.value.real();
    out.imag_residue = (2.0 / (4.0 * kPi)) * std::abs(r.value.imag());
    out.quadrature_error = (2.0 / (4.0 * kPi)) * r.error;
    return out;
}

}  // namespace cuspdrift
