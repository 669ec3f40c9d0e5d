#pragma once

// Eisenstein series twisted by powers of modular symbols (Re s > 1):
//   E^n(z,s) = sum_{Gamma_inf \ Gamma} <g, omega>^n Im(g z)^s
//   D^n(z,s) = sum_{Gamma_inf \ Gamma} (-2 pi i int_{i inf}^{g z} omega)^n Im(g z)^s
// The path term of D splits as <g, omega> + P(z) with
// P(z) = -2 pi i Re(e^{i theta} F(z)), using invariance of f dz. Both
// weights are constant along each row r T^m, so the row sums of the
// Eisenstein module apply unchanged.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "cuspdrift/eisenstein.hpp"
#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"
#include "cuspdrift/operators.hpp"

namespace cuspdrift {

struct TwistedSeriesConfig {
    int order = 1;
    double tol = 1e-10;
    double margin = 0.1;

    void validate() const {
        if (order < 0 || order > 4) throw DomainError("twisted series order must lie in 0..4");
        if (!(tol > 0.0) || !(margin > 0.0)) throw DomainError("tolerances must be positive");
    }
};

namespace detail {

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * double(n - k + j) / double(j);
    return r;
}

inline cplx ipow(cplx b, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= b;
    return r;
}

// Tail of sum_{c > C} over reps of |symbol|^n y^sigma c^{-2 sigma} |G|, with
// |symbol| <= c1 + c2 log c. Odd n loses the constant mode (the rows of
// g and g^{-1} share c and carry opposite symbols).
inline double twisted_tail(const CosetSymbols& tab, cplx s, double y, int n) {
    const double sig = s.real();
    auto W = [&](double c) { return std::pow(tab.growth_c1 + tab.growth_c2 * std::log(c), n); };
    const int N = tab.group.level;
    const std::int64_t C = tab.cosets.bound;
    const double gmax = std::abs(RowSum(cplx(sig, 0.0), y).direct(0.0));
    if (n % 2 == 1) {
        const double mean = std::abs(RowSum(cplx(sig, 0.0), y).mean());
        return std::pow(y, sig) * coset_tail_sum(N, C, 2.0 * sig, true, W) * std::max(gmax - mean, mean);
    }
    return std::pow(y, sig) * coset_tail_sum(N, C, 2.0 * sig, true, W) * gmax;
}

}  // namespace detail

/// E^n(z, s) over the reps of `tab` (symbols from either route).
inline EisensteinValue goldfeld_E(cplx z, cplx s, int n, const CosetSymbols& tab,
                                  const TwistedSeriesConfig& cfg = {}) {
    TwistedSeriesConfig c = cfg;
    c.order = n;
    c.validate();
    if (!(z.imag() > 0.0)) throw DomainError("goldfeld_E requires Im z > 0");
    if (s.real() < 1.0 + cfg.margin)
        throw DomainError(detail::concat("goldfeld_E needs Re s >= ", 1.0 + cfg.margin));
    if (n == 0) {
        EisensteinConfig ec;
        ec.c_bound = int(tab.cosets.bound);
        ec.margin = cfg.margin;
        return eisenstein_coset_sum(z, s, tab, 0.0, ec);
    }
    EisensteinValue out = coset_sum_raw(z, s, tab, [&](std::size_t i) {
        return detail::ipow(cplx(0.0, tab.symbol[i]), n);
    });
    out.tail_estimate += detail::twisted_tail(tab, s, z.imag(), n);
    return out;
}

/// -2 pi i int_{i inf}^{z} omega = -2 pi i Re(e^{i theta} F(z)), purely imaginary.
inline cplx path_to(const HolCuspForm& f, const OneFormChoice& choice, cplx z) { return path_term(f, choice, z); }

/// D^n(z, s); the symbols of `tab` supply <g, omega> and F(z) supplies the
/// base-point part of the path term.
inline EisensteinValue goldfeld_D(cplx z, cplx s, int n, const HolCuspForm& f, const OneFormChoice& choice,
                                  const CosetSymbols& tab, const TwistedSeriesConfig& cfg = {}) {
    TwistedSeriesConfig c = cfg;
    c.order = n;
    c.validate();
    if (!(z.imag() > 0.0)) throw DomainError("goldfeld_D requires Im z > 0");
    if (s.real() < 1.0 + cfg.margin)
        throw DomainError(detail::concat("goldfeld_D needs Re s >= ", 1.0 + cfg.margin));
    const double p = path_to(f, choice, z).imag();
    EisensteinValue out = coset_sum_raw(z, s, tab, [&](std::size_t i) {
        return detail::ipow(cplx(0.0, tab.symbol[i] + p), n);
    });
    // Tail: binomial expansion in the symbol power.
    double tail = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double tj = j == 0 ? 0.0 : detail::twisted_tail(tab, s, z.imag(), j);
        tail += detail::binom(n, j) * std::pow(std::abs(p), n - j) * tj;
    }
    if (n >= 0) {
        // j = 0 piece: plain E, whose omitted reps are not completed here.
        const double sig = s.real(), y = z.imag();
        const double gmax = std::abs(detail::RowSum(cplx(sig, 0.0), y).direct(0.0));
        tail += std::pow(std::abs(p), n) * std::pow(y, sig) *
                detail::coset_tail_sum(tab.group.level, tab.cosets.bound, 2.0 * sig, true,
                                       [](double) { return 1.0; }) *
                gmax;
    }
    out.tail_estimate += tail;
    return out;
}

/// Right-hand side of the binomial relation sum_j C(n,j) P(z)^{n-j} E^j(z,s).
inline EisensteinValue goldfeld_binomial(cplx z, cplx s, int n, const HolCuspForm& f, const OneFormChoice& choice,
                                         const CosetSymbols& tab, const TwistedSeriesConfig& cfg = {}) {
    const cplx P = path_to(f, choice, z);
    EisensteinValue out;
    for (int j = 0; j <= n; ++j) {
        EisensteinValue e;
        if (j == 0) {
            // Uncompleted plain sum, to match the truncation of D.
            e = coset_sum_raw(z, s, tab, [](std::size_t) { return cplx(1.0); });
        } else {
            e = goldfeld_E(z, s, j, tab, cfg);
        }
        out.value += detail::binom(n, j) * detail::ipow(P, n - j) * e.value;
        out.tail_estimate += detail::binom(n, j) * std::pow(std::abs(P), n - j) * e.tail_estimate;
        out.terms = e.terms;
    }
    return out;
}

/// n-fold iterated difference h -> h(g .) - h(.) for every sample (a list
/// of n elements g_1..g_n), evaluated at z; returns the largest modulus.
/// The k-th difference uses g_k, so the result is the alternating sum of
/// h(g_{i1} g_{i2} ... z) over increasing index subsets.
inline double order_automorphy_residual(const std::function<cplx(cplx)>& h, int n,
                                        const std::vector<std::vector<GroupElement>>& samples, cplx z) {
    if (n < 1) throw DomainError("order_automorphy_residual needs n >= 1");
    double worst = 0.0;
    for (const auto& gs : samples) {
        if (int(gs.size()) != n)
            throw DomainError(detail::concat("each sample needs ", n, " group elements"));
        cplx acc = 0.0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            GroupElement g = GroupElement::identity();
            int bits = 0;
            for (int k = 0; k < n; ++k)
                if (mask & (1u << k)) {
                    g = g * gs[std::size_t(k)];
                    ++bits;
                }
            acc += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * h(g.apply(z));
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

/// |(Delta + s(1-s)) D^n + n L1 D^{n-1} + C(n,2) L2 D^{n-2}| at z with
/// five-point Laplacian and central gradient of step h.
struct PdeResidual {
    double residual = 0.0;
    double scale = 0.0;  // magnitude of the largest single term
};

inline PdeResidual pde_residual_D(cplx z, cplx s, int n, const HolCuspForm& f, const OneFormChoice& choice,
                                  const CosetSymbols& tab, double h, const TwistedSeriesConfig& cfg = {}) {
    if (n < 0) throw DomainError("pde_residual_D needs n >= 0");
    if (z.imag() - h <= 0.05 * z.imag())
        throw DomainError(detail::concat("stencil step ", h, " too large at height ", z.imag()));
    auto D = [&](int k) {
        return [&, k](cplx w) -> cplx { return k < 0 ? cplx(0.0) : goldfeld_D(w, s, k, f, choice, tab, cfg).value; };
    };
    const cplx lap = laplacian_5pt(D(n), z, h);
    const cplx dn = D(n)(z);
    cplx total = lap + s * (1.0 - s) * dn;
    double scale = std::max(std::abs(lap), std::abs(s * (1.0 - s) * dn));
    if (n >= 1) {
        const cplx t1 = double(n) * apply_L1(D(n - 1), f, choice, z, h);
        total += t1;
        scale = std::max(scale, std::abs(t1));
    }
    if (n >= 2) {
        const cplx t2 = detail::binom(n, 2) * apply_L2(D(n - 2), f, choice, z);
        total += t2;
        scale = std::max(scale, std::abs(t2));
    }
    return {std::abs(total), scale};
}

}  // namespace cuspdrift
