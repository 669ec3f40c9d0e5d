#pragma once

// Weight-2 holomorphic cusp forms, their antiderivative F, modular symbols and
// the unitary character family chi_eps; Maass cusp forms as coefficient data.
//
// The real one-form used in every integral is omega = Re(e^{i theta} f dz)
// itself, not a compactly supported representative of its cohomology class.
// Modular symbols only see the class, and all downstream pairings converge
// because f is cuspidal.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cuspdrift/error.hpp"
#include "cuspdrift/fuchsian.hpp"
#include "cuspdrift/specfun.hpp"

namespace cuspdrift {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// Truncated Fourier sum with the bound on everything left out.
struct SeriesValue {
    cplx value;
    double tail = 0.0;
    int terms = 0;
};

/// Weight-2 cusp form f(z) = sum_{n>=1} a_n e(nz); a[0] holds a_1.
struct HolCuspForm {
    int level = 1;
    std::vector<cplx> a;
    // |a_n| <= growth_constant * n is assumed for tail bounds.
    double growth_constant = 2.0;
    std::string provenance;

    std::size_t size() const { return a.size(); }
    cplx coeff(std::size_t n) const { return (n >= 1 && n <= a.size()) ? a[n - 1] : cplx(0.0); }
};

/// q-expansion of eta(z)^2 eta(11z)^2, the weight-2 newform of level 11.
inline HolCuspForm eta_product_coeffs(int level, int count) {
    if (level != 11) throw CapabilityError("eta_product_coeffs is defined for level 11 only");
    if (count < 1) throw DomainError("coefficient count must be >= 1");
    const int M = count;  // need q^1 .. q^M, i.e. series degree M - 1 after the leading q
    // prod (1 - q^n) by Euler's pentagonal number theorem.
    std::vector<std::int64_t> euler(M, 0);
    for (std::int64_t k = 0;; ++k) {
        bool any = false;
        for (std::int64_t kk : {k, -k}) {
            if (k == 0 && kk == -k && kk != k) continue;
            const std::int64_t e = kk * (3 * kk - 1) / 2;
            if (e < M) {
                euler[e] += (k % 2 == 0) ? 1 : -1;
                any = true;
            }
            if (k == 0) break;
        }
        if (!any) break;
    }
    // P^2
    std::vector<std::int64_t> p2(M, 0);
    for (int i = 0; i < M; ++i) {
        if (!euler[i]) continue;
        for (int j = 0; i + j < M; ++j)
            if (euler[j]) p2[i + j] += euler[i] * euler[j];
    }
    // P(q)^2 * P(q^11)^2
    std::vector<std::int64_t> prod(M, 0);
    for (int j = 0; 11 * j < M; ++j) {
        if (!p2[j]) continue;
        for (int i = 0; i + 11 * j < M; ++i) prod[i + 11 * j] += p2[i] * p2[j];
    }
    HolCuspForm f;
    f.level = 11;
    f.a.resize(M);
    for (int n = 1; n <= M; ++n) f.a[n - 1] = double(prod[n - 1]);
    f.provenance = "eta(z)^2 eta(11z)^2 (computed)";
    return f;
}

namespace detail {

// Sum of the omitted terms of sum_n C n q^n (or C/(2pi) q^n for F) from n = M+1.
inline double hol_tail(double C, double q, int M, bool antiderivative) {
    const double qm = std::pow(q, M + 1);
    if (antiderivative) return C / (2.0 * kPi) * qm / (1.0 - q);
    return C * qm * ((M + 1.0) - M * q) / ((1.0 - q) * (1.0 - q));
}

template <bool Antiderivative>
SeriesValue hol_series(const HolCuspForm& f, cplx z, double tol) {
    if (!(z.imag() > 0.0)) throw DomainError("form evaluation requires Im z > 0");
    const double q = std::exp(-2.0 * kPi * z.imag());
    const int M = int(f.size());
    int used = M;
    // Smallest truncation meeting the tolerance.
    if (q < 1.0) {
        int lo = 1;
        if (detail::hol_tail(f.growth_constant, q, M, Antiderivative) > tol)
            throw NumericalError(cuspdrift::detail::concat(
                "Fourier tail ", detail::hol_tail(f.growth_constant, q, M, Antiderivative),
                " exceeds tolerance at Im z = ", z.imag(), " with ", M,
                " coefficients; supply more coefficients"));
        int hi = M;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (detail::hol_tail(f.growth_constant, q, mid, Antiderivative) <= tol)
                hi = mid;
            else
                lo = mid + 1;
        }
        used = hi;
    }
    const cplx e1 = std::exp(cplx(0.0, 2.0 * kPi) * z);
    cplx en = 1.0, sum = 0.0;
    // Re-anchor e(nz) every 64 steps to bound drift of the running product.
    for (int n = 1; n <= used; ++n) {
        en = (n % 64 == 0) ? std::exp(cplx(0.0, 2.0 * kPi * n) * z) : en * e1;
        if constexpr (Antiderivative)
            sum += f.a[n - 1] / cplx(0.0, 2.0 * kPi * n) * en;
        else
            sum += f.a[n - 1] * en;
    }
    return {sum, detail::hol_tail(f.growth_constant, q, used, Antiderivative), used};
}

}  // namespace detail

inline SeriesValue eval_form_ex(const HolCuspForm& f, cplx z, double tol = 1e-14) {
    return detail::hol_series<false>(f, z, tol);
}
inline cplx eval_form(const HolCuspForm& f, cplx z, double tol = 1e-14) {
    return eval_form_ex(f, z, tol).value;
}

/// F(z) = int_{i inf}^z f(w) dw = sum a_n/(2 pi i n) e(nz).
struct AntiderivativeF {
    std::shared_ptr<const HolCuspForm> form;
};

inline SeriesValue eval_F_ex(const HolCuspForm& f, cplx z, double tol = 1e-14) {
    return detail::hol_series<true>(f, z, tol);
}
inline cplx eval_F(const HolCuspForm& f, cplx z, double tol = 1e-14) {
    return eval_F_ex(f, z, tol).value;
}
inline cplx eval_F(const AntiderivativeF& F, cplx z, double tol = 1e-14) {
    return eval_F(*F.form, z, tol);
}

/// omega = cos(theta) Re(f dz) + sin(theta) Re(i f dz) = Re(e^{i theta} f dz).
struct OneFormChoice {
    double theta = 0.0;

    static OneFormChoice omega1() { return {0.0}; }
    static OneFormChoice omega2() { return {kPi / 2.0}; }
    static OneFormChoice angle(double t) { return {t}; }

    cplx phase() const {
        if (theta == 0.0) return 1.0;
        if (theta == kPi / 2.0) return cplx(0.0, 1.0);
        return std::polar(1.0, theta);
    }
};

/// Purely imaginary period pairing, stored as its imaginary part.
struct ModularSymbolValue {
    double im = 0.0;
    cplx value() const { return {0.0, im}; }
};

/// int_{i inf}^{gamma i inf} f(z) dz = F(w) - F(gamma^{-1} w) for any w in H.
/// Two split points are used; their disagreement is the returned error.
struct Period {
    cplx value;
    double error = 0.0;
};

inline Period period(const HolCuspForm& f, const GroupElement& g, double tol = 1e-13) {
    if (!is_member(g, GroupDescriptor(f.level)))
        throw DomainError(detail::concat("element ", g.str(), " is not in Gamma_0(", f.level, ")"));
    const GroupElement ginv = g.inverse();
    auto split = [&](double h, double x0) {
        // w = g(x0 + i h): then Im w = h / |c(x0+ih)+d|^2 and Im g^{-1} w = h.
        const cplx base(x0, h);
        const cplx w = g.apply(base);
        return eval_F(f, w, tol) - eval_F(f, ginv.apply(w), tol);
    };
    const double c = double(g.c());
    if (g.c() == 0) {
        const cplx p1 = split(1.0, 0.0), p2 = split(0.8, 0.3);
        return {0.5 * (p1 + p2), std::abs(p1 - p2)};
    }
    // Balanced heights: base point above -d/c at height 1/c.
    const double x0 = -double(g.d()) / c;
    const cplx p1 = split(1.0 / c, x0);
    const cplx p2 = split(0.8 / c, x0 + 0.15 / c);
    const double err = std::abs(p1 - p2);
    if (err > 10.0 * std::max(tol * 1e3, 1e-11))
        throw NumericalError(detail::concat("period of ", g.str(),
                                            " depends on the split point: disagreement ", err));
    return {p1, err};
}

/// <gamma, omega> = -2 pi i Re(e^{i theta} * period).
inline ModularSymbolValue symbol_from_period(cplx per, const OneFormChoice& choice) {
    return {-2.0 * kPi * (choice.phase() * per).real()};
}

inline ModularSymbolValue modular_symbol(const HolCuspForm& f, const OneFormChoice& choice,
                                         const GroupElement& g) {
    return symbol_from_period(period(f, g).value, choice);
}

/// Periods P(gamma) = F(gamma i inf) for all of Gamma_0(p), p prime, from
/// p + 1 precomputed Manin symbols.
///
/// The path from i inf to a/c is split along the continued-fraction
/// convergents of a/c; each piece g{0, inf} (g in SL2(Z)) contributes a value
/// that depends only on the coset Gamma_0(p) g, i.e. on the bottom row of g as
/// a point of P^1(Z/p). Cost is O(log c) per element.
class PeriodTable {
public:
    explicit PeriodTable(const HolCuspForm& f) : level_(f.level) {
        if (level_ == 1) {
            values_.assign(1, 0.0);
            return;
        }
        for (int q = 2; q * q <= level_; ++q)
            if (level_ % q == 0) throw CapabilityError("PeriodTable needs a prime level");
        const std::int64_t p = level_;
        // Index 0: class (0:1); index 1 + k: class (1:k).
        // With Ft(x) = F(x) - [x ~ 0] F(0): V(identity) = Ft(inf) - Ft(0) = 0,
        // V(S T^k) = Ft(0) - Ft(-1/k) = -P(g_k) where g_k in Gamma_0(p) maps 0 to -1/k.
        values_.assign(std::size_t(p) + 1, 0.0);
        for (std::int64_t k = 1; k < p; ++k) {
            // g = (x, -1; p t, k) with x k + p t = 1.
            std::int64_t x = 1;
            while ((x * k - 1) % p != 0) ++x;
            const std::int64_t t = (1 - x * k) / p;
            values_[std::size_t(1 + k)] = -cuspdrift::period(f, GroupElement(x, -1, p * t, k)).value;
        }
    }

    int level() const { return level_; }

    cplx period(const GroupElement& g) const {
        if (g.c() % level_ != 0)
            throw DomainError(detail::concat("element ", g.str(), " is not in Gamma_0(", level_, ")"));
        if (g.c() == 0 || level_ == 1) return 0.0;
        // Convergents of a/c: p_{-2}/q_{-2} = 0/1, p_{-1}/q_{-1} = 1/0.
        std::int64_t num = g.a(), den = g.c();
        std::int64_t pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
        cplx total = 0.0;
        while (den != 0) {
            std::int64_t q = num / den, r = num % den;
            if (r < 0) {
                r += den;
                --q;
            }
            const std::int64_t pk = detail::checked_add(detail::checked_mul(q, pm1), pm2);
            const std::int64_t qk = detail::checked_add(detail::checked_mul(q, qm1), qm2);
            // Piece {p_{k-1}/q_{k-1}, p_k/q_k} = g{0, inf} with
            // g = (p_k, e p_{k-1}; q_k, e q_{k-1}), e = p_k q_{k-1} - p_{k-1} q_k = +-1.
            const std::int64_t e = pk * qm1 - pm1 * qk;
            total += value(qk, e * qm1);
            pm2 = pm1;
            qm2 = qm1;
            pm1 = pk;
            qm1 = qk;
            num = den;
            den = r;
        }
        return total;
    }

private:
    cplx value(std::int64_t r, std::int64_t s) const {
        const std::int64_t p = level_;
        const std::int64_t rr = ((r % p) + p) % p;
        if (rr == 0) return values_[0];
        std::int64_t inv = 1;
        while ((inv * rr) % p != 1) ++inv;
        const std::int64_t k = (((s % p) + p) % p) * inv % p;
        return values_[std::size_t(1 + k)];
    }

    int level_;
    std::vector<cplx> values_;
};

/// -2 pi i int_{i inf}^z omega.
inline cplx path_term(const HolCuspForm& f, const OneFormChoice& choice, cplx z,
                      double tol = 1e-14) {
    return {0.0, -2.0 * kPi * (choice.phase() * eval_F(f, z, tol)).real()};
}

/// chi_eps(gamma) = exp(eps <gamma, omega>).
struct CharacterFamily {
    std::shared_ptr<const HolCuspForm> form;
    OneFormChoice choice;
};

inline cplx character_from_symbol(double eps, ModularSymbolValue m) {
    return std::polar(1.0, eps * m.im);
}

inline cplx character(const CharacterFamily& fam, double eps, const GroupElement& g) {
    if (eps == 0.0) return 1.0;
    return character_from_symbol(eps, modular_symbol(*fam.form, fam.choice, g));
}

// ---------------------------------------------------------------------------
// Maass cusp forms

enum class Parity { even, odd };

/// u(z) = sum_{n != 0} b_n sqrt(y) K_{ir}(2 pi |n| y) e(nx), b_{-n} = +-b_n.
struct MaassForm {
    int level = 1;
    double r = 0.0;  // spectral parameter t_j, lambda = 1/4 + r^2
    Parity parity = Parity::even;
    std::vector<double> b;  // b[0] holds b_1
    std::string provenance;
    // Input attribute: whether the coefficients are L^2 normalized. Not recomputed.
    bool l2_normalized = false;

    double coeff(long n) const {
        if (n == 0) return 0.0;
        const std::size_t k = std::size_t(std::abs(n));
        if (k > b.size()) return 0.0;
        const double v = b[k - 1];
        return (n < 0 && parity == Parity::odd) ? -v : v;
    }
    cplx s() const { return {0.5, r}; }
};

inline double divisor_count(long n) {
    double d = 0;
    for (long k = 1; k * k <= n; ++k)
        if (n % k == 0) d += (k * k == n) ? 1 : 2;
    return d;
}

/// Truncated Fourier sum of u with a tail estimate from |b_n| <= d(n) and
/// K_{ir}(x) <= K_0(x) <= sqrt(pi/(2x)) e^{-x}.
inline SeriesValue eval_maass_ex(const MaassForm& u, cplx z, int terms = -1) {
    if (!(z.imag() > 0.0)) throw DomainError("Maass form evaluation requires Im z > 0");
    const int M = terms < 0 ? int(u.b.size()) : std::min<int>(terms, int(u.b.size()));
    const double y = z.imag(), x = z.real();
    const double sy = std::sqrt(y);
    cplx sum = 0.0;
    for (int n = 1; n <= M; ++n) {
        if (u.b[n - 1] == 0.0) continue;
        const double k = specfun::bessel_k(cplx(0.0, u.r), 2.0 * kPi * n * y).real();
        const double arg = 2.0 * kPi * n * x;
        // b_n e(nx) + b_{-n} e(-nx)
        const cplx mode = u.parity == Parity::even ? cplx(2.0 * std::cos(arg), 0.0)
                                                   : cplx(0.0, 2.0 * std::sin(arg));
        sum += u.b[n - 1] * sy * k * mode;
    }
    double tail = 0.0;
    for (int n = M + 1; n <= M + 200; ++n) {
        const double xx = 2.0 * kPi * n * y;
        const double t = 2.0 * divisor_count(n) * sy * std::sqrt(kPi / (2.0 * xx)) * std::exp(-xx);
        tail += t;
        if (t < 1e-30) break;
    }
    return {sum, tail, M};
}

inline cplx eval_maass(const MaassForm& u, cplx z, int terms = -1) {
    return eval_maass_ex(u, z, terms).value;
}

/// Relative automorphy defect
///   max_{z, g} |u(g z) - u(z)| / max_z |u(z)|
/// over the sample points and the generators {T, S} (level 1) or
/// {T, (1,0;N,1)} (level N). Fails if the Fourier tail at any point used is
/// not negligible against the residual scale.
inline double maass_residual(const MaassForm& u, std::span<const cplx> samples, int terms = -1,
                             double min_height = 0.5) {
    std::vector<GroupElement> gens = {GroupElement::translation(1)};
    gens.push_back(u.level == 1 ? GroupElement::inversion() : GroupElement(1, 0, u.level, 1));
    double worst = 0.0, scale = 0.0, tail = 0.0;
    for (cplx z : samples) {
        if (z.imag() < min_height)
            throw DomainError(detail::concat("sample ", z, " lies below the height floor ", min_height));
        const SeriesValue uz = eval_maass_ex(u, z, terms);
        scale = std::max(scale, std::abs(uz.value));
        tail = std::max(tail, uz.tail);
        for (const auto& g : gens) {
            const cplx w = g.apply(z);
            if (w.imag() < min_height)
                throw DomainError(detail::concat("translate ", w, " of ", z,
                                                 " lies below the height floor ", min_height));
            const SeriesValue uw = eval_maass_ex(u, w, terms);
            tail = std::max(tail, uw.tail);
            worst = std::max(worst, std::abs(uw.value - uz.value));
        }
    }
    if (scale == 0.0) return 0.0;
    if (tail > 1e-3 * scale)
        throw NumericalError(detail::concat("Maass expansion truncated too early: tail ", tail,
                                            " against scale ", scale));
    return worst / scale;
}

}  // namespace cuspdrift
