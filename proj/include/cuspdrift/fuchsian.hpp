#pragma once

// Integer matrix machinery for the Hecke congruence groups Gamma_0(N):
// projective group elements, coset representatives of Gamma_inf \ Gamma_0(N),
// reduction to the standard fundamental domain and cusp enumeration.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cuspdrift/error.hpp"

namespace cuspdrift {

namespace detail {

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw NumericalError("integer overflow in matrix product");
    return r;
}
inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw NumericalError("integer overflow in matrix product");
    return r;
}

}  // namespace detail

/// Element of PSL2(Z): integer matrix (a b; c d) with ad - bc = 1, stored with
/// c > 0, or c = 0 and a > 0.
class GroupElement {
public:
    GroupElement() = default;

    GroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
        : a_(a), b_(b), c_(c), d_(d) {
        const std::int64_t det = detail::checked_add(detail::checked_mul(a, d),
                                                     -detail::checked_mul(b, c));
        if (det != 1)
            throw DomainError(detail::concat("group element (", a, ",", b, ";", c, ",", d,
                                             ") has determinant ", det));
        if (c_ < 0 || (c_ == 0 && a_ < 0)) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
            d_ = -d_;
        }
    }

    static GroupElement identity() { return {1, 0, 0, 1}; }
    static GroupElement translation(std::int64_t k) { return {1, k, 0, 1}; }
    static GroupElement inversion() { return {0, -1, 1, 0}; }

    std::int64_t a() const noexcept { return a_; }
    std::int64_t b() const noexcept { return b_; }
    std::int64_t c() const noexcept { return c_; }
    std::int64_t d() const noexcept { return d_; }

    GroupElement inverse() const { return {d_, -b_, -c_, a_}; }

    friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
        using detail::checked_add;
        using detail::checked_mul;
        return {checked_add(checked_mul(x.a_, y.a_), checked_mul(x.b_, y.c_)),
                checked_add(checked_mul(x.a_, y.b_), checked_mul(x.b_, y.d_)),
                checked_add(checked_mul(x.c_, y.a_), checked_mul(x.d_, y.c_)),
                checked_add(checked_mul(x.c_, y.b_), checked_mul(x.d_, y.d_))};
    }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;

    /// Linear fractional action on the upper half-plane.
    std::complex<double> apply(std::complex<double> z) const {
        return (double(a_) * z + double(b_)) / (double(c_) * z + double(d_));
    }

    /// Automorphy factor cz + d.
    std::complex<double> j(std::complex<double> z) const { return double(c_) * z + double(d_); }

    bool is_parabolic() const { return std::abs(a_ + d_) == 2; }

    std::string str() const { return detail::concat("(", a_, ",", b_, ";", c_, ",", d_, ")"); }

private:
    std::int64_t a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept {
        std::size_t h = std::hash<std::int64_t>{}(g.a());
        for (std::int64_t v : {g.b(), g.c(), g.d()})
            h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

/// Gamma_0(N); N = 1 is the full modular group.
struct GroupDescriptor {
    int level = 1;

    explicit GroupDescriptor(int n = 1) : level(n) {
        if (n < 1) throw DomainError("group level must be >= 1");
    }
};

inline bool is_member(const GroupElement& g, const GroupDescriptor& grp) {
    return g.c() % grp.level == 0;
}

/// Representatives of Gamma_inf \ Gamma_0(N) / Gamma_inf with 0 <= c <= bound.
///
/// One matrix per pair (c, d mod c), gcd(c, d) = 1, N | c, plus the identity
/// for c = 0. The full coset space Gamma_inf \ Gamma is recovered as
/// rep * T^m, m in Z; every function summed over it in this library is
/// constant along that orbit or summed over m explicitly.
struct CosetList {
    std::int64_t bound = 0;
    std::vector<GroupElement> reps;
};

inline CosetList coset_reps(const GroupDescriptor& grp, std::int64_t c_bound) {
    if (c_bound < 0) throw DomainError("c_bound must be >= 0");
    CosetList out;
    out.bound = c_bound;
    out.reps.push_back(GroupElement::identity());
    for (std::int64_t c = grp.level; c <= c_bound; c += grp.level) {
        for (std::int64_t d = 0; d < c; ++d) {
            if (std::gcd(c, d) != 1) continue;
            // a d = 1 (mod c) by extended Euclid, then b = (a d - 1) / c.
            std::int64_t r0 = d, r1 = c, s0 = 1, s1 = 0;
            while (r1 != 0) {
                const std::int64_t q = r0 / r1;
                std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
                std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
            }
            std::int64_t a = ((s0 % c) + c) % c;
            if (c == 1) a = 1;
            const std::int64_t b = (a * d - 1) / c;
            out.reps.emplace_back(a, b, c, d);
        }
    }
    return out;
}

/// Result of reducing a point to the closed standard fundamental domain.
struct Reduction {
    std::complex<double> point;
    GroupElement g;  // g.apply(z) == point
};

/// Reduce z to |Re z| <= 1/2, |z| >= 1 with an element of SL2(Z).
inline Reduction reduce_to_fundamental(std::complex<double> z) {
    if (!(z.imag() > 0.0)) throw DomainError("reduce_to_fundamental requires Im z > 0");
    GroupElement g = GroupElement::identity();
    for (int it = 0; it < 10000; ++it) {
        const double shift = std::floor(z.real() + 0.5);
        if (shift != 0.0) {
            const auto k = static_cast<std::int64_t>(shift);
            z -= shift;
            g = GroupElement::translation(-k) * g;
        }
        if (std::norm(z) < 1.0 - 1e-14) {
            z = -1.0 / z;
            g = GroupElement::inversion() * g;
        } else {
            return {z, g};
        }
    }
    throw NumericalError("reduce_to_fundamental did not terminate");
}

/// A cusp a/c in lowest terms; c == 0 encodes infinity.
struct Cusp {
    std::int64_t num = 1, den = 0;
    bool is_infinity() const { return den == 0; }
    friend bool operator==(const Cusp&, const Cusp&) = default;
    std::string str() const { return den == 0 ? std::string("inf") : detail::concat(num, "/", den); }
};

/// Inequivalent cusps of Gamma_0(N) for N = 1 or N prime.
inline std::vector<Cusp> cusp_list(const GroupDescriptor& grp) {
    const int n = grp.level;
    if (n == 1) return {Cusp{1, 0}};
    bool prime = n >= 2;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) prime = false;
    if (!prime)
        throw CapabilityError(detail::concat("cusp_list supports level 1 or prime levels, got ", n));
    return {Cusp{1, 0}, Cusp{0, 1}};
}

}  // namespace cuspdrift
