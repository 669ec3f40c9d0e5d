#pragma once

// Truncated Taylor series in one variable (the deformation parameter):
// c[k] is the coefficient of eps^k, so the k-th derivative at 0 is k! c[k].

#include <complex>
#include <cstddef>
#include <vector>

#include "cuspdrift/error.hpp"

namespace cuspdrift {

class Jet {
public:
    using cplx = std::complex<double>;

    explicit Jet(std::size_t order = 0, cplx c0 = 0.0) : c_(order + 1, 0.0) { c_[0] = c0; }

    static Jet variable(std::size_t order) {
        Jet j(order);
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }
    /// Polynomial sum_k coeffs[k] eps^k truncated at `order`.
    static Jet polynomial(const std::vector<cplx>& coeffs, std::size_t order) {
        Jet j(order);
        for (std::size_t k = 0; k < coeffs.size() && k <= order; ++k) j.c_[k] = coeffs[k];
        return j;
    }

    std::size_t order() const { return c_.size() - 1; }
    cplx coeff(std::size_t k) const { return k < c_.size() ? c_[k] : cplx(0.0); }
    cplx& operator[](std::size_t k) { return c_[k]; }

    /// k-th derivative at 0.
    cplx derivative(std::size_t k) const {
        double f = 1.0;
        for (std::size_t i = 2; i <= k; ++i) f *= double(i);
        return f * coeff(k);
    }

    Jet& operator+=(const Jet& o) {
        check(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(cplx a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    Jet& operator+=(cplx a) {
        c_[0] += a;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, cplx b) { return a *= b; }
    friend Jet operator*(cplx b, Jet a) { return a *= b; }
    friend Jet operator+(Jet a, cplx b) { return a += b; }
    friend Jet operator+(cplx b, Jet a) { return a += b; }
    friend Jet operator-(cplx b, const Jet& a) { return Jet(a.order(), b) - a; }
    friend Jet operator-(Jet a, cplx b) { return a += -b; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check(b);
        Jet r(a.order());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; i + j < a.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        return r;
    }

    /// 1/a by the recursion sum_j a_j r_{k-j} = [k == 0].
    friend Jet reciprocal(const Jet& a) {
        if (a.c_[0] == cplx(0.0)) throw DomainError("jet reciprocal of a series vanishing at 0");
        Jet r(a.order());
        r.c_[0] = 1.0 / a.c_[0];
        for (std::size_t k = 1; k < a.c_.size(); ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j) acc += a.c_[j] * r.c_[k - j];
            r.c_[k] = -acc / a.c_[0];
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

private:
    void check(const Jet& o) const {
        if (o.c_.size() != c_.size()) throw DomainError("jets of different order");
    }
    std::vector<cplx> c_;
};

}  // namespace cuspdrift
