#pragma once

// Synthetic scattering families phi(s, eps) = prod_k (s - (1 - rho_k(eps))) / (s - rho_k(eps))
// with polynomial pole trajectories, and the contour machinery that follows
// the weighted mean of the singular points splitting from s_j.
//
// With a pole rho = s_j - delta inside B(s_j, u), the conjugate partner puts
// a zero at 1 - conj(rho) = s_j + conj(delta), so
//   -(1/2 pi i) int_{dB} (s - s_j) phi'/phi ds = 2 Re(rho - s_j).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cuspdrift/eisenstein.hpp"
#include "cuspdrift/error.hpp"
#include "cuspdrift/jet.hpp"
#include "cuspdrift/quadrature.hpp"

namespace cuspdrift {

/// rho(eps) = sum_k coeffs[k] eps^k.
struct PoleTrajectory {
    std::vector<cplx> coeffs;

    cplx at(double eps) const {
        cplx acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * eps + *it;
        return acc;
    }
    Jet jet(std::size_t order) const { return Jet::polynomial(coeffs, order); }
    std::string str() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < coeffs.size(); ++k) os << (k ? " + " : "") << coeffs[k] << " eps^" << k;
        return os.str();
    }
};

/// A branch that stays on the critical line: s(eps) = center + i * sum_k coeffs[k] eps^k.
struct CuspidalBranch {
    cplx center;
    std::vector<double> coeffs;

    cplx at(double eps) const {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * eps + *it;
        return center + cplx(0.0, acc);
    }
};

struct CuspidalBranchSet {
    std::vector<CuspidalBranch> branches;
};

class SyntheticScatteringFamily {
public:
    SyntheticScatteringFamily(std::vector<PoleTrajectory> poles, CuspidalBranchSet branches)
        : poles_(std::move(poles)), branches_(std::move(branches)) {}

    const std::vector<PoleTrajectory>& trajectories() const { return poles_; }
    const CuspidalBranchSet& branches() const { return branches_; }

    struct Singularities {
        std::vector<cplx> zeros, poles;
        std::vector<int> zero_owner, pole_owner;  // trajectory index
    };

    /// Zeros 1 - rho_k and poles rho_k at eps, with coincident zero/pole pairs removed.
    Singularities singularities(double eps) const {
        Singularities out;
        std::vector<cplx> z, p;
        for (const auto& t : poles_) {
            const cplx r = t.at(eps);
            p.push_back(r);
            z.push_back(1.0 - r);
        }
        std::vector<bool> zused(z.size(), false), pused(p.size(), false);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < z.size(); ++j)
                if (!zused[j] && std::abs(z[j] - p[i]) <= 1e-14 * (1.0 + std::abs(p[i]))) {
                    zused[j] = pused[i] = true;
                    break;
                }
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!pused[i]) {
                out.poles.push_back(p[i]);
                out.pole_owner.push_back(int(i));
            }
        for (std::size_t j = 0; j < z.size(); ++j)
            if (!zused[j]) {
                out.zeros.push_back(z[j]);
                out.zero_owner.push_back(int(j));
            }
        return out;
    }

    cplx phi(cplx s, double eps) const {
        const auto sg = singularities(eps);
        cplx acc = 1.0;
        for (std::size_t k = 0; k < std::max(sg.zeros.size(), sg.poles.size()); ++k) {
            if (k < sg.zeros.size()) acc *= s - sg.zeros[k];
            if (k < sg.poles.size()) acc /= s - sg.poles[k];
        }
        return acc;
    }

    /// d/ds log phi(s, eps).
    cplx logderiv(cplx s, double eps) const {
        const auto sg = singularities(eps);
        cplx acc = 0.0;
        for (cplx z : sg.zeros) acc += 1.0 / (s - z);
        for (cplx p : sg.poles) acc -= 1.0 / (s - p);
        return acc;
    }

    cplx dphi(cplx s, double eps) const { return phi(s, eps) * logderiv(s, eps); }

    /// Taylor jets in eps at fixed s (s away from every rho_k(0)).
    Jet phi_jet(cplx s, std::size_t order) const {
        Jet acc(order, 1.0);
        for (const auto& t : poles_) {
            const Jet r = t.jet(order);
            acc = acc * ((s - 1.0) + r) / (s - r);
        }
        return acc;
    }
    Jet logderiv_jet(cplx s, std::size_t order) const {
        Jet acc(order);
        for (const auto& t : poles_) {
            const Jet r = t.jet(order);
            acc += reciprocal((s - 1.0) + r) - reciprocal(s - r);
        }
        return acc;
    }
    Jet dphi_jet(cplx s, std::size_t order) const { return phi_jet(s, order) * logderiv_jet(s, order); }

private:
    std::vector<PoleTrajectory> poles_;
    CuspidalBranchSet branches_;
};

/// Checks conjugation closure of the trajectory multiset, Re rho_k(0) <= 1/2
/// and that branches start at their centre on the critical line.
inline SyntheticScatteringFamily build_family(std::vector<PoleTrajectory> poles, CuspidalBranchSet branches = {}) {
    const double tol = 1e-12;
    auto same = [&](const PoleTrajectory& a, const PoleTrajectory& b) {
        const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
        for (std::size_t k = 0; k < n; ++k) {
            const cplx x = k < a.coeffs.size() ? a.coeffs[k] : cplx(0.0);
            const cplx y = k < b.coeffs.size() ? b.coeffs[k] : cplx(0.0);
            if (std::abs(x - y) > tol * (1.0 + std::abs(x))) return false;
        }
        return true;
    };
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (poles[i].coeffs.empty()) throw DomainError(detail::concat("trajectory ", i, " has no coefficients"));
        if (poles[i].at(0.0).real() > 0.5 + tol)
            throw DomainError(detail::concat("trajectory ", i, " (", poles[i].str(), ") starts right of the critical line"));
        if (used[i]) continue;
        PoleTrajectory c = poles[i];
        for (auto& v : c.coeffs) v = std::conj(v);
        if (same(c, poles[i])) {
            used[i] = true;
            continue;
        }
        bool found = false;
        for (std::size_t j = 0; j < poles.size() && !found; ++j)
            if (j != i && !used[j] && same(c, poles[j])) {
                used[i] = used[j] = true;
                found = true;
            }
        if (!found)
            throw DomainError(detail::concat("trajectory ", i, " (", poles[i].str(),
                                             ") has no conjugate partner; phi(s) = conj phi(conj s) fails"));
    }
    for (std::size_t i = 0; i < branches.branches.size(); ++i) {
        const auto& b = branches.branches[i];
        if (std::abs(b.center.real() - 0.5) > tol)
            throw DomainError(detail::concat("cuspidal branch ", i, " is not centred on Re s = 1/2"));
        if (!b.coeffs.empty() && b.coeffs[0] != 0.0)
            throw DomainError(detail::concat("cuspidal branch ", i, " does not start at its centre"));
    }
    return SyntheticScatteringFamily(std::move(poles), std::move(branches));
}

struct ContourResult {
    cplx center;
    double radius = 0.0;
    cplx value;  // full circle: 2m Re(s_hat - s_j) as complex integral; half circle: m (s_hat - s_j)
    int multiplicity = 0;
    double quadrature_error = 0.0;

    double mean_shift_re(bool full_circle = true) const {
        return full_circle ? value.real() / (2.0 * multiplicity) : value.real() / multiplicity;
    }
};

namespace detail {

inline bool near(cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

inline int cluster_multiplicity(const SyntheticScatteringFamily& fam, cplx sj) {
    int m = 0;
    for (const auto& t : fam.trajectories())
        if (near(t.at(0.0), sj)) ++m;
    for (const auto& b : fam.branches().branches)
        if (near(b.center, sj)) ++m;
    return m;
}

// Singularities at eps inside B(sj, u) must belong to the cluster: poles of
// trajectories starting at sj, zeros of trajectories starting at 1 - sj.
// Anything within 0.01 u of the arc is rejected.
inline void check_contour(const SyntheticScatteringFamily& fam, cplx sj, double u, double eps, bool left_arc_only) {
    const auto sg = fam.singularities(eps);
    auto on_arc = [&](cplx w) {
        if (!left_arc_only) return true;
        return w.real() <= sj.real() + 0.01 * u;
    };
    auto check = [&](cplx w, int owner, bool is_pole) {
        const double d = std::abs(w - sj);
        if (std::abs(d - u) < 0.01 * u && on_arc(w))
            throw DomainError(concat(is_pole ? "pole " : "zero ", w, " lies within 0.01 u of the contour |s - ", sj,
                                     "| = ", u, "; change the radius"));
        if (d < u) {
            const cplx start = fam.trajectories()[std::size_t(owner)].at(0.0);
            const bool member = is_pole ? near(start, sj) : near(1.0 - start, sj);
            if (!member)
                throw DomainError(concat("foreign ", is_pole ? "pole " : "zero ", w, " inside B(", sj, ", ", u,
                                         "); reduce the radius"));
        }
    };
    for (std::size_t k = 0; k < sg.poles.size(); ++k) check(sg.poles[k], sg.pole_owner[k], true);
    for (std::size_t k = 0; k < sg.zeros.size(); ++k) check(sg.zeros[k], sg.zero_owner[k], false);
}

}  // namespace detail

/// Half the distance from sj to the nearest singularity of phi(., 0) not at sj.
inline double default_radius(const SyntheticScatteringFamily& fam, cplx sj) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : fam.trajectories()) {
        const cplx r = t.at(0.0);
        if (!detail::near(r, sj)) best = std::min(best, std::abs(r - sj));
        if (!detail::near(1.0 - r, sj)) best = std::min(best, std::abs(1.0 - r - sj));
    }
    return std::isfinite(best) ? 0.5 * best : 1.0;
}

/// -(1/2 pi i) int_{|s - sj| = u} (s - sj) phi'/phi ds = 2m Re(s_hat - sj).
inline ContourResult contour_full_circle(const SyntheticScatteringFamily& fam, cplx sj, double u, double eps,
                                         double tol = 1e-14) {
    if (!(u > 0.0)) throw DomainError("contour radius must be positive");
    const int m = detail::cluster_multiplicity(fam, sj);
    if (m == 0) throw DomainError(detail::concat("no singular point of the model starts at ", sj));
    detail::check_contour(fam, sj, u, eps, false);
    auto f = [&](double th) {
        const cplx e = std::polar(1.0, th);
        const cplx s = sj + u * e;
        return -(u * e) * fam.logderiv(s, eps) * (u * e) / (2.0 * kPi);
    };
    const auto r = quad::periodic_trapezoid(f, tol, 64, 1 << 20);
    return {sj, u, r.value, m, r.error};
}

/// m (s_hat - sj) = -(1/2 pi i) int_Lambda (s - sj) phi'/phi ds + sum_C (s_C(eps) - sj),
/// Lambda = left half-circle followed by the segment [sj - iu, sj + iu].
inline ContourResult contour_half_circle(const SyntheticScatteringFamily& fam, const CuspidalBranchSet& branches,
                                         cplx sj, double u, double eps, double tol = 1e-14) {
    if (!(u > 0.0)) throw DomainError("contour radius must be positive");
    if (std::abs(sj.real() - 0.5) > 1e-12) throw DomainError("half-circle contour needs Re s_j = 1/2");
    int m = 0;
    for (const auto& t : fam.trajectories())
        if (detail::near(t.at(0.0), sj)) ++m;
    for (const auto& b : branches.branches)
        if (detail::near(b.center, sj)) ++m;
    if (m == 0) throw DomainError(detail::concat("no singular point of the model starts at ", sj));
    detail::check_contour(fam, sj, u, eps, true);
    const auto sg = fam.singularities(eps);
    for (cplx p : sg.poles)
        if (std::abs(p.real() - 0.5) < 1e-15 && std::abs(p.imag() - sj.imag()) <= u)
            throw DomainError(detail::concat("pole ", p, " on the critical-line segment of the contour"));
    auto arc = [&](double th) {
        const cplx e = std::polar(1.0, th);
        const cplx s = sj + u * e;
        // ds = i u e dth
        return -(u * e) * fam.logderiv(s, eps) * cplx(0.0, 1.0) * (u * e) / cplx(0.0, 2.0 * kPi);
    };
    auto seg = [&](double t) {
        const cplx s = sj + cplx(0.0, t);
        return -cplx(0.0, t) * fam.logderiv(s, eps) * cplx(0.0, 1.0) / cplx(0.0, 2.0 * kPi);
    };
    const auto ra = quad::adaptive<cplx>(arc, kPi / 2.0, 3.0 * kPi / 2.0, tol, 0.0, 20000);
    const auto rs = quad::adaptive<cplx>(seg, -u, u, tol, 0.0, 20000);
    cplx value = ra.value + rs.value;
    for (const auto& b : branches.branches)
        if (detail::near(b.center, sj)) value += b.at(eps) - sj;
    return {sj, u, value, m, ra.error + rs.error};
}

struct WindingNumber {
    cplx integral;       // (1/2 pi i) int phi'/phi ds
    int zeros_minus_poles = 0;  // from the model
};

inline WindingNumber winding_number(const SyntheticScatteringFamily& fam, cplx center, double u, double eps) {
    const auto sg = fam.singularities(eps);
    WindingNumber out;
    for (cplx z : sg.zeros) {
        if (std::abs(std::abs(z - center) - u) < 1e-9 * u) throw DomainError("zero on the contour");
        if (std::abs(z - center) < u) ++out.zeros_minus_poles;
    }
    for (cplx p : sg.poles) {
        if (std::abs(std::abs(p - center) - u) < 1e-9 * u) throw DomainError("pole on the contour");
        if (std::abs(p - center) < u) --out.zeros_minus_poles;
    }
    auto f = [&](double th) {
        const cplx e = std::polar(1.0, th);
        return fam.logderiv(center + u * e, eps) * (u * e) / (2.0 * kPi);
    };
    out.integral = quad::periodic_trapezoid(f, 1e-13, 64, 1 << 20).value;
    return out;
}

// --- eps-derivatives ---------------------------------------------------------

class RichardsonError : public NumericalError {
public:
    RichardsonError(const std::string& what, std::vector<std::vector<double>> table)
        : NumericalError(what), table_(std::move(table)) {}
    const std::vector<std::vector<double>>& table() const { return table_; }

private:
    std::vector<std::vector<double>> table_;
};

struct DerivativeEstimate {
    int order = 0;
    double value = 0.0;
    double error = 0.0;
    std::vector<std::vector<double>> table;  // Richardson tableau, rows by step
};

/// d^k/deps^k g(0) for k = 0..max_order by central differences
///   h^{-k} sum_j (-1)^j C(k, j) g((k/2 - j) h)
/// (error series in h^2) and Richardson extrapolation over `steps`.
/// `noise` is the absolute accuracy of one evaluation of g.
inline std::vector<DerivativeEstimate> eps_derivatives(const std::function<double(double)>& g, int max_order,
                                                       const std::vector<double>& steps = {0.1, 0.05, 0.025, 0.0125},
                                                       double tol = 1e-4, double noise = 1e-15) {
    if (max_order < 0) throw DomainError("derivative order must be >= 0");
    if (steps.empty()) throw DomainError("step schedule is empty");
    for (std::size_t i = 1; i < steps.size(); ++i)
        if (!(steps[i] < steps[i - 1] && steps[i] > 0.0)) throw DomainError("steps must decrease and stay positive");
    std::map<double, double> cache;
    auto eval = [&](double e) {
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
        return cache[e] = g(e);
    };
    std::vector<DerivativeEstimate> out;
    for (int k = 0; k <= max_order; ++k) {
        DerivativeEstimate d;
        d.order = k;
        const std::size_t L = steps.size();
        std::vector<std::vector<double>> T(L);
        for (std::size_t i = 0; i < L; ++i) {
            const double h = steps[i];
            double acc = 0.0, binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                acc += ((j % 2) ? -binom : binom) * eval((0.5 * k - j) * h);
                binom = binom * double(k - j) / double(j + 1);
            }
            T[i].push_back(acc / std::pow(h, k));
            for (std::size_t l = 1; l <= i; ++l) {
                const double r = std::pow(steps[i - 1] / steps[i], 2.0 * double(l));
                T[i].push_back((r * T[i][l - 1] - T[i - 1][l - 1]) / (r - 1.0));
            }
        }
        d.value = T[L - 1][L - 1];
        double err = 0.0;
        if (L >= 2) err = std::max(std::abs(T[L - 1][L - 1] - T[L - 1][L - 2]), std::abs(T[L - 1][L - 1] - T[L - 2][L - 2]));
        // Rounding in the finest stencil, amplified by the extrapolation weights.
        double amp = 1.0;
        for (std::size_t l = 1; l < L; ++l) {
            const double r = std::pow(steps[l - 1] / steps[l], 2.0 * double(l));
            amp *= (r + 1.0) / (r - 1.0);
        }
        err += amp * noise * std::pow(2.0, k) / std::pow(steps.back(), k);
        d.error = err;
        d.table = T;
        if (!(err <= tol * std::max(1.0, std::abs(d.value))) || !std::isfinite(d.value)) {
            std::ostringstream os;
            os << "Richardson table for derivative order " << k << " did not converge (error " << err << "):";
            for (const auto& row : T) {
                os << "\n ";
                for (double v : row) os << ' ' << v;
            }
            throw RichardsonError(os.str(), T);
        }
        out.push_back(std::move(d));
    }
    return out;
}

/// Re s_hat(eps) - Re s_j from the full-circle contour.
inline std::function<double(double)> mean_shift_routine(const SyntheticScatteringFamily& fam, cplx sj, double u) {
    return [&fam, sj, u](double eps) { return contour_full_circle(fam, sj, u, eps).mean_shift_re(); };
}

/// Derivatives of 1/phi in eps from those of phi:
///   sum_k C(m, k) (1/phi)^{(k)} phi^{(m-k)} = 0 for m >= 1.
inline std::vector<cplx> leibniz_phi_inverse(const std::vector<cplx>& d) {
    if (d.empty()) throw DomainError("leibniz_phi_inverse needs phi^(0)");
    if (d[0] == cplx(0.0)) throw DomainError("phi(s, 0) = 0; 1/phi has no expansion");
    std::vector<cplx> inv(d.size());
    inv[0] = 1.0 / d[0];
    for (std::size_t m = 1; m < d.size(); ++m) {
        cplx acc = 0.0;
        double binom = 1.0;  // C(m, k)
        for (std::size_t k = 0; k < m; ++k) {
            acc += binom * inv[k] * d[m - k];
            binom = binom * double(m - k) / double(k + 1);
        }
        inv[m] = -acc / d[0];
    }
    return inv;
}

// --- theorem chain -------------------------------------------------------------

struct TheoremChainReport {
    int n = 1;
    int multiplicity = 1;
    double prescribed = 0.0;           // Re s_hat^{(2n)}(0)
    double stage_eps_derivative = 0.0;  // (i) Richardson estimate
    double stage_eps_error = 0.0;
    std::vector<double> lower_orders;   // Re s_hat^{(k)}(0), k < 2n
    double stage_leibniz = 0.0;         // (ii) contour of the Leibniz expansion / (2m)
    double leibniz_term_mismatch = 0.0; // max |direct jet - Leibniz sum| on the contour
    double stage_residue = 0.0;         // (iii) res phi^{(2n)}(s_j) / (2m phi(s_j, 0))
    double residue_norm_sq = 0.0;       // implied ||res D^n||^2
    double binomial_prefactor = 0.0;    // -(1/2) C(2, 1) at n = 1, -(1/(2m)) C(2n, n) generally
    double fermi_check = 0.0;           // fermi_shift([2i], 1)
};

/// Model with prescribed Re s_hat^{(2n)}(0) = R at s_j = 1/2 + 3i:
///   rho(eps) = s_j + 0.3 i eps^2 + (R/(2n)!) eps^{2n}  (n >= 2),
///   rho(eps) = s_j + (R/2 + 0.3 i) eps^2                (n = 1),
/// with its conjugate partner, plus a real pole at 0.25 and a pair at 0.35 +- 1.2i
/// so that phi(s_j, 0) != 1.
inline SyntheticScatteringFamily chain_model(int n, double R, cplx sj = cplx(0.5, 3.0)) {
    if (n < 1 || n > 4) throw DomainError("chain_model supports 1 <= n <= 4");
    double fact = 1.0;
    for (int k = 2; k <= 2 * n; ++k) fact *= k;
    std::vector<cplx> c(std::size_t(2 * n) + 1, 0.0);
    c[0] = sj;
    c[2] = cplx(0.0, 0.3);
    c[std::size_t(2 * n)] += R / fact;
    PoleTrajectory p{c}, q{c};
    for (auto& v : q.coeffs) v = std::conj(v);
    return build_family({p, q, PoleTrajectory{{0.25}}, PoleTrajectory{{cplx(0.35, 1.2)}},
                         PoleTrajectory{{cplx(0.35, -1.2)}}});
}

inline TheoremChainReport theorem_chain_check(const SyntheticScatteringFamily& fam, cplx sj, int n, double prescribed,
                                              std::vector<double> steps = {0.1, 0.05, 0.025, 0.0125}) {
    if (n < 1) throw DomainError("theorem_chain_check needs n >= 1");
    TheoremChainReport rep;
    rep.n = n;
    rep.prescribed = prescribed;
    const double u = default_radius(fam, sj);
    const int m = detail::cluster_multiplicity(fam, sj);
    rep.multiplicity = m;
    const std::size_t N = std::size_t(2 * n);

    // (i)
    const auto ds = eps_derivatives(mean_shift_routine(fam, sj, u), 2 * n, steps, 1e-4);
    rep.stage_eps_derivative = ds.back().value;
    rep.stage_eps_error = ds.back().error;
    for (int k = 0; k < 2 * n; ++k) rep.lower_orders.push_back(ds[std::size_t(k)].value);

    // (ii) and (iii) on the circle; jets give exact eps-derivatives at each node.
    double mismatch = 0.0;
    auto leibniz = [&](double th) {
        const cplx e = std::polar(1.0, th);
        const cplx s = sj + u * e;
        const Jet ph = fam.phi_jet(s, N), dph = fam.dphi_jet(s, N);
        std::vector<cplx> pd(N + 1);
        for (std::size_t k = 0; k <= N; ++k) pd[k] = ph.derivative(k);
        const auto inv = leibniz_phi_inverse(pd);
        cplx sum = 0.0;
        double binom = 1.0;
        for (std::size_t k = 0; k <= N; ++k) {
            sum += binom * dph.derivative(k) * inv[N - k];
            binom = binom * double(N - k) / double(k + 1);
        }
        const cplx direct = fam.logderiv_jet(s, N).derivative(N);
        mismatch = std::max(mismatch, std::abs(direct - sum));
        return -(u * e) * sum * (u * e) / (2.0 * kPi);
    };
    rep.stage_leibniz = quad::periodic_trapezoid(leibniz, 1e-12, 64, 1 << 18).value.real() / (2.0 * m);
    rep.leibniz_term_mismatch = mismatch;

    auto residue = [&](double th) {
        const cplx e = std::polar(1.0, th);
        return fam.phi_jet(sj + u * e, N).derivative(N) * (u * e) / (2.0 * kPi);
    };
    const cplx res = quad::periodic_trapezoid(residue, 1e-12, 64, 1 << 18).value;
    const cplx phi0 = fam.phi(sj, 0.0);
    rep.stage_residue = (res / phi0).real() / (2.0 * m);

    double binom = 1.0;
    for (int k = 1; k <= n; ++k) binom = binom * double(n + k) / double(k);  // C(2n, n)
    rep.residue_norm_sq = -(res / phi0).real() / binom;
    rep.binomial_prefactor = -binom / (2.0 * m);
    rep.fermi_check = -(std::norm(cplx(0.0, 2.0))) / 4.0;
    return rep;
}

// --- Weyl trend ------------------------------------------------------------------

struct WeylTrend {
    double T = 0.0;
    double lambda = 0.0;
    int N_d = 0;  // includes lambda_0 = 0
    double M = 0.0;
    double main_term = 0.0;  // lambda / 12
    double ratio = 0.0;
};

/// (N_d(lambda) + M(T)) / (lambda/12) at lambda = 1/4 + T^2 for SL2(Z).
inline WeylTrend weyl_trend(const std::vector<double>& r_list, double T) {
    if (r_list.empty()) throw DomainError("weyl_trend needs a nonempty eigenvalue list");
    if (T < 0.0) throw DomainError("weyl_trend needs T >= 0");
    WeylTrend out;
    out.T = T;
    out.lambda = 0.25 + T * T;
    out.N_d = 1 + int(std::count_if(r_list.begin(), r_list.end(), [&](double r) { return r <= T; }));
    out.M = weyl_M(T).value;
    out.main_term = out.lambda / 12.0;
    out.ratio = (out.N_d + out.M) / out.main_term;
    return out;
}

}  // namespace cuspdrift
