#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cuspdrift/model_io.hpp"
#include "cuspdrift/tracker.hpp"

using namespace cuspdrift;

namespace {

const cplx sj(0.5, 3.0);

std::vector<PoleTrajectory> pair(std::vector<cplx> c) {
    PoleTrajectory p{c}, q{c};
    for (auto& v : q.coeffs) v = std::conj(v);
    return {p, q};
}

ModelDefinition model(const std::string& text) {
    std::istringstream in(text);
    return parse_model(in, "test");
}

std::size_t model_error_line(const std::string& text) {
    try {
        model(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
    return 999;
}

}  // namespace

TEST(Family, TrajectoriesAndBranches) {
    const PoleTrajectory t{{cplx(1.0, 0.0), cplx(0.0, 2.0), cplx(-1.0, 0.0)}};
    EXPECT_EQ(t.at(0.5), cplx(0.75, 1.0));
    const Jet j = t.jet(3);
    EXPECT_EQ(j.derivative(2), cplx(-2.0));
    EXPECT_EQ(j.derivative(3), cplx(0.0));
    const CuspidalBranch b{sj, {0.0, 0.5}};
    EXPECT_EQ(b.at(0.2), sj + cplx(0.0, 0.1));
}

TEST(Family, BuildValidation) {
    EXPECT_NO_THROW(build_family(pair({sj, 0.0, cplx(-0.2, -0.1)})));
    EXPECT_NO_THROW(build_family({PoleTrajectory{{0.25, -0.1}}}));
    EXPECT_THROW(build_family({PoleTrajectory{{sj}}}), DomainError);
    EXPECT_THROW(build_family(pair({cplx(0.7, 1.0)})), DomainError);
    EXPECT_THROW(build_family({PoleTrajectory{}}), DomainError);
    EXPECT_THROW(build_family(pair({sj}), {{CuspidalBranch{cplx(0.6, 3.0), {0.0, 1.0}}}}), DomainError);
    EXPECT_THROW(build_family(pair({sj}), {{CuspidalBranch{sj, {0.2, 1.0}}}}), DomainError);
}

TEST(Family, ScatteringSymmetries) {
    const auto fam = build_family(pair({sj, 0.0, cplx(-0.2, -0.1)}));
    for (double eps : {0.0, 0.1, 0.3})
        for (cplx s : {cplx(0.2, 1.0), cplx(1.3, -2.0), cplx(0.6, 3.5)}) {
            EXPECT_LT(std::abs(fam.phi(s, eps) * fam.phi(1.0 - s, eps) - 1.0), 1e-13);
            EXPECT_LT(std::abs(fam.phi(std::conj(s), eps) - std::conj(fam.phi(s, eps))), 1e-13);
        }
    for (double t : {0.0, 2.0, 5.0}) EXPECT_NEAR(std::abs(fam.phi(cplx(0.5, t), 0.2)), 1.0, 1e-13);
    // At eps = 0 the poles sit on the line and cancel their zeros.
    EXPECT_LT(std::abs(fam.phi(cplx(0.9, 1.0), 0.0) - 1.0), 1e-15);
    EXPECT_TRUE(fam.singularities(0.0).poles.empty());
    EXPECT_EQ(fam.singularities(0.1).poles.size(), 2u);
}

TEST(Family, DerivativesAgainstFiniteDifferences) {
    const auto fam = build_family(pair({cplx(0.4, 3.0), cplx(0.0, 0.1), cplx(-0.2, -0.1)}));
    const cplx s(0.8, 2.5);
    const double h = 1e-5;
    const double eps = 0.0;
    const cplx fd_s = (fam.phi(s + h, eps) - fam.phi(s - h, eps)) / (2.0 * h);
    EXPECT_LT(std::abs(fam.dphi(s, eps) - fd_s), 1e-8);
    const Jet pj = fam.phi_jet(s, 4), lj = fam.logderiv_jet(s, 4);
    const double he = 1e-3;
    const cplx d1 = (fam.phi(s, he) - fam.phi(s, -he)) / (2.0 * he);
    const cplx d2 = (fam.phi(s, he) - 2.0 * fam.phi(s, 0.0) + fam.phi(s, -he)) / (he * he);
    EXPECT_LT(std::abs(pj.derivative(0) - fam.phi(s, 0.0)), 1e-14);
    EXPECT_LT(std::abs(pj.derivative(1) - d1), 1e-6);
    EXPECT_LT(std::abs(pj.derivative(2) - d2), 1e-5);
    const cplx l1 = (fam.logderiv(s, he) - fam.logderiv(s, -he)) / (2.0 * he);
    EXPECT_LT(std::abs(lj.derivative(1) - l1), 1e-6);
    const cplx dd1 = (fam.dphi(s, he) - fam.dphi(s, -he)) / (2.0 * he);
    EXPECT_LT(std::abs(fam.dphi_jet(s, 4).derivative(1) - dd1), 1e-6);
}

TEST(Jet, ArithmeticMatchesSeries) {
    const Jet e = Jet::variable(6);
    const Jet geo = reciprocal(1.0 - e);  // 1/(1 - eps)
    for (std::size_t k = 0; k <= 6; ++k) EXPECT_EQ(geo.coeff(k), cplx(1.0));
    const Jet sq = (1.0 + e) * (1.0 + e);
    EXPECT_EQ(sq.coeff(1), cplx(2.0));
    EXPECT_EQ(sq.coeff(2), cplx(1.0));
    EXPECT_EQ(sq.coeff(3), cplx(0.0));
    EXPECT_EQ(geo.derivative(3), cplx(6.0));
    const Jet q = (2.0 + e) / (2.0 + e);
    EXPECT_LT(std::abs(q.coeff(0) - 1.0), 1e-15);
    for (std::size_t k = 1; k <= 6; ++k) EXPECT_LT(std::abs(q.coeff(k)), 1e-15);
}

TEST(Contours, FullCircleEqualsTwiceRealShift) {
    const auto traj = pair({sj, 0.0, cplx(-0.2, -0.1)});
    const auto fam = build_family(traj);
    const double u = default_radius(fam, sj);
    EXPECT_NEAR(u, 3.0, 1e-15);  // half the distance to the partner at 1/2 - 3i
    for (double eps : {0.05, 0.2, 0.5}) {
        const auto r = contour_full_circle(fam, sj, u, eps);
        EXPECT_EQ(r.multiplicity, 1);
        EXPECT_NEAR(r.value.real(), 2.0 * (traj[0].at(eps) - sj).real(), 1e-12) << eps;
        EXPECT_NEAR(r.mean_shift_re(), (traj[0].at(eps) - sj).real(), 1e-12);
        EXPECT_LT(r.quadrature_error, 1e-12);
    }
    EXPECT_THROW(contour_full_circle(fam, sj, 0.0, 0.1), DomainError);
    EXPECT_THROW(contour_full_circle(fam, cplx(0.5, 7.0), 0.5, 0.1), DomainError);
    // Pole on the contour: rho(1) = sj - 0.2 - 0.1i lies at distance 0.2236.
    EXPECT_THROW(contour_full_circle(fam, sj, std::abs(cplx(-0.2, -0.1)), 1.0), DomainError);
    // The partner's pole enters the disc.
    EXPECT_THROW(contour_full_circle(fam, sj, 7.0, 0.1), DomainError);
}

TEST(Contours, HalfCircleWithBranchAndCancellation) {
    const CuspidalBranchSet br{{CuspidalBranch{sj, {0.0, 0.5}}}};
    const auto traj = pair({sj, 0.0, cplx(-0.2, -0.1)});
    const auto fam = build_family(traj, br);
    const double u = default_radius(fam, sj);
    for (double eps : {0.05, 0.1}) {
        const auto half = contour_half_circle(fam, br, sj, u, eps);
        EXPECT_EQ(half.multiplicity, 2);
        // m (s_hat - sj) = (rho - sj) + (branch - sj)
        const cplx expect = (traj[0].at(eps) - sj) + (br.branches[0].at(eps) - sj);
        EXPECT_LT(std::abs(half.value - expect), 1e-10) << eps;
        const auto full = contour_full_circle(fam, sj, u, eps);
        EXPECT_LT(std::abs(full.value.real() - 2.0 * half.value.real()), 1e-10);
    }
    EXPECT_THROW(contour_half_circle(fam, br, cplx(0.4, 3.0), u, 0.1), DomainError);
}

TEST(Contours, WindingNumberCountsZerosMinusPoles) {
    const auto fam = build_family(pair({sj, 0.0, cplx(-0.2, -0.1)}));
    for (double eps : {0.1, 0.5}) {
        const auto w = winding_number(fam, sj, 1.0, eps);
        EXPECT_EQ(w.zeros_minus_poles, 0);  // one pole and the partner's zero
        EXPECT_LT(std::abs(w.integral - double(w.zeros_minus_poles)), 1e-10);
    }
    // A disc around the pole alone.
    const double eps = 0.5;
    const cplx pole = sj + cplx(-0.2, -0.1) * eps * eps;
    const auto w = winding_number(fam, pole, 0.01, eps);
    EXPECT_EQ(w.zeros_minus_poles, -1);
    EXPECT_LT(std::abs(w.integral + 1.0), 1e-10);
}

TEST(Richardson, DerivativesOfKnownFunctions) {
    const auto d = eps_derivatives([](double e) { return std::sin(e) + 0.5 * e * e; }, 4);
    const double expect[] = {0.0, 1.0, 1.0, -1.0, 0.0};
    for (int k = 0; k <= 4; ++k) {
        EXPECT_NEAR(d[k].value, expect[k], std::max(d[k].error, 1e-12)) << k;
        EXPECT_EQ(d[k].order, k);
    }
    EXPECT_LT(d[2].error, 1e-8);
    EXPECT_THROW(eps_derivatives([](double e) { return std::abs(e); }, 2), RichardsonError);
    try {
        eps_derivatives([](double e) { return std::abs(e); }, 2);
    } catch (const RichardsonError& e) {
        EXPECT_EQ(e.table().size(), 4u);
    }
    EXPECT_THROW(eps_derivatives([](double) { return 0.0; }, 1, {0.1, 0.2}), DomainError);
    EXPECT_THROW(eps_derivatives([](double) { return 0.0; }, -1), DomainError);
}

TEST(Richardson, ClosedFormModels) {
    {
        const auto fam = build_family(pair({sj, 0.0, cplx(-0.2, -0.1)}));
        const auto d = eps_derivatives(mean_shift_routine(fam, sj, default_radius(fam, sj)), 3);
        EXPECT_NEAR(d[2].value, -0.4, 1e-6);
        EXPECT_LE(std::abs(d[1].value), d[1].error);
        EXPECT_LE(std::abs(d[3].value), d[3].error);
    }
    {
        const auto fam = load_model(CUSPDRIFT_TEST_DATA "/quartic.model").family();
        const auto d = eps_derivatives(mean_shift_routine(fam, sj, default_radius(fam, sj)), 4);
        EXPECT_NEAR(d[2].value, 0.0, 1e-4);
        EXPECT_NEAR(d[4].value, -1.2, 1e-4);
    }
}

// Oracle for (1/phi)^(k): finite differences of 1/phi, and closed forms.
TEST(Leibniz, InverseDerivatives) {
    auto inv = leibniz_phi_inverse({1.0, -1.0, 0.0, 0.0});  // phi = 1 - eps
    const double fact[] = {1.0, 1.0, 2.0, 6.0};
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(inv[k] - fact[k]), 0.0, 1e-15);
    const cplx a(0.3, -1.2);
    std::vector<cplx> d;
    for (int k = 0; k <= 5; ++k) d.push_back(std::pow(a, k));  // phi = e^{a eps}
    inv = leibniz_phi_inverse(d);
    for (int k = 0; k <= 5; ++k) EXPECT_LT(std::abs(inv[k] - std::pow(-a, k)), 1e-13) << k;

    auto phi = [](double e) { return std::exp(cplx(0.0, e)) * (2.0 + e * e) + cplx(e, 0.0); };
    const double h = 1e-3;
    std::vector<cplx> pd{phi(0.0), (phi(h) - phi(-h)) / (2.0 * h), (phi(h) - 2.0 * phi(0.0) + phi(-h)) / (h * h)};
    inv = leibniz_phi_inverse(pd);
    auto ip = [&](double e) { return 1.0 / phi(e); };
    EXPECT_LT(std::abs(inv[1] - (ip(h) - ip(-h)) / (2.0 * h)), 1e-5);
    EXPECT_LT(std::abs(inv[2] - (ip(h) - 2.0 * ip(0.0) + ip(-h)) / (h * h)), 1e-4);
    EXPECT_THROW(leibniz_phi_inverse({}), DomainError);
    EXPECT_THROW(leibniz_phi_inverse({0.0, 1.0}), DomainError);
}

TEST(TheoremChain, OrderOneAndTwo) {
    const auto r1 = theorem_chain_check(chain_model(1, -1.0), sj, 1, -1.0);
    EXPECT_EQ(r1.binomial_prefactor, -1.0);
    EXPECT_NEAR(r1.stage_eps_derivative, -1.0, 1e-6);
    EXPECT_NEAR(r1.stage_leibniz, -1.0, 1e-9);
    EXPECT_NEAR(r1.stage_residue, -1.0, 1e-9);
    EXPECT_NEAR(r1.residue_norm_sq, 1.0, 1e-9);
    EXPECT_EQ(r1.fermi_check, -1.0);
    EXPECT_LT(r1.leibniz_term_mismatch, 1e-8);

    const auto r2 = theorem_chain_check(chain_model(2, -0.7), sj, 2, -0.7);
    EXPECT_NEAR(r2.stage_eps_derivative, -0.7, 1e-4);
    EXPECT_NEAR(r2.stage_leibniz, -0.7, 1e-8);
    EXPECT_NEAR(r2.stage_residue, -0.7, 1e-8);
    EXPECT_NEAR(r2.binomial_prefactor, -3.0, 1e-15);
    ASSERT_EQ(r2.lower_orders.size(), 4u);
    EXPECT_NEAR(r2.lower_orders[2], 0.0, 1e-6);
    EXPECT_THROW(chain_model(5, 1.0), DomainError);
}

TEST(Weyl, TrendCounting) {
    const auto w = weyl_trend({9.5, 12.1, 16.0}, 15.0);
    EXPECT_EQ(w.N_d, 3);
    EXPECT_DOUBLE_EQ(w.lambda, 225.25);
    EXPECT_DOUBLE_EQ(w.main_term, 225.25 / 12.0);
    EXPECT_DOUBLE_EQ(w.ratio, (w.N_d + w.M) / w.main_term);
    EXPECT_NEAR(w.M, weyl_M(15.0).value, 0.0);
    EXPECT_THROW(weyl_trend({}, 1.0), DomainError);
    EXPECT_THROW(weyl_trend({1.0}, -1.0), DomainError);
}

TEST(ModelIO, ParsesShippedModels) {
    for (const char* name : {"dissolve", "quartic", "mixed", "double_cluster"}) {
        const auto m = load_model(std::string(CUSPDRIFT_TEST_DATA) + "/" + name + ".model");
        EXPECT_NO_THROW(m.family()) << name;
    }
    const auto mixed = load_model(CUSPDRIFT_TEST_DATA "/mixed.model");
    ASSERT_EQ(mixed.branches.branches.size(), 1u);
    EXPECT_EQ(mixed.branches.branches[0].coeffs, (std::vector<double>{0.0, 0.5}));
    EXPECT_EQ(load_model(CUSPDRIFT_TEST_DATA "/double_cluster.model").poles.size(), 4u);
}

TEST(ModelIO, Errors) {
    EXPECT_EQ(model_error_line("rho 0.5 3.0\nrho 0.5 -3.0 1\n"), 2u);
    EXPECT_EQ(model_error_line("# c\nbranch 0.5 3.0\n"), 2u);
    EXPECT_EQ(model_error_line("pole 0.5 3.0\n"), 1u);
    EXPECT_EQ(model_error_line("rho 0.5 x\n"), 1u);
    EXPECT_EQ(model_error_line("# nothing\n\n"), 0u);
    const auto m = model("rho 0.25 0   # real pole\n");
    ASSERT_EQ(m.poles.size(), 1u);
    EXPECT_EQ(m.poles[0].coeffs[0], cplx(0.25, 0.0));
    EXPECT_THROW(load_model("/nonexistent.model"), ParseError);
}

TEST(ModelIO, EigenvalueLists) {
    const auto ev = load_eigenvalues(CUSPDRIFT_TEST_DATA "/level1_eigenvalues.txt");
    ASSERT_EQ(ev.r.size(), 4u);
    EXPECT_NEAR(ev.r[0], 9.53369526135, 1e-10);
    auto parse = [](const std::string& t) {
        std::istringstream in(t);
        return parse_eigenvalues(in);
    };
    EXPECT_THROW(parse("9.5\n"), ParseError);
    EXPECT_THROW(parse("# type=coeffs\n9.5\n"), ParseError);
    EXPECT_THROW(parse("# type=eigenvalues\n-1\n"), ParseError);
    EXPECT_THROW(parse("# type=eigenvalues level=11\n9.5\n"), CapabilityError);
    EXPECT_EQ(parse("# type=eigenvalues\n\n9.5\n12\n").r.size(), 2u);
}
