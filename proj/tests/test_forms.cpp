#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cuspdrift/coeff_io.hpp"
#include "cuspdrift/forms.hpp"

using namespace cuspdrift;

namespace {

const HolCuspForm& f11() {
    static const HolCuspForm f = eta_product_coeffs(11, 12000);
    return f;
}

// q prod (1-q^n)^2 (1-q^{11n})^2 by repeated multiplication by (1 - q^k).
std::vector<long long> eta_oracle(int M) {
    std::vector<long long> p(M, 0);  // coefficient of q^{j+1}
    p[0] = 1;
    auto mul = [&](int k) {
        for (int j = M - 1; j >= k; --j) p[j] -= p[j - k];
    };
    for (int k = 1; k < M; ++k) {
        mul(k);
        mul(k);
        if (11 * k < M) {
            mul(11 * k);
            mul(11 * k);
        }
    }
    return p;
}

LoadedForm parse(const std::string& text) {
    std::istringstream in(text);
    return parse_coefficients(in, "test");
}

std::size_t parse_error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
    return 999;
}

// Period lattice of X_0(11) for the differential 2 pi i f(z) dz.
const cplx kW1(1.26920930427955, 0.0);
const cplx kW2(0.634604652139776, 1.45881661693850);

double lattice_distance(cplx w) {
    // Solve w = m W1 + n W2 over the reals and measure the rounding.
    const double n = w.imag() / kW2.imag();
    const double m = (w.real() - n * kW2.real()) / kW1.real();
    return std::abs(w - std::round(m) * kW1 - std::round(n) * kW2);
}

}  // namespace

TEST(EtaProduct, MatchesDirectExpansion) {
    const auto oracle = eta_oracle(3000);
    for (int n = 1; n <= 3000; ++n) ASSERT_EQ(f11().coeff(n), cplx(double(oracle[n - 1]))) << n;
    EXPECT_EQ(f11().coeff(2), cplx(-2.0));
    EXPECT_EQ(f11().coeff(3), cplx(-1.0));
    EXPECT_EQ(f11().coeff(6), f11().coeff(2) * f11().coeff(3));
    EXPECT_EQ(f11().coeff(0), cplx(0.0));
    EXPECT_EQ(f11().coeff(12001), cplx(0.0));
}

TEST(EtaProduct, HeckeRelationsAndDeligneBound) {
    const auto& f = f11();
    auto a = [&](int n) { return f.coeff(n).real(); };
    for (int m = 2; m < 50; ++m)
        for (int n = 2; n < 50; ++n)
            if (std::gcd(m, n) == 1) EXPECT_EQ(a(m * n), a(m) * a(n)) << m << "," << n;
    for (int p : {2, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53}) {
        EXPECT_EQ(a(p * p), a(p) * a(p) - p) << p;
        EXPECT_LE(std::abs(a(p)), 2.0 * std::sqrt(double(p)));
    }
    EXPECT_EQ(a(11), 1.0);
    EXPECT_EQ(a(121), 1.0);
    EXPECT_THROW(eta_product_coeffs(13, 10), CapabilityError);
    EXPECT_THROW(eta_product_coeffs(11, 0), DomainError);
}

TEST(CoeffIO, ShippedFileMatchesGenerator) {
    const auto f = std::get<HolCuspForm>(load_coefficients(CUSPDRIFT_TEST_DATA "/11a.coeffs"));
    EXPECT_EQ(f.level, 11);
    ASSERT_GE(f.size(), 2000u);
    const auto g = eta_product_coeffs(11, int(f.size()));
    EXPECT_EQ(f.a, g.a);
}

TEST(CoeffIO, MaassFileHeader) {
    const auto u = std::get<MaassForm>(load_coefficients(CUSPDRIFT_TEST_DATA "/maass_level1_r9.5337.coeffs"));
    EXPECT_EQ(u.level, 1);
    EXPECT_EQ(u.parity, Parity::odd);
    EXPECT_NEAR(u.r, 9.53369526135355755, 1e-15);
    EXPECT_EQ(u.b[0], 1.0);
    EXPECT_FALSE(u.l2_normalized);
    EXPECT_EQ(u.coeff(-2), -u.coeff(2));
}

TEST(CoeffIO, ErrorsCarryLineNumbers) {
    const std::string head = "# type=holomorphic\n# level=11\n# weight=2\n";
    EXPECT_EQ(parse_error_line(head + "1 1\n3 -1\n"), 5u);
    EXPECT_EQ(parse_error_line(head + "1 1\n2 abc\n"), 5u);
    EXPECT_EQ(parse_error_line(head + "1 1 7\n"), 4u);
    EXPECT_EQ(parse_error_line(head + "1 1\n# level=3\n"), 5u);
    EXPECT_EQ(parse_error_line("# type=holomorphic\n# level=11\n# weight=4\n1 1\n"), 3u);
    EXPECT_EQ(parse_error_line("# type=maass\n# level=1\n# r=9.5\n# parity=both\n1 1\n"), 4u);
    EXPECT_EQ(parse_error_line("# type=maass\n# level=1\n# r=-1\n# parity=odd\n1 1\n"), 3u);
    EXPECT_EQ(parse_error_line("# type=theta\n# level=1\n1 1\n"), 1u);
    EXPECT_EQ(parse_error_line("# level=1\n1 1\n"), 0u);
    EXPECT_THROW(parse(head), ParseError);
    EXPECT_THROW(load_coefficients("/nonexistent/x.coeffs"), ParseError);
}

TEST(HolForm, AutomorphyUnderGamma0) {
    const auto& f = f11();
    for (const GroupElement& g : {GroupElement(1, 0, 11, 1), GroupElement(4, 1, 11, 3), GroupElement(2, -1, 11, -5)})
        for (cplx z : {cplx(-0.05, 0.12), cplx(0.2, 0.3)}) {
            const cplx w = g.apply(z);
            const cplx j = double(g.c()) * z + double(g.d());
            const cplx lhs = eval_form(f, w), rhs = j * j * eval_form(f, z);
            EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs))) << g.str() << " " << z;
        }
}

TEST(HolForm, TailEstimateBoundsTruncation) {
    const auto& f = f11();
    const cplx z(0.1, 0.02);
    const auto loose = eval_form_ex(f, z, 1e-6), tight = eval_form_ex(f, z, 1e-14);
    EXPECT_LE(std::abs(loose.value - tight.value), loose.tail + tight.tail);
    EXPECT_LT(loose.terms, tight.terms);
    EXPECT_THROW(eval_form(f, cplx(0.1, 1e-5)), NumericalError);
    EXPECT_THROW(eval_form(f, cplx(0.1, -1.0)), DomainError);
}

TEST(HolForm, AntiderivativeDerivativeIsForm) {
    const auto& f = f11();
    const double h = 1e-4;
    for (cplx z : {cplx(0.0, 0.2), cplx(0.3, 0.5), cplx(-0.4, 0.09)}) {
        const cplx fd = (eval_F(f, z + h) - eval_F(f, z - h)) / (2.0 * h);
        EXPECT_LT(std::abs(fd - eval_form(f, z)), 1e-6 * std::max(1.0, std::abs(eval_form(f, z)))) << z;
    }
}

// L(f, 1) = 2 sum a_n/n e^{-2 pi n / sqrt 11} = 2 Re(2 pi i F(i/sqrt 11)), and
// L(f, 1) / W1 = 1/5 for 11a.
TEST(HolForm, CentralValueFromAntiderivative) {
    const cplx F = eval_F(f11(), cplx(0.0, 1.0 / std::sqrt(11.0)));
    const double L1 = 2.0 * (2.0 * kPi * cplx(0.0, 1.0) * F).real();
    EXPECT_NEAR(L1, 0.253841860855911, 1e-13);
    EXPECT_NEAR(L1 / kW1.real(), 0.2, 1e-12);
}

TEST(ModularSymbol, PeriodsLieOnTheLattice) {
    const auto reps = coset_reps(GroupDescriptor(11), 300).reps;
    for (std::size_t i = 1; i < reps.size(); i += 37) {
        const auto p = period(f11(), reps[i]);
        EXPECT_LT(lattice_distance(2.0 * kPi * cplx(0.0, 1.0) * p.value), 1e-9) << reps[i].str();
        EXPECT_LT(p.error, 1e-10);
    }
    const auto m = modular_symbol(f11(), OneFormChoice::omega1(), GroupElement(4, 1, 11, 3));
    EXPECT_NEAR(m.im, -kW2.imag(), 1e-11);
    EXPECT_EQ(m.value().real(), 0.0);
    EXPECT_THROW(period(f11(), GroupElement(0, -1, 1, 0)), DomainError);
}

TEST(ModularSymbol, ParabolicAndAdditive) {
    const auto& f = f11();
    const auto o1 = OneFormChoice::omega1(), o2 = OneFormChoice::omega2();
    for (const auto& o : {o1, o2}) {
        EXPECT_LT(std::abs(modular_symbol(f, o, GroupElement::translation(5)).im), 1e-12);
        EXPECT_LT(std::abs(modular_symbol(f, o, GroupElement(1, 0, 33, 1)).im), 1e-10);
    }
    std::mt19937_64 rng(11);
    const auto reps = coset_reps(GroupDescriptor(11), 44).reps;
    std::uniform_int_distribution<std::size_t> pick(1, reps.size() - 1);
    for (int used = 0; used < 20;) {
        const auto g = reps[pick(rng)], h = reps[pick(rng)] * GroupElement::translation(-1);
        const auto gh = g * h;
        if (gh.c() == 0 || gh.c() > 550) continue;
        ++used;
        for (const auto& o : {o1, o2}) {
            const double lhs = modular_symbol(f, o, gh).im;
            const double rhs = modular_symbol(f, o, g).im + modular_symbol(f, o, h).im;
            EXPECT_LT(std::abs(lhs - rhs), 1e-9) << g.str() << " " << h.str();
        }
    }
}

TEST(ModularSymbol, PeriodTableAgreesWithSplitPoints) {
    const PeriodTable tab(f11());
    const auto reps = coset_reps(GroupDescriptor(11), 500).reps;
    for (std::size_t i = 1; i < reps.size(); i += 97) {
        const auto g = reps[i] * GroupElement::translation(3);
        EXPECT_LT(std::abs(tab.period(g) - period(f11(), g).value), 1e-11) << g.str();
    }
    EXPECT_EQ(tab.period(GroupElement::translation(2)), cplx(0.0));
}

TEST(Character, UnitaryHomomorphism) {
    const CharacterFamily fam{std::make_shared<HolCuspForm>(f11()), OneFormChoice::omega2()};
    const GroupElement g(4, 1, 11, 3), h(2, -1, 11, -5);
    EXPECT_EQ(character(fam, 0.0, g), cplx(1.0));
    for (double eps : {0.1, 0.7, -2.0}) {
        EXPECT_NEAR(std::abs(character(fam, eps, g)), 1.0, 1e-15);
        EXPECT_LT(std::abs(character(fam, eps, g * h) - character(fam, eps, g) * character(fam, eps, h)), 1e-10);
        EXPECT_LT(std::abs(character(fam, eps, GroupElement::translation(1)) - 1.0), 1e-12);
    }
}

TEST(Maass, ShippedFormIsAutomorphic) {
    const auto u = std::get<MaassForm>(load_coefficients(CUSPDRIFT_TEST_DATA "/maass_level1_r9.5337.coeffs"));
    // Points near the boundary of the fundamental domain, where S moves them little.
    std::vector<cplx> pts;
    for (double x : {-0.45, -0.2, 0.05, 0.3}) pts.push_back(cplx(x, std::sqrt(1.0 - x * x) + 0.01));
    const double res = maass_residual(u, pts);
    EXPECT_LT(res, 1e-6);

    auto bad = u;
    bad.b[3] *= 1.01;
    EXPECT_GE(maass_residual(bad, pts), 100.0 * res);

    MaassForm zero = u;
    std::fill(zero.b.begin(), zero.b.end(), 0.0);
    EXPECT_EQ(maass_residual(zero, pts), 0.0);

    const std::vector<cplx> low{cplx(0.1, 0.3)};
    EXPECT_THROW(maass_residual(u, low), DomainError);
}

TEST(Maass, ParityAndEigenfunction) {
    const auto u = std::get<MaassForm>(load_coefficients(CUSPDRIFT_TEST_DATA "/maass_level1_r9.5337.coeffs"));
    const cplx z(0.23, 1.1);
    EXPECT_LT(std::abs(eval_maass(u, -std::conj(z)) + eval_maass(u, z)), 1e-14);
    // Delta u = -(1/4 + r^2) u with the hyperbolic Laplacian y^2 (dxx + dyy).
    const double h = 1e-3;
    const cplx lap = (eval_maass(u, z + h) + eval_maass(u, z - h) + eval_maass(u, z + cplx(0, h)) +
                      eval_maass(u, z - cplx(0, h)) - 4.0 * eval_maass(u, z)) / (h * h) * z.imag() * z.imag();
    const double lambda = 0.25 + u.r * u.r;
    EXPECT_LT(std::abs(lap + lambda * eval_maass(u, z)), 1e-4 * lambda * std::abs(eval_maass(u, z)) + 1e-6);
    EXPECT_EQ(divisor_count(12), 6.0);
    EXPECT_EQ(divisor_count(49), 3.0);
}
