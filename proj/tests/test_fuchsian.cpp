#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "cuspdrift/fuchsian.hpp"

using namespace cuspdrift;
using cplx = std::complex<double>;

TEST(GroupElement, NormalizesSign) {
    const GroupElement g(-1, 0, -3, -1);
    EXPECT_EQ(g.c(), 3);
    EXPECT_EQ(g.a(), 1);
    EXPECT_EQ(GroupElement(-1, -2, 0, -1), GroupElement::translation(2));
}

TEST(GroupElement, RejectsBadDeterminant) {
    EXPECT_THROW(GroupElement(7, 2, 11, 3), DomainError);
}

TEST(GroupElement, OverflowIsDetected) {
    const std::int64_t big = std::int64_t(1) << 40;
    const GroupElement g(1, big, 0, 1), h(1, 0, big, 1);
    EXPECT_THROW(g * h * g * h, NumericalError);
}

TEST(IsMember, Examples) {
    const GroupDescriptor g11(11);
    EXPECT_TRUE(is_member(GroupElement::identity(), g11));
    EXPECT_TRUE(is_member(GroupElement(1, 1, 0, 1), g11));
    EXPECT_FALSE(is_member(GroupElement(0, -1, 1, 0), g11));
}

TEST(CosetReps, TrivialLists) {
    EXPECT_EQ(coset_reps(GroupDescriptor(1), 0).reps.size(), 1u);
    const auto l = coset_reps(GroupDescriptor(11), 10);
    ASSERT_EQ(l.reps.size(), 1u);
    EXPECT_EQ(l.reps[0], GroupElement::identity());
}

// Brute force: coprime (c, d) with 0 < c <= C, d in [0, c), plus the identity.
TEST(CosetReps, CountMatchesBruteForce) {
    for (int C : {1, 7, 30}) {
        std::set<std::pair<int, int>> pairs;
        for (int c = 1; c <= C; ++c)
            for (int d = -3 * c; d <= 3 * c; ++d)
                if (std::gcd(c, std::abs(d)) == 1) pairs.insert({c, ((d % c) + c) % c});
        EXPECT_EQ(coset_reps(GroupDescriptor(1), C).reps.size(), pairs.size() + 1) << "C=" << C;
    }
}

TEST(CosetReps, MembersAndUniqueness) {
    const GroupDescriptor grp(11);
    const auto l = coset_reps(grp, 200);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& r : l.reps) {
        EXPECT_TRUE(is_member(r, grp));
        EXPECT_TRUE(seen.insert({r.c(), r.c() ? ((r.d() % r.c()) + r.c()) % r.c() : 0}).second);
    }
}

// The bottom row of r * gamma determines its coset; it must be in the list.
TEST(CosetReps, ProductCosetAppearsOnce) {
    const GroupDescriptor grp(11);
    const auto l = coset_reps(grp, 2000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(1, 60);
    std::uniform_int_distribution<int> k(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const GroupElement g = l.reps[pick(rng)] * GroupElement::translation(k(rng)) * l.reps[pick(rng)];
        if (g.c() == 0 || g.c() > 2000) continue;
        int hits = 0;
        for (const auto& r : l.reps)
            if (r.c() == g.c() && ((g.d() - r.d()) % g.c()) == 0) ++hits;
        EXPECT_EQ(hits, 1) << g.str();
    }
}

TEST(Reduce, Examples) {
    auto r = reduce_to_fundamental(cplx(0, 1));
    EXPECT_EQ(r.point, cplx(0, 1));
    EXPECT_EQ(r.g, GroupElement::identity());
    r = reduce_to_fundamental(cplx(5, 1));
    EXPECT_NEAR(std::abs(r.point - cplx(0, 1)), 0.0, 1e-15);
    EXPECT_EQ(r.g, GroupElement::translation(-5));
    EXPECT_THROW(reduce_to_fundamental(cplx(0.3, 0.0)), DomainError);
}

TEST(Reduce, PostConditionAndIdempotence) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> X(-3, 3), Y(0.001, 2);
    for (int i = 0; i < 200; ++i) {
        const cplx z(X(rng), Y(rng));
        const auto r = reduce_to_fundamental(z);
        EXPECT_LE(std::abs(r.point.real()), 0.5 + 1e-12);
        EXPECT_GE(std::abs(r.point), 1.0 - 1e-12);
        EXPECT_NEAR(std::abs(r.g.apply(z) - r.point), 0.0, 1e-9 * std::max(1.0, std::abs(r.point)));
        const auto again = reduce_to_fundamental(r.point);
        EXPECT_EQ(again.g, GroupElement::identity());
    }
}

// Orbit oracle on a/c with c <= 12: a/c is an image of inf iff some member
// has first column (a, c); an image of 0 iff some member (x, a; y, c) exists.
TEST(Cusps, ListsMatchOrbitSearch) {
    EXPECT_EQ(cusp_list(GroupDescriptor(1)).size(), 1u);
    for (int N : {2, 11}) {
        const auto cl = cusp_list(GroupDescriptor(N));
        ASSERT_EQ(cl.size(), 2u);
        EXPECT_TRUE(cl[0].is_infinity());
        EXPECT_EQ(cl[1].num, 0);
        for (long c = 1; c <= 12; ++c)
            for (long a = 0; a < c; ++a) {
                if (std::gcd(a, c) != 1) continue;
                bool inf_orbit = false, zero_orbit = false;
                for (long t = -200; t <= 200 && !(inf_orbit && zero_orbit); ++t) {
                    // (a, b; c, d) in Gamma_0(N): need N | c and a d - b c = 1.
                    for (long d = -60; d <= 60 && c % N == 0; ++d)
                        if ((a * d - 1) % c == 0) inf_orbit = true;
                    // (x, a; N t, c): x c - a N t = 1.
                    if ((1 + a * N * t) % c == 0) zero_orbit = true;
                }
                EXPECT_NE(inf_orbit, zero_orbit) << a << "/" << c << " N=" << N;
                EXPECT_EQ(inf_orbit, c % N == 0) << a << "/" << c << " N=" << N;
            }
    }
    EXPECT_THROW(cusp_list(GroupDescriptor(12)), CapabilityError);
}
