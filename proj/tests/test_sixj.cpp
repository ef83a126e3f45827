#include <qtv/sixj.hpp>
#include <qtv/suites.hpp>

#include <gtest/gtest.h>

using namespace qtv;

namespace {

struct Colors {
    Scalar i, j, k, l, m, n;
};

// random colors meeting every degree constraint of the tetrahedron
Colors random_colors(std::mt19937_64& rng, const RootData& rd) {
    std::uniform_int_distribution<int> U(0, rd.r - 1);
    for (;;) {
        double gi = random_degree(rng), gj = random_degree(rng), gl = random_degree(rng);
        if (!is_admissible_degree(rd, gi + gj, 0.02) || !is_admissible_degree(rd, gi + gj + gl, 0.02) ||
            !is_admissible_degree(rd, gj + gl, 0.02))
            continue;
        return {gi + U(rng), gj + U(rng), frac(gi + gj) + U(rng), gl + U(rng), frac(gi + gj + gl) + U(rng),
                frac(gj + gl) + U(rng)};
    }
}

} // namespace

TEST(MultSpace, DimensionFollowsTheDegrees) {
    RootData rd(3);
    SixJEngine E(rd);
    EXPECT_EQ(E.dim(0.3, 0.5 + 0.1, 1.2), 0); // degrees 0.3 + 0.6 + 0.2 != 0 mod 1
    Scalar i = 0.3, j = 1.45, k = E.star(E.canon(i + j));
    EXPECT_EQ(E.dim(i, j, k), 1);
    EXPECT_EQ(E.dim(j, k, i), 1);
    EXPECT_EQ(E.dim(k, i, j), 1);
    auto M = E.mult_basis(i, j, k);
    ASSERT_EQ(M.dim(), 1);
    EXPECT_NEAR(M.basis[0].norm(), 1.0, 1e-12);
}

TEST(MultSpace, SigmaCyclesBackToTheStart) {
    RootData rd(5);
    SixJEngine E(rd);
    Scalar i = 0.3, j = 1.45, k = E.star(E.canon(i + j));
    Vec x = E.basis(i, j, k);
    Vec y = E.sigma(k, i, j, E.sigma(j, k, i, E.sigma(i, j, k, x)));
    EXPECT_LT((x - y).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Theta, NondegenerateAndMatchesTheDiagram) {
    for (int r : {3, 5}) {
        RootData rd(r);
        SixJEngine E(rd);
        std::mt19937_64 rng(5);
        for (int t = 0; t < 3; ++t) {
            auto c = random_colors(rng, rd);
            Scalar k = E.star(c.k);
            Scalar th = E.theta(c.i, c.j, k);
            EXPECT_GT(std::abs(th), 1e-8);
            Scalar oracle = gprime(rd, E.theta_diagram(c.i, c.j, k), admissible_cuts(rd, E.theta_diagram(c.i, c.j, k))[0]);
            EXPECT_LT(std::abs(th - oracle) / std::abs(th), 1e-8);
            // cyclic invariance
            EXPECT_LT(std::abs(E.theta(c.j, k, c.i) - th) / std::abs(th), 1e-8);
        }
    }
}

TEST(SixJ, MatchesTheTetrahedralGraph) {
    RootData rd(3);
    SixJEngine E(rd);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 4; ++t) {
        auto c = random_colors(rng, rd);
        Scalar v = E.sixj(c.i, c.j, c.k, c.l, c.m, c.n);
        auto G = E.gamma_diagram(c.i, c.j, c.k, c.l, c.m, c.n);
        Scalar oracle = gprime(rd, G, admissible_cuts(rd, G)[0]);
        EXPECT_LT(std::abs(v - oracle) / std::max(std::abs(v), 1e-12), 1e-8);
    }
}

TEST(SixJ, TetrahedralSymmetry) {
    RootData rd(5);
    SixJEngine E(rd);
    std::mt19937_64 rng(9);
    int nonzero = 0;
    for (int t = 0; t < 6; ++t) {
        auto c = random_colors(rng, rd);
        Scalar a = E.sixj(c.i, c.j, c.k, c.l, c.m, c.n);
        Scalar b = E.sixj(c.j, E.star(c.k), E.star(c.i), c.m, c.n, c.l);
        EXPECT_LE(std::abs(a - b), 1e-8 * std::abs(a));
        nonzero += std::abs(a) > 0;
    }
    EXPECT_GT(nonzero, 2);
}

TEST(SixJ, VanishesOffTheDegreeConstraints) {
    RootData rd(3);
    SixJEngine E(rd);
    std::mt19937_64 rng(11);
    auto c = random_colors(rng, rd);
    EXPECT_EQ(E.sixj(c.i, c.j, c.k + 0.25, c.l, c.m, c.n), Scalar(0));
    EXPECT_EQ(E.sixj(c.i, c.j, c.k, c.l, c.m + 0.1, c.n), Scalar(0));
}

TEST(Contract, MismatchedFactorsAreAPlanError) {
    RootData rd(3);
    SixJEngine E(rd);
    std::mt19937_64 rng(13);
    auto c = random_colors(rng, rd);
    auto t = E.sixj_tensor(c.i, c.j, c.k, c.l, c.m, c.n);
    EXPECT_THROW(E.contract({t, t}, {{0, 0, 1, 0}}), Error);
}

TEST(Contract, OrderIndependence) {
    // the three contractions of the bubble pair, in two orders
    RootData rd(3);
    SixJEngine E(rd);
    std::mt19937_64 rng(17);
    auto c = random_colors(rng, rd);
    auto t1 = E.sixj_tensor(c.i, c.j, c.k, c.l, c.m, c.n);
    auto t2 = E.sixj_tensor(c.k, E.star(c.j), c.i, c.n, c.m, c.l);
    auto a = E.contract({t1, t2}, {{0, 3, 1, 0}, {1, 3, 0, 0}, {1, 1, 0, 1}});
    auto b = E.contract({t1, t2}, {{1, 1, 0, 1}, {1, 3, 0, 0}, {0, 3, 1, 0}});
    EXPECT_LT(std::abs(a.value - b.value), 1e-9 * std::max(1.0, std::abs(a.value)));
    EXPECT_EQ(a.factors.size(), 2u);
}

TEST(Identities, SmallSampleOfEachSuite) {
    SuiteConfig cfg;
    cfg.samples = 8;
    auto rep = run_suite("sixj", cfg);
    for (const auto& l : rep.lines) EXPECT_TRUE(l.passed()) << l.name << " " << l.value;
}
