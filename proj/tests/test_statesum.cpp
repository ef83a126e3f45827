#include <qtv/psihat.hpp>
#include <qtv/statesum.hpp>
#include <qtv/suites.hpp>

#include <gtest/gtest.h>

using namespace qtv;

namespace {

TriangulationFile load(const std::string& name) {
    return parse_triangulation_json(read_file(std::string(QTV_DATA_DIR) + "/" + name));
}

double rel(Scalar a, Scalar b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST(DeterministicSum, IndependentOfThreadCount) {
    auto f = [](long long a, long long b) {
        Scalar s = 0;
        for (long long i = a; i < b; ++i) s += Scalar(1.0 / double(i + 1), std::sin(double(i)));
        return s;
    };
    Scalar one = deterministic_sum(100000, f, 1, 1000);
    for (int t : {2, 3, 8}) EXPECT_EQ(deterministic_sum(100000, f, t, 1000), one);
    EXPECT_LT(std::abs(one - f(0, 100000)), 1e-9);
    EXPECT_EQ(deterministic_sum(0, f, 2), Scalar(0));
}

TEST(TV, ShippedComplexBaselineAndBruteForce) {
    auto F = load("s3_unknot.json");
    RootData rd(3);
    SixJEngine E(rd);
    auto R = tv_sum(E, F.T, *F.coloring);
    EXPECT_EQ(R.states, 729);
    // regression fixture
    EXPECT_LT(rel(R.value, 1.0 / 27.0), 1e-9);
    StateSpace S(rd, F.T, *F.coloring);
    Scalar brute = 0;
    for (long long n = 0; n < S.count(); ++n) brute += tv_state_term(E, F.T, S, S.at(n));
    EXPECT_LT(rel(R.value, brute), 1e-9);
}

TEST(TV, ThreadCountDoesNotChangeTheValue) {
    auto F = load("s3_unknot_bubble.json");
    RootData rd(3);
    SixJEngine E(rd);
    SumOptions a, b;
    b.threads = 3;
    EXPECT_EQ(tv_sum(E, F.T, *F.coloring, a).value, tv_sum(E, F.T, *F.coloring, b).value);
}

TEST(TV, BubbleAndGaugeInvariance) {
    auto F = load("s3_unknot.json"), B = load("s3_unknot_bubble.json");
    RootData rd(3);
    SixJEngine E(rd);
    Scalar v = tv_sum(E, F.T, *F.coloring).value;
    EXPECT_LT(rel(v, tv_sum(E, B.T, *B.coloring).value), 1e-9);
    auto g = gauge_act(F.T, {{3, 0.21}, {4, 0.08}}, *F.coloring);
    ASSERT_TRUE(is_admissible(g));
    EXPECT_LT(rel(v, tv_sum(E, F.T, g).value), 1e-9);
}

TEST(TV, StateLimitAndBadInputs) {
    auto F = load("s3_unknot.json");
    RootData rd(3);
    SixJEngine E(rd);
    SumOptions o;
    o.max_states = 10;
    EXPECT_THROW(tv_sum(E, F.T, *F.coloring, o), Error);
    GColoring bad = *F.coloring;
    bad.phi[1] = 0.5;
    EXPECT_THROW(tv_sum(E, F.T, bad), Error);
    StateSpace S(rd, F.T, *F.coloring);
    auto st = S.at(0);
    auto p = positive_order(F.T, 0);
    EXPECT_NO_THROW(tet_tensor(E, F.T, S, st, 0, p));
    std::swap(p[0], p[1]);
    EXPECT_THROW(tet_tensor(E, F.T, S, st, 0, p), Error);
}

TEST(Charges, SolverSatisfiesEveryConstraint) {
    for (const char* f : {"s3_unknot.json", "s3_unknot_bubble.json"}) {
        auto F = load(f);
        auto cs = charge_solutions(F.T, 3);
        EXPECT_GE(cs.size(), 2u);
        for (const auto& c : cs) EXPECT_EQ(charge_violation(F.T, c), "") << f;
        Charge broken = cs[0];
        broken.x[0][0] += 1;
        EXPECT_NE(charge_violation(F.T, broken), "");
    }
}

TEST(Charges, IntegerSolver) {
    std::vector<std::vector<long long>> kernel;
    auto x = solve_integer({{2, 4}, {1, 3}}, {6, 4}, &kernel);
    ASSERT_TRUE(x);
    EXPECT_EQ(2 * (*x)[0] + 4 * (*x)[1], 6);
    EXPECT_EQ((*x)[0] + 3 * (*x)[1], 4);
    EXPECT_TRUE(kernel.empty());
    EXPECT_FALSE(solve_integer({{2, 4}}, {3}));
    x = solve_integer({{1, 1, 1}}, {1}, &kernel);
    ASSERT_TRUE(x);
    EXPECT_EQ(kernel.size(), 2u);
    for (const auto& k : kernel) EXPECT_EQ(k[0] + k[1] + k[2], 0);
}

TEST(SqrtD, SquaresToDAndIsEqualOnDuals) {
    RootData rd(5);
    SixJEngine E(rd);
    int flipped = 0;
    for (double a : {0.3, 1.7, 2.45, 3.9, 4.15, 0.82, 2.2}) {
        Scalar s = sqrt_d(E, a), t = sqrt_d(E, a, 7);
        EXPECT_LT(std::abs(s * s - E.d(a)), 1e-12);
        EXPECT_LT(std::abs(s - sqrt_d(E, E.star(a))), 1e-12);
        EXPECT_LT(std::abs(t - sqrt_d(E, E.star(a), 7)), 1e-12);
        flipped += std::abs(s + t) < 1e-12;
    }
    EXPECT_GT(flipped, 0);
}

TEST(Kashaev, EqualsTVAcrossChargesOrdersAndRoots) {
    auto F = load("s3_unknot.json");
    RootData rd(3);
    SixJEngine E(rd);
    Scalar tv = tv_sum(E, F.T, *F.coloring).value;
    for (const auto& c : charge_solutions(F.T, 2))
        for (auto order : {std::vector<int>{}, std::vector<int>{4, 2, 1, 3}})
            for (unsigned sd : {0u, 9u}) {
                KashaevOptions ko;
                ko.vertex_order = order;
                ko.sqrt_seed = sd;
                EXPECT_LT(rel(tv, kashaev_sum(E, F.T, *F.coloring, c, ko).value), 1e-9);
            }
}

TEST(Kashaev, OnTheBubbleComplex) {
    auto B = load("s3_unknot_bubble.json");
    RootData rd(3);
    SixJEngine E(rd);
    Scalar tv = tv_sum(E, B.T, *B.coloring).value;
    EXPECT_LT(rel(tv, kashaev_sum(E, B.T, *B.coloring, charge_solve(B.T)).value), 1e-9);
}

TEST(PsiHat, AllChecksAtR3) {
    RootData rd(3);
    SixJEngine E(rd);
    auto P = build_psihat(E, {0.137, 0.219, 0.311});
    EXPECT_GT(P.blocks.size(), 0u);
    for (const auto& c : check_psihat(E, P)) EXPECT_LT(c.residual, 1e-8) << c.name;
    MonoOp AB = compose(P.A, P.B);
    EXPECT_LT(op_distance(power(AB, 3), identity_op(P.blocks.size())), 1e-10);
    EXPECT_LT(op_distance(compose(P.A, inverse(P.A)), identity_op(P.blocks.size())), 1e-12);
}

TEST(PsiHat, BConsistency) {
    for (int r : {3, 5}) {
        RootData rd(r);
        SixJEngine E(rd);
        for (int d : b_consistency_dims(E, 0.23, 0.61)) EXPECT_EQ(d, r * r);
    }
}
