#include <qtv/suites.hpp>
#include <qtv/weightcat.hpp>

#include <gtest/gtest.h>

using namespace qtv;

namespace {
double nrm(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
} // namespace

TEST(Typical, ExcludesIntegersAndHalfDegrees) {
    RootData rd(3);
    EXPECT_FALSE(is_typical(rd, 0.0));
    EXPECT_FALSE(is_typical(rd, 1.0));
    EXPECT_TRUE(is_typical(rd, 0.4));
    EXPECT_TRUE(is_typical(rd, Scalar(0.4, 0.3)));
    EXPECT_FALSE(is_admissible_degree(rd, 0.5));
    EXPECT_TRUE(is_admissible_degree(rd, 0.3));
}

TEST(Module, NilpotentAndWeightModule) {
    for (int r : {3, 5}) {
        RootData rd(r);
        auto V = build_typical(rd, Scalar(1.37, 0.1));
        Mat Er = Mat::Identity(r, r), Fr = Er;
        for (int k = 0; k < r; ++k) Er = Er * V.act.E, Fr = Fr * V.act.F;
        EXPECT_LT(nrm(Er), 1e-9);
        EXPECT_LT(nrm(Fr), 1e-9);
        for (int p = 0; p < r; ++p) EXPECT_LT(std::abs(V.act.K(p, p) - q_pow(rd, V.act.H(p, p))), 1e-12);
        EXPECT_LT(relation_residuals(rd, V).max(), 1e-9);
    }
}

TEST(Module, StateRepsShareADegree) {
    RootData rd(5);
    auto reps = state_reps(rd, 0.3);
    ASSERT_EQ(reps.size(), 5u);
    for (size_t i = 0; i < reps.size(); ++i) {
        EXPECT_NEAR(degree(reps[i]), 0.3, 1e-12);
        for (size_t j = 0; j < i; ++j) EXPECT_GT(std::abs(reps[i] - reps[j]), 0.5);
    }
}

TEST(Duality, DualWeightIsAnInvolution) {
    RootData rd(5);
    for (double a : {0.3, 1.7, 4.2}) {
        Scalar s = dual_weight(rd, a);
        EXPECT_NEAR(degree(s), frac(-a), 1e-12);
        EXPECT_LT(std::abs(dual_weight(rd, s) - canonical_rep(rd, a)), 1e-9);
    }
}

TEST(Braiding, InverseAndTwistScalar) {
    RootData rd(3);
    auto V = build_typical(rd, 0.31), W = build_typical(rd, 1.77);
    Mat c = braiding(rd, V, W), ci = braiding_inverse(rd, V, W);
    EXPECT_LT(nrm(ci * c - Mat::Identity(9, 9)), 1e-10);
    EXPECT_NEAR(std::abs(twist_scalar(rd, 0.31)), 1.0, 1e-12);
    EXPECT_THROW(twist_scalar(rd, 1.0), Error);
}

TEST(ScalarFunctions, ModifiedDimensionAndB) {
    RootData rd(5);
    EXPECT_LT(std::abs(bconst(rd) - 1.0 / 25.0), 1e-15);
    Scalar a = 0.41;
    EXPECT_LT(std::abs(mdim(rd, a) - mdim(rd, dual_weight(rd, a))), 1e-12);
    EXPECT_LT(std::abs(mdim(rd, a) - mdim(rd, a + 5.0)), 1e-12);
    // d(V)S'(J,V) = d(J)S'(V,J)
    Scalar b = 2.83;
    EXPECT_LT(std::abs(mdim(rd, b) * sprime_closed(rd, a, b) - mdim(rd, a) * sprime_closed(rd, b, a)), 1e-10);
}

TEST(ScalarFunctions, GeneralRootDataReducesToSl2) {
    RootData rd(7);
    auto rs = RootSystemData::sl2();
    Eigen::VectorXcd l(1), m(1);
    l(0) = 0.77, m(0) = 3.1;
    EXPECT_LT(std::abs(mdim(rd, rs, l) - mdim(rd, 0.77)), 1e-12);
    EXPECT_LT(std::abs(sprime_closed(rd, rs, l, m) - sprime_closed(rd, 0.77, 3.1)), 1e-12);
}

TEST(ScalarFunctions, Sl3WeylSymmetricAndFinite) {
    RootData rd(5);
    Eigen::MatrixXd A(2, 2);
    A << 2, -1, -1, 2;
    auto rs = RootSystemData::from_cartan(A, Eigen::VectorXd::Ones(2));
    EXPECT_EQ(rs.pos_roots.size(), 3u);
    Eigen::VectorXcd l(2), lt(2);
    l << 0.31, 0.57;
    lt << 0.57, 0.31; // diagram automorphism
    Scalar d = mdim(rd, rs, l);
    EXPECT_TRUE(std::isfinite(d.real()) && std::isfinite(d.imag()));
    EXPECT_LT(std::abs(d - mdim(rd, rs, lt)), 1e-10);
}

TEST(Suites, RelationsAndRibbonPass) {
    SuiteConfig cfg;
    cfg.samples = 10;
    for (const char* s : {"relations", "ribbon"}) {
        auto rep = run_suite(s, cfg);
        for (const auto& l : rep.lines) EXPECT_TRUE(l.passed()) << s << ": " << l.name << " " << l.value;
    }
}
