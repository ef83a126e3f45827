#include <qtv/qarith.hpp>

#include <gtest/gtest.h>

using namespace qtv;

TEST(RootData, RejectsBadOrders) {
    EXPECT_THROW(RootData(4), Error);
    EXPECT_THROW(RootData(1), Error);
    EXPECT_THROW(RootData(3, -1.0), Error);
    EXPECT_NO_THROW(RootData(7));
}

TEST(RootData, QIsAPrimitiveRoot) {
    for (int r : {3, 5, 7, 9}) {
        RootData rd(r);
        EXPECT_LT(std::abs(std::pow(rd.q, r) - 1.0), rd.eps_abs);
        for (int k = 1; k < r; ++k) EXPECT_GT(std::abs(std::pow(rd.q, k) - 1.0), 1e-3);
    }
}

TEST(QPow, PeriodicAndAccurateForLargeExponents) {
    RootData rd(5);
    Scalar x(0.37, 0.2);
    EXPECT_LT(std::abs(q_pow(rd, x + 5.0) - q_pow(rd, x)), 1e-14);
    EXPECT_LT(std::abs(q_pow(rd, x + 5e6) - q_pow(rd, x)), 1e-8);
    EXPECT_LT(std::abs(q_pow(rd, 1.0) - rd.q), 1e-15);
    EXPECT_THROW(q_pow(rd, Scalar(NAN, 0)), Error);
}

TEST(QNumbers, Basics) {
    RootData rd(5);
    EXPECT_LT(std::abs(qnum(rd, 1.0) - 1.0), 1e-14);
    EXPECT_LT(std::abs(qnum(rd, 2.0) - (rd.q + 1.0 / rd.q)), 1e-14);
    EXPECT_LT(std::abs(qbracket(rd, 5.0)), 1e-12); // {r} = 0
    EXPECT_THROW(qfact(rd, 5), Error);
    EXPECT_THROW(qfact(rd, -1), Error);
    EXPECT_LT(std::abs(qbinom(rd, 4, 2) - qnum(rd, 3.0) * qnum(rd, 4.0)), 1e-12);
}

TEST(QNumbers, AlternateFactorialMatches) {
    // [j; q^2]! = q^{j(j-1)/2} [j]!
    RootData rd(7);
    for (int j = 0; j < 7; ++j) {
        Scalar lhs = qfact_alt(j, rd.q * rd.q);
        Scalar rhs = q_pow(rd, j * (j - 1) / 2.0) * qfact(rd, j);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12) << j;
    }
}

TEST(Tolerance, Helpers) {
    RootData rd(3);
    EXPECT_TRUE(approx_eq(rd, 1.0, 1.0 + 1e-12));
    EXPECT_FALSE(approx_eq(rd, 1.0, 1.0 + 1e-6));
    EXPECT_DOUBLE_EQ(frac(-0.25), 0.75);
    EXPECT_DOUBLE_EQ(frac(3.0), 0.0);
    EXPECT_NEAR(lattice_dist(2.9, 1.0), 0.1, 1e-12);
}
