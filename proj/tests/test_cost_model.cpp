#include <gtest/gtest.h>

#include <cmath>

#include "qwalk/cost_model.hpp"

using namespace qwalk;

TEST(CostModel, Names) {
    for (const auto& [kind, name] : kAppKindNames) EXPECT_EQ(parse_app_kind(name), kind);
    EXPECT_THROW(parse_app_kind("nope"), InvalidArgument);
}

TEST(CostModel, Formulas) {
    EXPECT_DOUBLE_EQ(cost_model(AppKind::ElementDistinctness, 100, 4), 4 + 25 * 2);
    EXPECT_DOUBLE_EQ(cost_model(AppKind::MatrixProductVerification, 100, 4), 400 + 25 * 2 * 100);
    EXPECT_DOUBLE_EQ(cost_model(AppKind::Associativity, 100, 4), 16 + 25 * (8 + 20));
    EXPECT_NEAR(cost_model(AppKind::Triangle, 64, 8), 64 + 8 * (std::sqrt(8.0) * 8 + 8 * 4), 1e-12);
    EXPECT_NEAR(cost_model(AppKind::GroupCommutativity, 100, 4),
                4 + 25 * (std::sqrt(4 * std::log(4.0)) * std::log(4.0) + 1), 1e-12);
    EXPECT_DOUBLE_EQ(cost_model(AppKind::UnorderedSearch, 100, 4), 5.0);
}

TEST(CostModel, RangeChecks) {
    EXPECT_THROW(cost_model(AppKind::ElementDistinctness, 100, 0), InvalidArgument);
    EXPECT_THROW(cost_model(AppKind::ElementDistinctness, 100, 101), InvalidArgument);
    EXPECT_THROW(cost_model(AppKind::GroupCommutativity, 100, 1), InvalidArgument);
    EXPECT_THROW(optimize_r(AppKind::ElementDistinctness, 50), InvalidArgument);
}

TEST(CostModel, EdAtRNIsSetupDominated) {
    const double n = 1e6;
    const double c = cost_model(AppKind::ElementDistinctness, n, n);
    EXPECT_NEAR(c, n + 1000.0, 1e-6);
    EXPECT_LT((c - n) / c, 1e-3);
}

TEST(CostModel, MpvAtTwoThirds) {
    const double n = 1e6;
    const double r = std::pow(n, 2.0 / 3.0);
    EXPECT_NEAR(cost_model(AppKind::MatrixProductVerification, n, r) / std::pow(n, 5.0 / 3.0), 2.0, 1e-9);
}

TEST(CostModel, TriangleTermsAtThreeFifths) {
    // At r = n^{3/5} both walk terms equal n^{13/10}; the setup term r^2 is
    // n^{6/5}, a factor n^{1/10} below.
    const double n = 1e6;
    const double r = std::pow(n, 0.6);
    const double target = std::pow(n, 1.3);
    const double walk_terms[2] = {(n / r) * std::sqrt(r) * r, (n / r) * std::sqrt(n) * std::cbrt(r * r)};
    for (double t : walk_terms) {
        EXPECT_GE(t, target / 2.0);
        EXPECT_LE(t, target * 2.0);
    }
    EXPECT_NEAR(r * r / std::pow(n, 1.2), 1.0, 1e-9);
    EXPECT_NEAR(cost_model(AppKind::Triangle, n, r), r * r + walk_terms[0] + walk_terms[1], 1e-3);
}

TEST(OptimizeR, EdExponent) {
    for (double n : {1e4, 1e5, 1e6}) {
        const auto res = optimize_r(AppKind::ElementDistinctness, n);
        EXPECT_NEAR(res.exponent, 2.0 / 3.0, 0.02) << n;
        const double ideal = std::pow(n, 2.0 / 3.0);
        EXPECT_GE(static_cast<double>(res.r_star), ideal / 2.0);
        EXPECT_LE(static_cast<double>(res.r_star), ideal * 2.0);
    }
}

TEST(OptimizeR, OtherExponents) {
    const double n = 1e6;
    EXPECT_NEAR(optimize_r(AppKind::MatrixProductVerification, n).exponent, 5.0 / 3.0, 0.02);
    const auto assoc = optimize_r(AppKind::Associativity, n);
    EXPECT_NEAR(assoc.exponent, 1.25, 0.02);
    EXPECT_GE(static_cast<double>(assoc.r_star), std::sqrt(n) / 2.0);
    EXPECT_LE(static_cast<double>(assoc.r_star), std::sqrt(n) * 2.0);
    EXPECT_NEAR(optimize_r(AppKind::Triangle, n).exponent, 1.3, 0.02);
    EXPECT_NEAR(optimize_r(AppKind::UnorderedSearch, n).cost_star, 1000.0, 1e-9);
}

TEST(OptimizeR, GroupCommutativityLogCorrected) {
    const double n = 1e6;
    const double ratio = optimize_r(AppKind::GroupCommutativity, n).cost_star / (std::pow(n, 2.0 / 3.0) * std::log(n));
    EXPECT_GE(ratio, 0.25);
    EXPECT_LE(ratio, 4.0);
}

TEST(OptimizeR, MatchesExhaustiveScan) {
    const double n = 2000;
    const auto res = optimize_r(AppKind::Associativity, n);
    double best = 1e300;
    long long arg = 0;
    for (long long r = 1; r <= 1000; ++r) {
        const double c = cost_model(AppKind::Associativity, n, static_cast<double>(r));
        if (c < best) {
            best = c;
            arg = r;
        }
    }
    EXPECT_EQ(res.r_star, arg);
    EXPECT_DOUBLE_EQ(res.cost_star, best);
}
