#include <gtest/gtest.h>

#include <cmath>

#include "qwalk/chain_analysis.hpp"
#include "qwalk/markov_chain.hpp"

using namespace qwalk;

namespace {

void expect_rows_stochastic(const Matrix& p) {
    for (Eigen::Index x = 0; x < p.rows(); ++x) EXPECT_NEAR(p.row(x).sum(), 1.0, 1e-12);
}

void expect_stationary(const ChainAnalysis& a, const Matrix& p) {
    EXPECT_LE((a.pi.transpose() * p - a.pi.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GT(a.pi.minCoeff(), 0.0);
    EXPECT_NEAR(a.pi.sum(), 1.0, 1e-12);
}

} // namespace

TEST(CompleteGraph, OffDiagonalEntries) {
    const auto k4 = build_complete_graph(4);
    for (std::size_t x = 0; x < 4; ++x) {
        for (std::size_t y = 0; y < 4; ++y) EXPECT_DOUBLE_EQ(k4(x, y), x == y ? 0.0 : 1.0 / 3.0);
    }
    EXPECT_TRUE(k4.is_symmetric());
    EXPECT_NEAR(analyze(k4).delta, 2.0 / 3.0, 1e-12);
}

TEST(CompleteGraph, UniformStationaryOnK3) {
    const auto a = analyze(build_complete_graph(3));
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(a.pi(i), 1.0 / 3.0, 1e-12);
}

TEST(CompleteGraph, GapK10) { EXPECT_NEAR(analyze(build_complete_graph(10)).delta, 8.0 / 9.0, 1e-12); }

TEST(CompleteGraph, GapFormulaUpTo16) {
    for (int n = 3; n <= 16; ++n) {
        const auto c = build_complete_graph(n);
        expect_rows_stochastic(c.transitions());
        EXPECT_NEAR(analyze(c).delta, 1.0 - 1.0 / (n - 1), 1e-12) << "n=" << n;
    }
}

TEST(CompleteGraph, RejectsSmallN) {
    EXPECT_THROW(build_complete_graph(2), DegenerateChain);
    EXPECT_THROW(build_complete_graph(0), DegenerateChain);
}

TEST(Johnson, J52Structure) {
    const auto j = build_johnson(5, 2);
    ASSERT_EQ(j.size(), 10u);
    for (std::size_t x = 0; x < j.size(); ++x) {
        int degree = 0;
        for (std::size_t y = 0; y < j.size(); ++y) {
            if (j(x, y) > 0) {
                ++degree;
                EXPECT_DOUBLE_EQ(j(x, y), 1.0 / 6.0);
            }
        }
        EXPECT_EQ(degree, 6);
    }
    const auto a = analyze(j);
    for (Eigen::Index i = 0; i < 10; ++i) EXPECT_NEAR(a.pi(i), 0.1, 1e-12);
    // n / (r (n - r)) is the gap below the top eigenvalue; the most negative
    // eigenvalue -1/3 sets the magnitude gap.
    EXPECT_NEAR(a.one_sided_gap, 5.0 / 6.0, 1e-12);
    EXPECT_NEAR(a.delta, 2.0 / 3.0, 1e-12);
}

TEST(Johnson, J42SecondEigenvalueMagnitude) {
    const auto j = build_johnson(4, 2);
    ASSERT_EQ(j.size(), 6u);
    // Independent route: symmetric eigensolver on P itself.
    Eigen::SelfAdjointEigenSolver<Matrix> es(j.transitions());
    Eigen::VectorXd ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size());
    EXPECT_NEAR(ev(ev.size() - 1), 1.0, 1e-12);
    EXPECT_NEAR(ev(ev.size() - 2), 0.0, 1e-12);
    const auto a = analyze(j);
    EXPECT_NEAR(a.one_sided_gap, 1.0, 1e-12);
    EXPECT_NEAR(a.delta, 0.5, 1e-12);
}

TEST(Johnson, J41IsK4) {
    const auto j = build_johnson(4, 1);
    const auto k = build_complete_graph(4);
    EXPECT_LE((j.transitions() - k.transitions()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Johnson, GapClosedFormUpTo10) {
    for (int n = 2; n <= 10; ++n) {
        for (int r = 1; 2 * r <= n; ++r) {
            if (n == 2) continue; // J(2,1) is the periodic two-cycle
            const auto j = build_johnson(n, r);
            expect_rows_stochastic(j.transitions());
            const auto a = analyze(j);
            EXPECT_NEAR(a.one_sided_gap, static_cast<double>(n) / (r * (n - r)), 1e-9) << "n=" << n << " r=" << r;
            expect_stationary(a, j.transitions());
        }
    }
}

TEST(Johnson, RejectsBadR) {
    EXPECT_THROW(build_johnson(5, 3), DegenerateChain);
    EXPECT_THROW(build_johnson(5, 0), DegenerateChain);
}

TEST(Johnson, CapacityCap) {
    Limits small;
    small.max_states = 100;
    EXPECT_THROW(build_johnson(10, 5, small), CapacityExceeded);
}

TEST(ExchangeWalk, N3R1Transitions) {
    const auto e = build_exchange_walk(3, 1);
    ASSERT_EQ(e.size(), 3u);
    const std::size_t x = *e.index_of(Tuple{1});
    EXPECT_NEAR(e(x, x), 0.5 + 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(e(x, *e.index_of(Tuple{2})), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(e(x, *e.index_of(Tuple{3})), 1.0 / 6.0, 1e-15);
}

TEST(ExchangeWalk, N4R2UniformStationary) {
    const auto e = build_exchange_walk(4, 2);
    ASSERT_EQ(e.size(), 12u);
    const auto a = analyze(e);
    expect_stationary(a, e.transitions());
    for (Eigen::Index i = 0; i < 12; ++i) EXPECT_NEAR(a.pi(i), 1.0 / 12.0, 1e-10);
    EXPECT_TRUE(a.reversible);
    EXPECT_LE((a.p_star - e.transitions()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ExchangeWalk, SwapMovesStayInsideTuples) {
    // From (1,2): i=1, j=2 swaps to (2,1); i=1, j=3 replaces to (3,2).
    const auto e = build_exchange_walk(3, 2);
    const std::size_t u = *e.index_of(Tuple{1, 2});
    EXPECT_NEAR(e(u, *e.index_of(Tuple{2, 1})), 2.0 * 0.5 / 6.0, 1e-15);
    EXPECT_NEAR(e(u, *e.index_of(Tuple{3, 2})), 0.5 / 6.0, 1e-15);
    EXPECT_NEAR(e(u, *e.index_of(Tuple{1, 3})), 0.5 / 6.0, 1e-15);
    EXPECT_NEAR(e(u, u), 0.5 + 2.0 * 0.5 / 6.0, 1e-15);
}

TEST(ExchangeWalk, GapMeasuredForN3R2) {
    const auto a = analyze(build_exchange_walk(3, 2));
    // Only the measured constant c = delta * r log r is recorded; it must be positive.
    const double c = a.delta * 2.0 * std::log(2.0);
    EXPECT_GT(c, 0.0);
    EXPECT_LE(a.delta, 1.0);
}

TEST(ExchangeWalk, Capacity) {
    Limits small;
    small.max_states = 50;
    EXPECT_THROW(build_exchange_walk(6, 3, small), CapacityExceeded);
    EXPECT_THROW(build_exchange_walk(3, 3), DegenerateChain);
}

TEST(Analyze, SymmetricChainsAreReversible) {
    for (const auto& p : {build_complete_graph(4).transitions(), build_johnson(6, 3).transitions()}) {
        const auto a = analyze(p);
        EXPECT_TRUE(a.reversible);
        EXPECT_TRUE(a.ergodic);
        EXPECT_LE((a.p_star - p).cwiseAbs().maxCoeff(), 1e-12);
        const double u = 1.0 / static_cast<double>(p.rows());
        EXPECT_LE((a.pi.array() - u).abs().maxCoeff(), 1e-10);
    }
}

TEST(Analyze, DetailedBalanceOnBirthDeathChain) {
    Matrix p(3, 3);
    p << 0.5, 0.5, 0.0, 0.25, 0.5, 0.25, 0.0, 0.5, 0.5;
    const auto a = analyze(p);
    EXPECT_TRUE(a.reversible);
    EXPECT_NEAR(a.pi(0), 0.25, 1e-12);
    EXPECT_NEAR(a.pi(1), 0.5, 1e-12);
    for (Eigen::Index x = 0; x < 3; ++x) {
        for (Eigen::Index y = 0; y < 3; ++y) EXPECT_NEAR(a.pi(x) * p(x, y), a.pi(y) * p(y, x), 1e-10);
    }
}

TEST(Analyze, NonReversibleCycle) {
    Matrix p(3, 3);
    p << 0.2, 0.8, 0.0, 0.0, 0.2, 0.8, 0.8, 0.0, 0.2;
    const auto a = analyze(p);
    EXPECT_FALSE(a.reversible);
    expect_stationary(a, p);
    // Time reversal runs the cycle backwards.
    EXPECT_NEAR(a.p_star(1, 0), 0.8, 1e-12);
}

TEST(Analyze, DisconnectedIsNotErgodic) {
    Matrix p = Matrix::Zero(4, 4);
    p.block(0, 0, 2, 2).setConstant(0.5);
    p.block(2, 2, 2, 2).setConstant(0.5);
    EXPECT_THROW(analyze(p), NotErgodic);
}

TEST(Analyze, PeriodicIsNotErgodic) {
    Matrix p(2, 2);
    p << 0, 1, 1, 0;
    EXPECT_THROW(analyze(p), NotErgodic);
    // Bipartite 4-cycle.
    Matrix c = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        c(i, (i + 1) % 4) = 0.5;
        c(i, (i + 3) % 4) = 0.5;
    }
    EXPECT_THROW(analyze(c), NotErgodic);
}

TEST(MarkovChain, Validation) {
    Matrix bad(2, 2);
    bad << 0.5, 0.6, 0.5, 0.5;
    EXPECT_THROW(MarkovChain<int>({1, 2}, bad), DegenerateChain);
    Matrix neg(2, 2);
    neg << 1.5, -0.5, 0.5, 0.5;
    EXPECT_THROW(MarkovChain<int>({1, 2}, neg), DegenerateChain);
    Matrix one(1, 1);
    one << 1.0;
    EXPECT_THROW(MarkovChain<int>({1}, one), DegenerateChain);
    Matrix ok(2, 2);
    ok << 0.5, 0.5, 0.5, 0.5;
    EXPECT_THROW(MarkovChain<int>({1, 1}, ok), DegenerateChain);
    EXPECT_THROW(MarkovChain<int>({1, 2, 3}, ok), DegenerateChain);
}
