#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qwalk/chain_analysis.hpp"
#include "qwalk/markov_chain.hpp"
#include "qwalk/reflection.hpp"

using namespace qwalk;

namespace {

struct Fixture {
    explicit Fixture(const Matrix& p) : a(analyze(p)), walk(p, a), pi(pi_state(p, a)) {}
    ChainAnalysis a;
    WalkOperator walk;
    EdgeState pi;
};

ReflectionReport suite(const Fixture& f, int s, int k) {
    ReflectionSuiteOptions o;
    o.random_vectors = 0;
    o.distinct_phases_only = true;
    return reflection_error_suite(f.walk, f.pi, ReflectionConfig{s, k}, o);
}

} // namespace

TEST(Reflection, CallCountClosedForm) {
    for (int s = 1; s <= 6; ++s) {
        for (int k = 1; k <= 4; ++k) {
            EXPECT_EQ(controlled_walk_calls({s, k}), static_cast<std::size_t>(2 * k * ((1 << s) - 1)));
        }
    }
    const Fixture f(build_complete_graph(4).transitions());
    EXPECT_EQ(suite(f, 3, 2).controlled_walk_calls, 2u * 2u * 7u);
}

TEST(Reflection, ConfigValidation) {
    EXPECT_THROW((ReflectionConfig{0, 1}.validate()), InvalidArgument);
    EXPECT_THROW((ReflectionConfig{1, 0}.validate()), InvalidArgument);
    EXPECT_THROW((ReflectionConfig{21, 2}.validate()), InvalidArgument);
}

TEST(Reflection, DefaultParameters) {
    // 2 pi / (2 acos(1/3)) = 2.55 -> 2 bits, plus 2.
    EXPECT_EQ(default_precision(2.0 * std::acos(1.0 / 3.0)), 4);
    EXPECT_EQ(default_precision(std::numbers::pi), 3);
    EXPECT_EQ(default_banks(1.0 / 16.0), 4);
    EXPECT_EQ(default_banks(1.0 / 4.0), 3);
    EXPECT_EQ(default_banks(1.0), 2);
}

TEST(Reflection, FixedPointIsExact) {
    std::vector<Matrix> chains{build_complete_graph(4).transitions(), build_johnson(5, 2).transitions(),
                               build_exchange_walk(3, 2).transitions()};
    for (const Matrix& p : chains) {
        const Fixture f(p);
        for (int s = 1; s <= 4; ++s) {
            for (int k = 1; k <= 2; ++k) {
                const PhaseEstimationReflection r(f.walk, {s, k});
                const AncillaRegister out = r.apply(f.pi);
                EXPECT_LE((out.zero_ancilla_component().amplitudes() - f.pi.amplitudes()).norm(), 1e-10);
                EXPECT_LE(out.ancilla_residual(), 1e-10);
            }
        }
    }
}

TEST(Reflection, NormPreserved) {
    const Fixture f(build_johnson(5, 2).transitions());
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    ComplexVector v(100);
    for (auto& c : v) c = Complex(g(rng), g(rng));
    v.normalize();
    const AncillaRegister out = approximate_reflection(f.walk, {3, 2}, EdgeState(10, v));
    EXPECT_NEAR(out.norm(), 1.0, 1e-10);
}

TEST(Reflection, EigenvectorNegatedAtAdequatePrecision) {
    const Fixture f(build_complete_graph(4).transitions());
    const auto dspec = discriminant_spectrum(discriminant(build_complete_graph(4), f.a));
    const int s = default_precision(dspec.phase_gap);
    const ReflectionReport rep = suite(f, s, 1);
    EXPECT_LT(rep.measured_error, 0.5);
    EXPECT_TRUE(rep.ancilla_restored);
    EXPECT_LE(rep.fixed_point_error, 1e-10);
}

TEST(Reflection, K4ErrorDecreasesWithPrecision) {
    const Fixture f(build_complete_graph(4).transitions());
    double prev = 2.0;
    for (int s = 2; s <= 6; ++s) {
        const double err = suite(f, s, 1).measured_error;
        EXPECT_LT(err, prev) << "s=" << s;
        prev = err;
    }
    EXPECT_LT(suite(f, 4, 1).measured_error, 0.5);
}

TEST(Reflection, ErrorNonIncreasingOnJohnson) {
    const Fixture f(build_johnson(5, 2).transitions());
    double prev = 2.0;
    for (int s = 2; s <= 6; ++s) {
        const double err = suite(f, s, 1).measured_error;
        EXPECT_LE(err, prev + 1e-6) << "s=" << s;
        prev = err;
    }
}

TEST(Reflection, ErrorDecaysWithBanks) {
    const Fixture f(build_complete_graph(4).transitions());
    const int s = 4;
    std::vector<double> err;
    for (int k = 1; k <= 3; ++k) err.push_back(suite(f, s, k).measured_error);
    for (std::size_t i = 0; i < err.size(); ++i) {
        EXPECT_LE(err[i], 4.0 * std::pow(2.0, -static_cast<double>(i + 1))) << "k=" << i + 1;
        if (i > 0) EXPECT_LT(err[i], 0.5 * err[i - 1]) << "k=" << i + 1;
    }
}

TEST(Reflection, RandomSumSpaceVectors) {
    const Fixture f(build_complete_graph(5).transitions());
    ReflectionSuiteOptions o;
    o.random_vectors = 6;
    o.seed = 3;
    const ReflectionReport rep = reflection_error_suite(f.walk, f.pi, {5, 1}, o);
    EXPECT_GT(rep.vectors_tested, 6u);
    EXPECT_TRUE(rep.ancilla_restored);
    EXPECT_LT(rep.measured_error, 0.5);
}

TEST(Reflection, RegisterCap) {
    const Fixture f(build_complete_graph(4).transitions());
    Limits small;
    small.max_register_amplitudes = 1000;
    EXPECT_THROW(approximate_reflection(f.walk, {4, 2}, f.pi, small), CapacityExceeded);
}

TEST(ExactReflection, Basics) {
    const Fixture f(build_complete_graph(4).transitions());
    EXPECT_LE((exact_reflection(f.pi, f.pi).amplitudes() - f.pi.amplitudes()).norm(), 1e-15);
    EdgeState orth = EdgeState::zero(4);
    orth(0, 1) = 1.0 / std::sqrt(2.0);
    orth(1, 0) = -1.0 / std::sqrt(2.0);
    ASSERT_NEAR(std::abs(f.pi.inner(orth)), 0.0, 1e-15);
    EXPECT_LE((exact_reflection(f.pi, orth).amplitudes() + orth.amplitudes()).norm(), 1e-15);
    EdgeState any = EdgeState::basis(4, 2, 3);
    EXPECT_NEAR(exact_reflection(f.pi, any).norm(), 1.0, 1e-15);
}

TEST(Reflection, FactoredMatchesCircuit) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::vector<Matrix> chains{build_complete_graph(4).transitions(), build_johnson(5, 2).transitions(),
                               build_exchange_walk(3, 2).transitions()};
    for (const Matrix& p : chains) {
        const Fixture f(p);
        for (const ReflectionConfig cfg : {ReflectionConfig{1, 1}, ReflectionConfig{2, 3}, ReflectionConfig{3, 2}}) {
            const PhaseEstimationReflection r(f.walk, cfg);
            // A register with every ancilla populated, as after earlier rounds.
            AncillaRegister a(cfg, f.pi);
            for (auto& z : a.amplitudes()) z = Complex(g(rng), g(rng));
            a.amplitudes().normalize();
            AncillaRegister b = a;
            r.apply(a);
            r.apply_circuit(b);
            EXPECT_LE((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}
