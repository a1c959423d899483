#pragma once

// The quantum search loop: start at |pi>, alternate the marked phase flip
// with a reflection about |pi> (ideal or phase-estimation based), then read
// the first register.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qwalk/chain_analysis.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"
#include "qwalk/quantum_walk.hpp"
#include "qwalk/reflection.hpp"
#include "qwalk/search.hpp"

namespace qwalk {

struct QuantumSearchConfig {
    /// Phase-estimation reflection; the ideal 2|pi><pi| - Id when empty.
    std::optional<ReflectionConfig> reflection;
    /// Defaults to optimal_iterations(problem.epsilon).
    std::optional<int> iterations;
    /// With a phase-estimation reflection, also evolve the ideal trajectory
    /// and record the distance between the two after every round.
    bool track_exact = false;
};

struct QuantumRunReport {
    int iterations = 0;
    /// Marked mass after i rounds, i = 0..iterations.
    std::vector<double> marked_mass;
    /// Same for the ideal trajectory (when tracked or when running ideal).
    std::vector<double> exact_marked_mass;
    /// ||psi_i - phi_i|| with phi_i embedded at zero ancillas.
    std::vector<double> deviation;
    /// Register norm after every round; evolution never renormalizes.
    std::vector<double> norm;
    /// Final probability of each first-register value.
    std::vector<double> first_register;
    CostCounter counters;
};

namespace detail {

inline void flip_marked(ComplexVector& amps, std::size_t states, const std::vector<bool>& mask) {
    const std::size_t e = states * states;
    const std::size_t blocks = static_cast<std::size_t>(amps.size()) / e;
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t x = 0; x < states; ++x) {
            if (!mask[x]) continue;
            amps.segment(static_cast<Eigen::Index>(b * e + x * states), static_cast<Eigen::Index>(states)) *= -1.0;
        }
    }
}

inline std::vector<double> first_register_distribution(const ComplexVector& amps, std::size_t states) {
    std::vector<double> dist(states, 0.0);
    const std::size_t e = states * states;
    const std::size_t blocks = static_cast<std::size_t>(amps.size()) / e;
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t x = 0; x < states; ++x) {
            dist[x] +=
                amps.segment(static_cast<Eigen::Index>(b * e + x * states), static_cast<Eigen::Index>(states)).squaredNorm();
        }
    }
    return dist;
}

inline double marked_mass(const ComplexVector& amps, std::size_t states, const std::vector<bool>& mask) {
    const auto dist = first_register_distribution(amps, states);
    double m = 0.0;
    for (std::size_t x = 0; x < states; ++x) {
        if (mask[x]) m += dist[x];
    }
    return m;
}

} // namespace detail

/// Evolves the search state; deterministic in (problem, config).
template <typename Label>
QuantumRunReport run_quantum_search(const SearchProblem<Label>& problem, const ChainAnalysis& analysis,
                                    const WalkOperator& walk, const QuantumSearchConfig& cfg, const Limits& limits = {}) {
    problem.validate();
    if (!analysis.reversible) throw InvalidArgument("quantum search needs a reversible chain");
    if (walk.states() != problem.chain.size()) throw InvalidArgument("walk and problem chains differ in size");
    const std::size_t n = problem.chain.size();
    const auto mask = problem.marked_mask();
    const EdgeState pi = pi_state(problem.chain, analysis);

    QuantumRunReport rep;
    rep.iterations = cfg.iterations.value_or(optimal_iterations(problem.epsilon));
    if (rep.iterations < 0) throw InvalidArgument("iteration count must be non-negative");

    CostMeter meter(problem.costs, &problem.hooks);
    meter.setup();
    meter.update();

    const bool approximate = cfg.reflection.has_value();
    const bool with_exact = !approximate || cfg.track_exact;
    ComplexVector exact = pi.amplitudes();
    std::optional<AncillaRegister> reg;
    std::optional<PhaseEstimationReflection> refl;
    if (approximate) {
        refl.emplace(walk, *cfg.reflection);
        reg.emplace(*cfg.reflection, pi, limits);
    }

    auto record = [&] {
        if (with_exact) rep.exact_marked_mass.push_back(detail::marked_mass(exact, n, mask));
        if (approximate) {
            rep.marked_mass.push_back(detail::marked_mass(reg->amplitudes(), n, mask));
            rep.norm.push_back(reg->norm());
            if (with_exact) {
                const auto e = static_cast<Eigen::Index>(n * n);
                const double head = (reg->amplitudes().head(e) - exact).squaredNorm();
                const double tail = std::pow(reg->ancilla_residual(), 2);
                rep.deviation.push_back(std::sqrt(head + tail));
            }
        } else {
            rep.marked_mass.push_back(rep.exact_marked_mass.back());
            rep.norm.push_back(exact.norm());
        }
    };

    record();
    for (int i = 0; i < rep.iterations; ++i) {
        meter.check();
        if (with_exact) {
            detail::flip_marked(exact, n, mask);
            const Complex overlap = pi.amplitudes().dot(exact);
            exact = 2.0 * overlap * pi.amplitudes() - exact;
        }
        if (approximate) {
            detail::flip_marked(reg->amplitudes(), n, mask);
            refl->apply(*reg);
            meter.walk_calls(refl->calls_per_application());
        }
        record();
    }

    rep.first_register = detail::first_register_distribution(approximate ? reg->amplitudes() : exact, n);
    rep.counters = meter.counter();
    return rep;
}

/// Observes the first register of a finished run with the given seed.
template <typename Label>
SearchOutcome<Label> sample_outcome(const SearchProblem<Label>& problem, const QuantumRunReport& run,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> dist(run.first_register.begin(), run.first_register.end());
    const std::size_t x = dist(rng);
    SearchOutcome<Label> out;
    const Label& label = problem.chain.states()[x];
    if (problem.marked(label)) {
        out.found = label;
        out.success = true;
    }
    out.counters = run.counters;
    for (std::size_t i = 0; i < run.marked_mass.size(); ++i) out.trace.emplace_back(static_cast<int>(i), run.marked_mass[i]);
    return out;
}

template <typename Label>
SearchOutcome<Label> quantum_search(const SearchProblem<Label>& problem, const ChainAnalysis& analysis,
                                    const WalkOperator& walk, const QuantumSearchConfig& cfg, std::uint64_t seed,
                                    const Limits& limits = {}) {
    return sample_outcome(problem, run_quantum_search(problem, analysis, walk, cfg, limits), seed);
}

} // namespace qwalk
