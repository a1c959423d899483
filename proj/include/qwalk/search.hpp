#pragma once

// Search problems over a Markov chain, cost accounting, and the three
// classical sampling/walking search algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/markov_chain.hpp"

namespace qwalk {

/// Cost charged per setup, update and check invocation.
struct CostWeights {
    double setup = 1.0;
    double update = 1.0;
    double check = 1.0;
};

/// Optional callbacks fired once per charged invocation. Applications use
/// them to drive a metered oracle alongside the arithmetic tally.
struct CostHooks {
    std::function<void()> on_setup;
    std::function<void()> on_update;
    std::function<void()> on_check;
};

struct CostCounter {
    double setup_units = 0.0;
    double update_units = 0.0;
    double check_units = 0.0;
    /// Unit-cost steps that do not touch the data (the "+2" of a walk step).
    double overhead_units = 0.0;
    std::size_t setups = 0;
    std::size_t updates = 0;
    std::size_t checks = 0;
    std::size_t walk_calls = 0;

    double total() const { return setup_units + update_units + check_units + overhead_units; }
    bool operator==(const CostCounter&) const = default;
};

/// Tallies charges into a CostCounter and fires the hooks.
class CostMeter {
public:
    CostMeter(CostWeights weights, const CostHooks* hooks) : weights_(weights), hooks_(hooks) {}

    void setup() {
        counter_.setup_units += weights_.setup;
        ++counter_.setups;
        if (hooks_ && hooks_->on_setup) hooks_->on_setup();
    }
    void update(std::size_t times = 1) {
        for (std::size_t i = 0; i < times; ++i) {
            counter_.update_units += weights_.update;
            ++counter_.updates;
            if (hooks_ && hooks_->on_update) hooks_->on_update();
        }
    }
    void check() {
        counter_.check_units += weights_.check;
        ++counter_.checks;
        if (hooks_ && hooks_->on_check) hooks_->on_check();
    }
    /// One walk call with data costs 4 updates plus 2 unit steps.
    void walk_calls(std::size_t calls) {
        counter_.walk_calls += calls;
        update(4 * calls);
        counter_.overhead_units += 2.0 * static_cast<double>(calls);
    }

    const CostCounter& counter() const noexcept { return counter_; }

private:
    CostWeights weights_;
    const CostHooks* hooks_;
    CostCounter counter_;
};

template <typename Label>
struct SearchProblem {
    MarkovChain<Label> chain;
    std::function<bool(const Label&)> marked;
    /// Lower bound on the stationary mass of the marked set when it is nonempty.
    double epsilon = 1.0;
    CostWeights costs;
    CostHooks hooks;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon <= 1.0)) {
            throw InvalidArgument("epsilon bound must lie in (0, 1], got " + std::to_string(epsilon));
        }
        if (!marked) throw InvalidArgument("search problem has no marked predicate");
    }

    std::vector<bool> marked_mask() const {
        std::vector<bool> mask(chain.size());
        for (std::size_t i = 0; i < chain.size(); ++i) mask[i] = marked(chain.states()[i]);
        return mask;
    }

    bool any_marked() const {
        for (const auto& s : chain.states()) {
            if (marked(s)) return true;
        }
        return false;
    }
};

template <typename Label>
struct SearchOutcome {
    std::optional<Label> found;
    bool success = false;
    CostCounter counters;
    /// (iteration, marked mass) for quantum runs.
    std::vector<std::pair<int, double>> trace;
};

/// Loop constants of the classical algorithms.
struct ClassicalConstants {
    double c1 = 3.0;
    double c2 = 3.0;
    double c2_prime = 3.0;
    double c3 = 3.0;
};

inline std::size_t ceil_count(double x) { return static_cast<std::size_t>(std::ceil(x - 1e-12)); }

namespace detail {

template <typename Label>
void require_symmetric(const SearchProblem<Label>& problem, const char* who) {
    problem.validate();
    if (!problem.chain.is_symmetric()) {
        throw InvalidArgument(std::string(who) + " needs a symmetric chain");
    }
}

template <typename Label>
class ChainSampler {
public:
    ChainSampler(const MarkovChain<Label>& chain, std::uint64_t seed) : chain_(&chain), rng_(seed) {
        rows_.reserve(chain.size());
        std::vector<double> w(chain.size());
        for (std::size_t x = 0; x < chain.size(); ++x) {
            for (std::size_t y = 0; y < chain.size(); ++y) w[y] = chain(x, y);
            rows_.emplace_back(w.begin(), w.end());
        }
    }

    std::size_t uniform() { return std::uniform_int_distribution<std::size_t>(0, chain_->size() - 1)(rng_); }
    std::size_t step(std::size_t x) { return rows_[x](rng_); }

private:
    const MarkovChain<Label>* chain_;
    std::mt19937_64 rng_;
    std::vector<std::discrete_distribution<std::size_t>> rows_;
};

template <typename Label>
SearchOutcome<Label> finish(const SearchProblem<Label>& problem, std::optional<std::size_t> hit, const CostMeter& meter) {
    SearchOutcome<Label> out;
    if (hit) {
        out.found = problem.chain.states()[*hit];
        out.success = true;
    }
    out.counters = meter.counter();
    return out;
}

} // namespace detail

/// Sample uniformly and check, ceil(c1 / eps) rounds, each costing S + C.
template <typename Label>
SearchOutcome<Label> classical_search_1(const SearchProblem<Label>& problem, std::uint64_t seed,
                                        const ClassicalConstants& k = {}) {
    detail::require_symmetric(problem, "search algorithm 1");
    detail::ChainSampler<Label> sampler(problem.chain, seed);
    CostMeter meter(problem.costs, &problem.hooks);
    const std::size_t rounds = ceil_count(k.c1 / problem.epsilon);
    for (std::size_t t = 0; t < rounds; ++t) {
        const std::size_t x = sampler.uniform();
        meter.setup();
        meter.check();
        if (problem.marked(problem.chain.states()[x])) return detail::finish(problem, x, meter);
    }
    return detail::finish<Label>(problem, std::nullopt, meter);
}

/// One uniform setup, then ceil(c2 / eps) rounds of check + ceil(c2' / delta) steps.
/// A full unsuccessful run costs S + t2 (t1 U + C).
template <typename Label>
SearchOutcome<Label> classical_search_2(const SearchProblem<Label>& problem, double delta, std::uint64_t seed,
                                        const ClassicalConstants& k = {}) {
    detail::require_symmetric(problem, "search algorithm 2");
    if (!(delta > 0.0)) throw InvalidArgument("eigenvalue gap must be positive");
    detail::ChainSampler<Label> sampler(problem.chain, seed);
    CostMeter meter(problem.costs, &problem.hooks);
    const std::size_t outer = ceil_count(k.c2 / problem.epsilon);
    const std::size_t inner = ceil_count(k.c2_prime / delta);
    std::size_t x = sampler.uniform();
    meter.setup();
    for (std::size_t t = 0; t < outer; ++t) {
        meter.check();
        if (problem.marked(problem.chain.states()[x])) return detail::finish(problem, x, meter);
        for (std::size_t i = 0; i < inner; ++i) x = sampler.step(x);
        meter.update(inner);
    }
    return detail::finish<Label>(problem, std::nullopt, meter);
}

/// One uniform setup, then ceil(c3 / (eps delta)) rounds of check + one step.
/// A full unsuccessful run costs S + t (U + C).
template <typename Label>
SearchOutcome<Label> classical_search_3(const SearchProblem<Label>& problem, double delta, std::uint64_t seed,
                                        const ClassicalConstants& k = {}) {
    detail::require_symmetric(problem, "search algorithm 3");
    if (!(delta > 0.0)) throw InvalidArgument("eigenvalue gap must be positive");
    detail::ChainSampler<Label> sampler(problem.chain, seed);
    CostMeter meter(problem.costs, &problem.hooks);
    const std::size_t steps = ceil_count(k.c3 / (problem.epsilon * delta));
    std::size_t x = sampler.uniform();
    meter.setup();
    for (std::size_t t = 0; t < steps; ++t) {
        meter.check();
        if (problem.marked(problem.chain.states()[x])) return detail::finish(problem, x, meter);
        x = sampler.step(x);
        meter.update();
    }
    return detail::finish<Label>(problem, std::nullopt, meter);
}

struct RotationPoint {
    int iteration = 0;
    /// sin((2i + 1) phi)
    double amplitude = 0.0;
    double probability = 0.0;
};

/// Success amplitude of i ideal Grover/MNRS rotations, sin(phi) = sqrt(eps).
inline std::vector<RotationPoint> ideal_rotation_trace(double epsilon, int iterations) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
    if (iterations < 0) throw InvalidArgument("iteration count must be non-negative");
    const double phi = std::asin(std::sqrt(epsilon));
    std::vector<RotationPoint> out;
    out.reserve(static_cast<std::size_t>(iterations) + 1);
    for (int i = 0; i <= iterations; ++i) {
        const double a = std::sin((2 * i + 1) * phi);
        out.push_back({i, a, a * a});
    }
    return out;
}

/// round(pi / (4 phi) - 1/2), the iteration count closest to a full rotation onto |mu>.
inline int optimal_iterations(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
    const double phi = std::asin(std::sqrt(epsilon));
    return std::max(0, static_cast<int>(std::lround(std::numbers::pi / (4.0 * phi) - 0.5)));
}

} // namespace qwalk
