#pragma once

// Query-model instances and their search problems: Unordered Search on the
// complete graph, Element Distinctness on the Johnson graph, plus instance
// files and the brute-force dispatcher for every application kind.

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qwalk/brute_force.hpp"
#include "qwalk/cost_model.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"
#include "qwalk/markov_chain.hpp"
#include "qwalk/search.hpp"

namespace qwalk {

/**
 * @brief Function table behind a query oracle.
 *
 * `query` is the algorithm's access path and is counted, repeats included.
 * `table` is the simulator's view of the same data and is not counted.
 */
class OracleInstance {
public:
    explicit OracleInstance(std::vector<long long> table) : table_(std::move(table)) {
        if (table_.empty()) throw InvalidArgument("oracle table is empty");
    }

    long long query(int i) {
        if (i < 1 || static_cast<std::size_t>(i) > table_.size()) {
            throw InvalidArgument("oracle query " + std::to_string(i) + " outside [1, " + std::to_string(table_.size()) + "]");
        }
        ++query_count_;
        return table_[static_cast<std::size_t>(i - 1)];
    }

    std::size_t query_count() const noexcept { return query_count_; }
    void reset_count() noexcept { query_count_ = 0; }
    const std::vector<long long>& table() const noexcept { return table_; }
    int size() const noexcept { return static_cast<int>(table_.size()); }

private:
    std::vector<long long> table_;
    std::size_t query_count_ = 0;
};

/// Stationary mass of the marked set under the uniform distribution.
template <typename Label>
double uniform_marked_fraction(const SearchProblem<Label>& problem) {
    std::size_t hits = 0;
    for (const auto& s : problem.chain.states()) hits += problem.marked(s) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(problem.chain.size());
}

/// C(n-2, r-2) / C(n, r): fraction of r-subsets containing one fixed pair.
inline double single_collision_epsilon(int n, int r) {
    if (r < 2) return 0.0;
    return static_cast<double>(detail::binomial(static_cast<std::size_t>(n - 2), static_cast<std::size_t>(r - 2))) /
           static_cast<double>(detail::binomial(static_cast<std::size_t>(n), static_cast<std::size_t>(r)));
}

/**
 * Element Distinctness on J(n,r): a subset is marked when it holds two
 * distinct indices with equal values. Data per subset is {(v, f(v))}, so
 * setup costs r queries, an update costs 1 (the entering element) and
 * checking is free.
 *
 * Hooks query the oracle: setup reads elements 1..r, each update reads the
 * next element in round-robin order. The epsilon bound is the exact marked
 * fraction when a collision exists and (r/n)^2 / 4 otherwise.
 */
inline SearchProblem<Subset> element_distinctness_problem(std::shared_ptr<OracleInstance> f, int r,
                                                          const Limits& limits = {}) {
    if (!f) throw InvalidArgument("element distinctness needs an oracle");
    const int n = f->size();
    SearchProblem<Subset> problem{build_johnson(n, r, limits), {}, 1.0, {}, {}};
    problem.marked = [f](const Subset& s) {
        const auto& values = f->table();
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                if (values[static_cast<std::size_t>(s[i] - 1)] == values[static_cast<std::size_t>(s[j] - 1)]) return true;
            }
        }
        return false;
    };
    problem.costs = CostWeights{static_cast<double>(r), 1.0, 0.0};
    const double frac = uniform_marked_fraction(problem);
    problem.epsilon = frac > 0.0 ? frac : 0.25 * (static_cast<double>(r) / n) * (static_cast<double>(r) / n);

    auto cursor = std::make_shared<int>(0);
    problem.hooks.on_setup = [f, r] {
        for (int i = 1; i <= r; ++i) f->query(i);
    };
    problem.hooks.on_update = [f, cursor, n] {
        f->query(*cursor % n + 1);
        ++*cursor;
    };
    return problem;
}

/**
 * Unordered Search on K_n: v is marked when f(v) != 0. No data structure, so
 * setup, update and check each cost one query; epsilon = k/n for k
 * solutions (1/n when there are none).
 */
inline SearchProblem<int> unordered_search_problem(std::shared_ptr<OracleInstance> f, const Limits& limits = {}) {
    if (!f) throw InvalidArgument("unordered search needs an oracle");
    const int n = f->size();
    SearchProblem<int> problem{build_complete_graph(n, limits), {}, 1.0, {}, {}};
    problem.marked = [f](const int& v) { return f->table()[static_cast<std::size_t>(v - 1)] != 0; };
    problem.costs = CostWeights{1.0, 1.0, 1.0};
    const double frac = uniform_marked_fraction(problem);
    problem.epsilon = frac > 0.0 ? frac : 1.0 / n;

    auto cursor = std::make_shared<int>(0);
    auto touch = [f, cursor, n] {
        f->query(*cursor % n + 1);
        ++*cursor;
    };
    problem.hooks.on_setup = touch;
    problem.hooks.on_update = touch;
    problem.hooks.on_check = touch;
    return problem;
}

/// Instance file: { "kind", "n", "table": [...] }.
///   unordered, ed   table = [f(1), ..., f(n)]
///   mpv             table = [A, B, C], each n x n
///   assoc           table = n x n operation table, values in [1, n]
///   triangle        table = n x n 0/1 adjacency matrix
///   gc              table = m x m multiplication table over [m]; generators are 1..n
struct AppInstance {
    AppKind kind = AppKind::ElementDistinctness;
    int n = 0;
    nlohmann::json table;
};

inline AppInstance parse_instance(const nlohmann::json& doc) {
    AppInstance inst;
    try {
        inst.kind = parse_app_kind(doc.at("kind").get<std::string>());
        inst.n = doc.at("n").get<int>();
        inst.table = doc.at("table");
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed instance file: ") + e.what());
    }
    if (inst.n < 1) throw InvalidArgument("instance n must be positive");
    return inst;
}

inline std::vector<long long> instance_vector(const AppInstance& inst) {
    auto v = inst.table.get<std::vector<long long>>();
    if (static_cast<int>(v.size()) != inst.n) throw InvalidArgument("table length differs from n");
    return v;
}

/// Exhaustive answer as JSON: { "kind", "found", "witness" }.
inline nlohmann::json brute_force_oracle(const AppInstance& inst, const Limits& limits = {}) {
    nlohmann::json out{{"kind", to_string(inst.kind)}, {"found", false}, {"witness", nullptr}};
    auto put = [&](const auto& w) {
        if (w) {
            out["found"] = true;
            out["witness"] = *w;
        }
    };
    try {
        switch (inst.kind) {
        case AppKind::UnorderedSearch: put(find_solution(instance_vector(inst))); break;
        case AppKind::ElementDistinctness: put(find_collision(instance_vector(inst), limits)); break;
        case AppKind::MatrixProductVerification: {
            const auto m = inst.table.get<std::vector<IntMatrix>>();
            if (m.size() != 3) throw InvalidArgument("mpv table must hold [A, B, C]");
            put(find_product_mismatch(m[0], m[1], m[2], limits));
            break;
        }
        case AppKind::Associativity: put(find_nonassociative_triple(inst.table.get<IntMatrix>(), limits)); break;
        case AppKind::Triangle: put(find_triangle(inst.table.get<IntMatrix>(), limits)); break;
        case AppKind::GroupCommutativity:
            put(find_noncommuting_pair(inst.table.get<IntMatrix>(), inst.n, limits));
            break;
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed instance table: ") + e.what());
    }
    return out;
}

} // namespace qwalk
