#pragma once

// Finite Markov chains over opaque ordered labels, and the builders for the
// chain families used by the search applications: the complete graph, the
// Johnson graph J(n,r) and the lazy exchange walk on r-tuples.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"

namespace qwalk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted r-subset of [n] (1-based).
using Subset = std::vector<int>;
/// Ordered r-tuple of distinct elements of [n] (1-based).
using Tuple = std::vector<int>;

inline constexpr double kRowSumTolerance = 1e-12;

/**
 * @brief Row-stochastic transition matrix over a labeled state set.
 *
 * Labels are opaque; they only need a strict weak order so that lookup by
 * label works. All matrices downstream index states by position.
 */
template <typename Label>
class MarkovChain {
public:
    using label_type = Label;

    MarkovChain(std::vector<Label> states, Matrix transitions)
        : states_(std::move(states)), p_(std::move(transitions)) {
        validate();
        for (std::size_t i = 0; i < states_.size(); ++i) {
            if (!index_.emplace(states_[i], i).second) {
                throw DegenerateChain("duplicate state label at position " + std::to_string(i));
            }
        }
    }

    const std::vector<Label>& states() const noexcept { return states_; }
    const Matrix& transitions() const noexcept { return p_; }
    std::size_t size() const noexcept { return states_.size(); }
    double operator()(std::size_t x, std::size_t y) const { return p_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)); }

    std::optional<std::size_t> index_of(const Label& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool is_symmetric(double tol = 1e-12) const { return (p_ - p_.transpose()).cwiseAbs().maxCoeff() <= tol; }

private:
    void validate() const {
        const auto n = static_cast<Eigen::Index>(states_.size());
        if (n < 2) throw DegenerateChain("a chain needs at least 2 states");
        if (p_.rows() != n || p_.cols() != n) {
            throw DegenerateChain("transition matrix is " + std::to_string(p_.rows()) + "x" +
                                  std::to_string(p_.cols()) + " for " + std::to_string(n) + " states");
        }
        for (Eigen::Index x = 0; x < n; ++x) {
            for (Eigen::Index y = 0; y < n; ++y) {
                const double v = p_(x, y);
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw DegenerateChain("entry (" + std::to_string(x) + "," + std::to_string(y) +
                                          ") is not a probability");
                }
            }
            const double sum = p_.row(x).sum();
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                throw DegenerateChain("row " + std::to_string(x) + " sums to " + std::to_string(sum));
            }
        }
    }

    std::vector<Label> states_;
    Matrix p_;
    std::map<Label, std::size_t> index_;
};

namespace detail {

// n choose r, saturating at max size_t.
inline std::size_t binomial(std::size_t n, std::size_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    unsigned long long acc = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        // acc * (n - r + i) / i stays integral at every step
        const unsigned long long num = n - r + i;
        if (acc > ~0ULL / num) return static_cast<std::size_t>(-1);
        acc = acc * num / i;
    }
    return static_cast<std::size_t>(acc);
}

// n! / (n - r)!, saturating.
inline std::size_t falling_factorial(std::size_t n, std::size_t r) {
    unsigned long long acc = 1;
    for (std::size_t i = 0; i < r; ++i) {
        const unsigned long long f = n - i;
        if (acc > ~0ULL / f) return static_cast<std::size_t>(-1);
        acc *= f;
    }
    return static_cast<std::size_t>(acc);
}

inline std::vector<Subset> enumerate_subsets(int n, int r) {
    std::vector<Subset> out;
    Subset cur(static_cast<std::size_t>(r));
    std::iota(cur.begin(), cur.end(), 1);
    while (true) {
        out.push_back(cur);
        int i = r - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - r + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

inline void enumerate_tuples(int n, int r, Tuple& cur, std::vector<bool>& used, std::vector<Tuple>& out) {
    if (static_cast<int>(cur.size()) == r) {
        out.push_back(cur);
        return;
    }
    for (int v = 1; v <= n; ++v) {
        if (used[static_cast<std::size_t>(v)]) continue;
        used[static_cast<std::size_t>(v)] = true;
        cur.push_back(v);
        enumerate_tuples(n, r, cur, used, out);
        cur.pop_back();
        used[static_cast<std::size_t>(v)] = false;
    }
}

} // namespace detail

/// Symmetric random walk on the complete graph K_n, states 1..n.
inline MarkovChain<int> build_complete_graph(int n, const Limits& limits = {}) {
    if (n < 3) throw DegenerateChain("complete graph walk needs n >= 3 (K_2 is periodic), got " + std::to_string(n));
    if (static_cast<std::size_t>(n) > limits.max_states) {
        throw CapacityExceeded("complete graph states", static_cast<std::size_t>(n), limits.max_states);
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 1);
    Matrix p = Matrix::Constant(n, n, 1.0 / (n - 1));
    p.diagonal().setZero();
    return MarkovChain<int>(std::move(labels), std::move(p));
}

/// Uniform walk on the Johnson graph J(n,r): r-subsets of [n], one swap per step.
inline MarkovChain<Subset> build_johnson(int n, int r, const Limits& limits = {}) {
    if (r <= 0 || 2 * r > n) {
        throw DegenerateChain("Johnson graph needs 0 < r <= n/2, got n=" + std::to_string(n) + " r=" + std::to_string(r));
    }
    const std::size_t count = detail::binomial(static_cast<std::size_t>(n), static_cast<std::size_t>(r));
    if (count > limits.max_states) throw CapacityExceeded("Johnson graph states", count, limits.max_states);

    auto subsets = detail::enumerate_subsets(n, r);
    std::map<Subset, Eigen::Index> index;
    for (std::size_t i = 0; i < subsets.size(); ++i) index.emplace(subsets[i], static_cast<Eigen::Index>(i));

    const auto size = static_cast<Eigen::Index>(subsets.size());
    const double w = 1.0 / (static_cast<double>(r) * (n - r));
    Matrix p = Matrix::Zero(size, size);
    std::vector<bool> member(static_cast<std::size_t>(n) + 1);
    for (Eigen::Index i = 0; i < size; ++i) {
        const Subset& s = subsets[static_cast<std::size_t>(i)];
        std::fill(member.begin(), member.end(), false);
        for (int v : s) member[static_cast<std::size_t>(v)] = true;
        for (std::size_t out = 0; out < s.size(); ++out) {
            for (int in = 1; in <= n; ++in) {
                if (member[static_cast<std::size_t>(in)]) continue;
                Subset t = s;
                t[out] = in;
                std::sort(t.begin(), t.end());
                p(i, index.at(t)) += w;
            }
        }
    }
    return MarkovChain<Subset>(std::move(subsets), std::move(p));
}

/**
 * @brief Lazy exchange walk on r-tuples of distinct elements of [n].
 *
 * With probability 1/2 the walk stays. Otherwise it draws i in [r] and
 * j in [n] uniformly: if j already sits at position m the entries at i and m
 * are exchanged (a no-op when m = i), else position i is overwritten by j.
 * Probabilities come from exact enumeration of the r*n draws.
 */
inline MarkovChain<Tuple> build_exchange_walk(int n, int r, const Limits& limits = {}) {
    if (r <= 0 || r >= n) {
        throw DegenerateChain("exchange walk needs 0 < r < n, got n=" + std::to_string(n) + " r=" + std::to_string(r));
    }
    const std::size_t count = detail::falling_factorial(static_cast<std::size_t>(n), static_cast<std::size_t>(r));
    if (count > limits.max_states) throw CapacityExceeded("exchange walk states", count, limits.max_states);

    std::vector<Tuple> tuples;
    tuples.reserve(count);
    Tuple cur;
    std::vector<bool> used(static_cast<std::size_t>(n) + 1);
    detail::enumerate_tuples(n, r, cur, used, tuples);

    std::map<Tuple, Eigen::Index> index;
    for (std::size_t i = 0; i < tuples.size(); ++i) index.emplace(tuples[i], static_cast<Eigen::Index>(i));

    const auto size = static_cast<Eigen::Index>(tuples.size());
    const double draw = 0.5 / (static_cast<double>(r) * n);
    Matrix p = Matrix::Zero(size, size);
    for (Eigen::Index u = 0; u < size; ++u) {
        const Tuple& t = tuples[static_cast<std::size_t>(u)];
        p(u, u) += 0.5;
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (int j = 1; j <= n; ++j) {
                Tuple next = t;
                auto pos = std::find(next.begin(), next.end(), j);
                if (pos != next.end()) {
                    std::iter_swap(next.begin() + static_cast<std::ptrdiff_t>(i), pos);
                } else {
                    next[i] = j;
                }
                p(u, index.at(next)) += draw;
            }
        }
    }
    return MarkovChain<Tuple>(std::move(tuples), std::move(p));
}

} // namespace qwalk
