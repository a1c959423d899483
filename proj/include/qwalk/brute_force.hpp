#pragma once

// Exhaustive ground-truth answers for the application problems. Elements and
// table values are 1-based.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/cost_model.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"

namespace qwalk {

using IntMatrix = std::vector<std::vector<long long>>;

namespace detail {

inline void require_work(std::size_t work, const Limits& limits, const char* what) {
    if (work > limits.max_enumeration) throw CapacityExceeded(what, work, limits.max_enumeration);
}

inline void require_square(const IntMatrix& m, std::size_t n, const char* what) {
    if (m.size() != n) throw InvalidArgument(std::string(what) + " must have " + std::to_string(n) + " rows");
    for (const auto& row : m) {
        if (row.size() != n) throw InvalidArgument(std::string(what) + " must be square");
    }
}

} // namespace detail

/// First i < j (lexicographic) with f(i) = f(j).
inline std::optional<std::pair<int, int>> find_collision(std::span<const long long> f, const Limits& limits = {}) {
    detail::require_work(f.size() * f.size(), limits, "element distinctness enumeration");
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            if (f[i] == f[j]) return std::pair{static_cast<int>(i) + 1, static_cast<int>(j) + 1};
        }
    }
    return std::nullopt;
}

/// First i with f(i) != 0.
inline std::optional<int> find_solution(std::span<const long long> f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != 0) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

/// First (i, j) with (AB)_ij != C_ij.
inline std::optional<std::pair<int, int>> find_product_mismatch(const IntMatrix& a, const IntMatrix& b,
                                                                const IntMatrix& c, const Limits& limits = {}) {
    const std::size_t n = a.size();
    detail::require_square(a, n, "A");
    detail::require_square(b, n, "B");
    detail::require_square(c, n, "C");
    detail::require_work(n * n * n, limits, "matrix product enumeration");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            long long acc = 0;
            for (std::size_t l = 0; l < n; ++l) acc += a[i][l] * b[l][j];
            if (acc != c[i][j]) return std::pair{static_cast<int>(i) + 1, static_cast<int>(j) + 1};
        }
    }
    return std::nullopt;
}

/// First (a, b, c) with (a o b) o c != a o (b o c). op[a-1][b-1] = a o b in [n].
inline std::optional<std::array<int, 3>> find_nonassociative_triple(const IntMatrix& op, const Limits& limits = {}) {
    const std::size_t n = op.size();
    detail::require_square(op, n, "operation table");
    detail::require_work(n * n * n, limits, "associativity enumeration");
    auto mul = [&](long long x, long long y) {
        if (x < 1 || y < 1 || static_cast<std::size_t>(x) > n || static_cast<std::size_t>(y) > n) {
            throw InvalidArgument("operation table value outside [1, n]");
        }
        return op[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(y - 1)];
    };
    for (long long a = 1; a <= static_cast<long long>(n); ++a) {
        for (long long b = 1; b <= static_cast<long long>(n); ++b) {
            const long long ab = mul(a, b);
            for (long long c = 1; c <= static_cast<long long>(n); ++c) {
                if (mul(ab, c) != mul(a, mul(b, c))) {
                    return std::array<int, 3>{static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
                }
            }
        }
    }
    return std::nullopt;
}

/// First triangle u < v < w in an undirected adjacency matrix.
inline std::optional<std::array<int, 3>> find_triangle(const IntMatrix& adj, const Limits& limits = {}) {
    const std::size_t n = adj.size();
    detail::require_square(adj, n, "adjacency matrix");
    detail::require_work(n * n * n, limits, "triangle enumeration");
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (!adj[u][v]) continue;
            for (std::size_t w = v + 1; w < n; ++w) {
                if (adj[u][w] && adj[v][w]) {
                    return std::array<int, 3>{static_cast<int>(u) + 1, static_cast<int>(v) + 1, static_cast<int>(w) + 1};
                }
            }
        }
    }
    return std::nullopt;
}

/// First generator pair i < j in [generators] with i o j != j o i. The group
/// they generate is commutative exactly when no such pair exists.
inline std::optional<std::pair<int, int>> find_noncommuting_pair(const IntMatrix& mult, int generators,
                                                                 const Limits& limits = {}) {
    const std::size_t m = mult.size();
    detail::require_square(mult, m, "multiplication table");
    if (generators < 1 || static_cast<std::size_t>(generators) > m) {
        throw InvalidArgument("generator count must lie in [1, table size]");
    }
    const auto g = static_cast<std::size_t>(generators);
    detail::require_work(g * g, limits, "commutativity enumeration");
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            if (mult[i][j] != mult[j][i]) return std::pair{static_cast<int>(i) + 1, static_cast<int>(j) + 1};
        }
    }
    return std::nullopt;
}

} // namespace qwalk
