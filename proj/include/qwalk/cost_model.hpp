#pragma once

// Query-cost expressions of the walk-based applications with every hidden
// constant set to 1, and a minimizer over the subset size r.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

enum class AppKind {
    UnorderedSearch,
    ElementDistinctness,
    MatrixProductVerification,
    Associativity,
    Triangle,
    GroupCommutativity,
};

inline constexpr std::array<std::pair<AppKind, std::string_view>, 6> kAppKindNames{{
    {AppKind::UnorderedSearch, "unordered"},
    {AppKind::ElementDistinctness, "ed"},
    {AppKind::MatrixProductVerification, "mpv"},
    {AppKind::Associativity, "assoc"},
    {AppKind::Triangle, "triangle"},
    {AppKind::GroupCommutativity, "gc"},
}};

inline std::string_view to_string(AppKind k) {
    for (const auto& [kind, name] : kAppKindNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

inline AppKind parse_app_kind(std::string_view s) {
    for (const auto& [kind, name] : kAppKindNames) {
        if (name == s) return kind;
    }
    throw InvalidArgument("unknown application kind '" + std::string(s) + "'");
}

/// Closed range of r (for UnorderedSearch: the number of solutions k).
struct RRange {
    double lo;
    double hi;
};

inline RRange valid_r_range(AppKind kind, double n) {
    switch (kind) {
    case AppKind::GroupCommutativity: return {2.0, n - 1.0};
    default: return {1.0, n};
    }
}

/// Range the optimizer searches: Johnson-graph walks need r <= n/2.
inline RRange search_r_range(AppKind kind, double n) {
    switch (kind) {
    case AppKind::GroupCommutativity: return {2.0, n - 1.0};
    case AppKind::UnorderedSearch: return {1.0, 1.0};
    default: return {1.0, std::floor(n / 2.0)};
    }
}

/**
 * Cost with unit constants:
 *   ED         r + (n/r) sqrt(r)
 *   MPV        r n + (n/r) sqrt(r) n
 *   Assoc      r^2 + (n/r) (sqrt(r) r + sqrt(r n))
 *   Triangle   r^2 + (n/r) (sqrt(r) r + sqrt(n) r^{2/3})
 *   GC         r + (n/r) (sqrt(r ln r) ln r + 1)
 *   Unordered  sqrt(n / k), with k passed as r
 */
inline double cost_model(AppKind kind, double n, double r) {
    if (!(n >= 1.0)) throw InvalidArgument("n must be at least 1");
    const RRange range = valid_r_range(kind, n);
    if (!(r >= range.lo && r <= range.hi)) {
        throw InvalidArgument("r=" + std::to_string(r) + " outside [" + std::to_string(range.lo) + ", " +
                              std::to_string(range.hi) + "] for " + std::string(to_string(kind)));
    }
    const double walk = n / r;
    switch (kind) {
    case AppKind::UnorderedSearch: return std::sqrt(n / r);
    case AppKind::ElementDistinctness: return r + walk * std::sqrt(r);
    case AppKind::MatrixProductVerification: return r * n + walk * std::sqrt(r) * n;
    case AppKind::Associativity: return r * r + walk * (std::sqrt(r) * r + std::sqrt(r * n));
    case AppKind::Triangle: return r * r + walk * (std::sqrt(r) * r + std::sqrt(n) * std::cbrt(r * r));
    case AppKind::GroupCommutativity: {
        const double lr = std::log(r);
        return r + walk * (std::sqrt(r * lr) * lr + 1.0);
    }
    }
    throw InvalidArgument("unhandled application kind");
}

struct OptimizeResult {
    std::int64_t r_star = 0;
    double cost_star = 0.0;
    /// Local log-log slope of cost_star(n) around n.
    double exponent = 0.0;
    /// log(cost_star) / log(n), constants included.
    double log_ratio = 0.0;
};

namespace detail {

inline std::pair<std::int64_t, double> minimize_r(AppKind kind, double n) {
    const RRange range = search_r_range(kind, n);
    const auto lo = static_cast<std::int64_t>(std::ceil(range.lo));
    const auto hi = static_cast<std::int64_t>(std::floor(range.hi));
    if (hi < lo) throw InvalidArgument("empty r range for n=" + std::to_string(n));

    constexpr int kGridPoints = 256;
    std::vector<std::int64_t> grid;
    grid.reserve(kGridPoints + 2);
    const double span = std::log(static_cast<double>(hi) / static_cast<double>(lo));
    for (int i = 0; i <= kGridPoints; ++i) {
        const auto r = static_cast<std::int64_t>(std::llround(static_cast<double>(lo) * std::exp(span * i / kGridPoints)));
        const std::int64_t c = std::clamp(r, lo, hi);
        if (grid.empty() || grid.back() != c) grid.push_back(c);
    }

    std::size_t best = 0;
    double best_cost = cost_model(kind, n, static_cast<double>(grid[0]));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double c = cost_model(kind, n, static_cast<double>(grid[i]));
        if (c < best_cost) {
            best_cost = c;
            best = i;
        }
    }
    // Integer scan between the neighbouring grid points; ascending order keeps
    // ties at the smaller r.
    const std::int64_t from = grid[best == 0 ? 0 : best - 1];
    const std::int64_t to = grid[std::min(best + 1, grid.size() - 1)];
    std::int64_t r_star = from;
    double cost_star = cost_model(kind, n, static_cast<double>(from));
    for (std::int64_t r = from + 1; r <= to; ++r) {
        const double c = cost_model(kind, n, static_cast<double>(r));
        if (c < cost_star) {
            cost_star = c;
            r_star = r;
        }
    }
    return {r_star, cost_star};
}

} // namespace detail

/// Minimizes cost_model over integer r and fits the scaling exponent as the
/// least-squares slope of log cost_star over n * 10^u, u in [-1/2, 1/2].
inline OptimizeResult optimize_r(AppKind kind, double n) {
    if (!(n >= 100.0)) throw InvalidArgument("optimize_r needs n >= 100");
    OptimizeResult out;
    const auto [r, c] = detail::minimize_r(kind, n);
    out.r_star = r;
    out.cost_star = c;
    out.log_ratio = std::log(c) / std::log(n);

    constexpr std::array<double, 5> offsets{-0.5, -0.25, 0.0, 0.25, 0.5};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double u : offsets) {
        const double m = std::round(n * std::pow(10.0, u));
        const double x = std::log(m);
        const double y = std::log(detail::minimize_r(kind, m).second);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(offsets.size());
    out.exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return out;
}

} // namespace qwalk
