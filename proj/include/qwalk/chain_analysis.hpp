#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/markov_chain.hpp"

namespace qwalk {

inline constexpr double kStationaryTolerance = 1e-10;
inline constexpr double kDetailedBalanceTolerance = 1e-10;

/**
 * @brief Spectral and structural summary of an ergodic chain.
 *
 * `delta` is the eigenvalue gap 1 - |lambda_2| with lambda_2 of second
 * largest magnitude. `one_sided_gap` is 1 - lambda_2 with lambda_2 the second
 * largest eigenvalue by real part; this is the quantity the Johnson-graph
 * closed form n / (r (n - r)) describes. The two coincide unless a negative
 * eigenvalue dominates in magnitude.
 */
struct ChainAnalysis {
    Vector pi;
    double delta = 0.0;
    double one_sided_gap = 0.0;
    bool reversible = false;
    bool ergodic = false;
    Matrix p_star;
    /// Eigenvalues of P sorted by decreasing magnitude (ties by decreasing real part).
    std::vector<std::complex<double>> eigenvalues;
};

namespace detail {

inline std::vector<std::size_t> reachable(const Matrix& p, bool reverse) {
    const auto n = static_cast<std::size_t>(p.rows());
    std::vector<std::size_t> level(n, static_cast<std::size_t>(-1));
    std::queue<std::size_t> todo;
    level[0] = 0;
    todo.push(0);
    while (!todo.empty()) {
        const std::size_t u = todo.front();
        todo.pop();
        for (std::size_t v = 0; v < n; ++v) {
            const double w = reverse ? p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u))
                                     : p(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
            if (w > 0.0 && level[v] == static_cast<std::size_t>(-1)) {
                level[v] = level[u] + 1;
                todo.push(v);
            }
        }
    }
    return level;
}

// Period of an irreducible chain: gcd over support edges (u,v) of
// level(u) + 1 - level(v), levels taken from a BFS rooted at state 0.
inline long period(const Matrix& p, const std::vector<std::size_t>& level) {
    long g = 0;
    const auto n = p.rows();
    for (Eigen::Index u = 0; u < n; ++u) {
        for (Eigen::Index v = 0; v < n; ++v) {
            if (p(u, v) > 0.0) {
                const long d = static_cast<long>(level[static_cast<std::size_t>(u)]) + 1 -
                               static_cast<long>(level[static_cast<std::size_t>(v)]);
                g = std::gcd(g, std::abs(d));
            }
        }
    }
    return g;
}

} // namespace detail

/// Irreducibility by reachability on the support of P, aperiodicity by the
/// gcd of cycle lengths through state 0. Throws NotErgodic with the reason.
inline void check_ergodic(const Matrix& p) {
    const auto fwd = detail::reachable(p, false);
    const auto bwd = detail::reachable(p, true);
    const auto unreached = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        if (fwd[i] == unreached || bwd[i] == unreached) {
            throw NotErgodic("chain is reducible: state " + std::to_string(i) + " does not communicate with state 0");
        }
    }
    const long g = detail::period(p, fwd);
    if (g != 1) throw NotErgodic("chain is periodic with period " + std::to_string(g));
}

inline ChainAnalysis analyze(const Matrix& p) {
    check_ergodic(p);
    const auto n = p.rows();

    ChainAnalysis out;
    out.ergodic = true;

    // Stationary distribution: left eigenvector for the eigenvalue closest to 1.
    Eigen::EigenSolver<Matrix> left(p.transpose());
    const auto& evals = left.eigenvalues();
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (std::abs(evals(i) - 1.0) < std::abs(evals(top) - 1.0)) top = i;
    }
    Vector v = left.eigenvectors().col(top).real();
    v /= v.sum();
    out.pi = v;
    if (out.pi.minCoeff() <= 0.0) throw NotErgodic("stationary vector has a non-positive entry");
    const double residual = (out.pi.transpose() * p - out.pi.transpose()).cwiseAbs().maxCoeff();
    if (residual > kStationaryTolerance) {
        throw NotErgodic("stationary vector residual " + std::to_string(residual) + " exceeds tolerance");
    }

    // p*_xy = pi_y p_yx / pi_x
    out.p_star = out.pi.cwiseInverse().asDiagonal() * p.transpose() * out.pi.asDiagonal();
    Matrix flow = out.pi.asDiagonal() * p;
    out.reversible = (flow - flow.transpose()).cwiseAbs().maxCoeff() <= kDetailedBalanceTolerance;

    std::vector<std::complex<double>> lambda;
    lambda.reserve(static_cast<std::size_t>(n));
    if (out.reversible) {
        // Symmetrized similarity transform gives a real spectrum to full precision.
        const Vector s = out.pi.cwiseSqrt();
        Matrix d = s.asDiagonal() * p * s.cwiseInverse().asDiagonal();
        d = 0.5 * (d + d.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> sym(d, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < n; ++i) lambda.emplace_back(sym.eigenvalues()(i), 0.0);
    } else {
        Eigen::EigenSolver<Matrix> gen(p, false);
        for (Eigen::Index i = 0; i < n; ++i) lambda.push_back(gen.eigenvalues()(i));
    }
    std::sort(lambda.begin(), lambda.end(), [](auto a, auto b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (std::abs(ma - mb) > 1e-14) return ma > mb;
        return a.real() > b.real();
    });
    // The Perron eigenvalue goes first; the remainder decides both gaps.
    auto perron = std::min_element(lambda.begin(), lambda.end(),
                                   [](auto a, auto b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
    std::rotate(lambda.begin(), perron, perron + 1);
    out.eigenvalues = lambda;

    double mag = 0.0;
    double re = -1.0;
    for (std::size_t i = 1; i < lambda.size(); ++i) {
        mag = std::max(mag, std::abs(lambda[i]));
        re = std::max(re, lambda[i].real());
    }
    out.delta = 1.0 - mag;
    out.one_sided_gap = 1.0 - re;
    return out;
}

template <typename Label>
ChainAnalysis analyze(const MarkovChain<Label>& chain) {
    return analyze(chain.transitions());
}

} // namespace qwalk
