#pragma once

// Spectral structure of W(P): the singular value decomposition of the
// discriminant predicts the eigenphases on A+B, and a direct diagonalization
// of W restricted to A+B checks the prediction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/chain_analysis.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"
#include "qwalk/quantum_walk.hpp"

namespace qwalk {

/// Singular values within this distance of 1 (of 0) are treated as exactly 1 (0).
inline constexpr double kSingularThreshold = 1e-9;
inline constexpr double kPhaseTolerance = 1e-8;

struct DiscriminantSpectrum {
    /// cos(theta_i), descending.
    Vector singular_values;
    /// theta_i in [0, pi/2], ascending.
    Vector thetas;
    Matrix left;
    Matrix right;
    /// Delta = 2 arccos(largest singular value below the 1-threshold), pi if none lies in (0,1).
    double phase_gap = std::numbers::pi;
    std::size_t unit_multiplicity = 0;
    std::size_t zero_multiplicity = 0;
};

inline DiscriminantSpectrum discriminant_spectrum(const Matrix& d) {
    Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeFullU | Eigen::ComputeFullV);
    DiscriminantSpectrum out;
    out.singular_values = svd.singularValues();
    out.left = svd.matrixU();
    out.right = svd.matrixV();
    out.thetas.resize(out.singular_values.size());

    double second = -1.0;
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
        const double s = std::clamp(out.singular_values(i), 0.0, 1.0);
        out.thetas(i) = std::acos(s);
        if (s >= 1.0 - kSingularThreshold) {
            ++out.unit_multiplicity;
        } else {
            if (s <= kSingularThreshold) ++out.zero_multiplicity;
            second = std::max(second, s);
        }
    }
    if (second > kSingularThreshold) {
        out.phase_gap = 2.0 * std::acos(second);
    } else {
        out.phase_gap = std::numbers::pi;
    }
    return out;
}

/// Maps an angle to (-pi, pi], folding angles within 1e-9 of -pi onto +pi.
inline double canonical_phase(double a) {
    constexpr double pi = std::numbers::pi;
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi + 1e-9) a += 2.0 * pi;
    if (a > pi) a = pi;
    return a;
}

/// Eigenphases of W on A+B implied by the singular values: 0 for each unit
/// singular value, +-2 theta for each one in (0,1), and pi twice for each zero.
inline std::vector<double> predicted_eigenphases(const DiscriminantSpectrum& dspec) {
    std::vector<double> phases;
    for (Eigen::Index i = 0; i < dspec.singular_values.size(); ++i) {
        const double s = dspec.singular_values(i);
        if (s >= 1.0 - kSingularThreshold) {
            phases.push_back(0.0);
        } else if (s <= kSingularThreshold) {
            phases.push_back(std::numbers::pi);
            phases.push_back(std::numbers::pi);
        } else {
            phases.push_back(canonical_phase(2.0 * dspec.thetas(i)));
            phases.push_back(canonical_phase(-2.0 * dspec.thetas(i)));
        }
    }
    std::sort(phases.begin(), phases.end());
    return phases;
}

/// Orthonormal real basis of A+B and the matrix of W in that basis.
struct SumSpaceRestriction {
    Matrix basis;      // |X|^2 x dim(A+B)
    Matrix restricted; // dim(A+B) x dim(A+B)
};

/**
 * Builds A+B from the explicit vectors |x>|p_x> and |p*_y>|y>, orthonormalizes
 * through their Gram matrix, and applies the walk column by column. Nothing
 * here consults the discriminant.
 */
inline SumSpaceRestriction restrict_to_sum_space(const WalkOperator& walk, const Limits& limits = {}) {
    const std::size_t n = walk.states();
    if (n > limits.max_spectrum_states) {
        throw CapacityExceeded("direct eigenphase check states", n, limits.max_spectrum_states);
    }
    const auto dim = static_cast<Eigen::Index>(n * n);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix span_vectors = Matrix::Zero(dim, 2 * nn);
    for (std::size_t x = 0; x < n; ++x) {
        span_vectors.col(static_cast<Eigen::Index>(x)) = walk.a_vector(x).amplitudes().real();
        span_vectors.col(nn + static_cast<Eigen::Index>(x)) = walk.b_vector(x).amplitudes().real();
    }
    const Matrix gram = span_vectors.transpose() * span_vectors;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        if (eig.eigenvalues()(i) > kSingularThreshold) keep.push_back(i);
    }
    SumSpaceRestriction out;
    out.basis.resize(dim, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const Eigen::Index i = keep[c];
        out.basis.col(static_cast<Eigen::Index>(c)) =
            span_vectors * eig.eigenvectors().col(i) / std::sqrt(eig.eigenvalues()(i));
    }

    Matrix image(dim, out.basis.cols());
    ComplexVector work(dim);
    std::vector<Complex> scratch(walk.scratch_size());
    for (Eigen::Index c = 0; c < out.basis.cols(); ++c) {
        work = out.basis.col(c).cast<Complex>();
        walk.apply(std::span<Complex>(work.data(), static_cast<std::size_t>(dim)), scratch);
        image.col(c) = work.real();
    }
    out.restricted = out.basis.transpose() * image;
    return out;
}

struct WalkEigenpair {
    Complex value;
    double phase = 0.0;
    EdgeState vector;
};

/// Eigenpairs of W on A+B, normalized edge-space vectors, sorted by phase.
inline std::vector<WalkEigenpair> sum_space_eigenpairs(const WalkOperator& walk, const Limits& limits = {}) {
    const SumSpaceRestriction r = restrict_to_sum_space(walk, limits);
    Eigen::EigenSolver<Matrix> es(r.restricted);
    std::vector<WalkEigenpair> out;
    out.reserve(static_cast<std::size_t>(r.restricted.rows()));
    const Eigen::MatrixXcd lifted = r.basis.cast<Complex>() * es.eigenvectors();
    for (Eigen::Index i = 0; i < r.restricted.rows(); ++i) {
        WalkEigenpair e;
        e.value = es.eigenvalues()(i);
        e.phase = canonical_phase(std::arg(e.value));
        ComplexVector v = lifted.col(i);
        v.normalize();
        e.vector = EdgeState(walk.states(), std::move(v));
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.phase < b.phase; });
    return out;
}

struct SpectrumReport {
    DiscriminantSpectrum spectrum;
    std::vector<double> predicted_phases;
    /// Directly computed phases on A+B; empty when the chain is above the cap.
    std::optional<std::vector<double>> measured_phases;
    double max_phase_error = std::numeric_limits<double>::infinity();
    std::size_t unit_eigenspace_dimension = 0;
    /// Norm of the projection of |pi> onto the measured 1-eigenspace.
    double pi_fidelity = 0.0;
    double delta = 0.0;
    double one_sided_gap = 0.0;
    double phase_gap = 0.0;
    /// Delta - 2 sqrt(delta)
    double gap_margin = 0.0;
    bool reversible = false;

    bool direct_check_passed() const {
        return measured_phases.has_value() && max_phase_error <= kPhaseTolerance;
    }
};

/// Compares sorted phase multisets entry by entry.
inline double max_phase_difference(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline SpectrumReport walk_spectrum(const Matrix& p, const ChainAnalysis& analysis, const Limits& limits = {}) {
    SpectrumReport rep;
    rep.spectrum = discriminant_spectrum(discriminant(p, analysis));
    rep.predicted_phases = predicted_eigenphases(rep.spectrum);
    rep.delta = analysis.delta;
    rep.one_sided_gap = analysis.one_sided_gap;
    rep.phase_gap = rep.spectrum.phase_gap;
    rep.gap_margin = rep.phase_gap - 2.0 * std::sqrt(analysis.delta);
    rep.reversible = analysis.reversible;

    if (static_cast<std::size_t>(p.rows()) > limits.max_spectrum_states) return rep;

    const WalkOperator walk(p, analysis);
    const auto pairs = sum_space_eigenpairs(walk, limits);
    std::vector<double> measured;
    measured.reserve(pairs.size());
    for (const auto& e : pairs) measured.push_back(e.phase);
    std::sort(measured.begin(), measured.end());
    rep.max_phase_error = max_phase_difference(rep.predicted_phases, measured);
    rep.measured_phases = std::move(measured);

    const EdgeState pi = pi_state(p, analysis);
    std::vector<ComplexVector> unit;
    for (const auto& e : pairs) {
        if (std::abs(e.value - 1.0) < kPhaseTolerance) unit.push_back(e.vector.amplitudes());
    }
    rep.unit_eigenspace_dimension = unit.size();
    if (!unit.empty()) {
        Eigen::MatrixXcd m(pi.amplitudes().size(), static_cast<Eigen::Index>(unit.size()));
        for (std::size_t i = 0; i < unit.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = unit[i];
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        const Eigen::MatrixXcd q =
            qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), static_cast<Eigen::Index>(unit.size()));
        rep.pi_fidelity = (q.adjoint() * pi.amplitudes()).norm();
    }
    return rep;
}

template <typename Label>
SpectrumReport walk_spectrum(const MarkovChain<Label>& chain, const ChainAnalysis& analysis, const Limits& limits = {}) {
    return walk_spectrum(chain.transitions(), analysis, limits);
}

/// Like walk_spectrum, but a chain above the direct-check cap is an error.
template <typename Label>
SpectrumReport walk_spectrum_checked(const MarkovChain<Label>& chain, const ChainAnalysis& analysis,
                                     const Limits& limits = {}) {
    if (chain.size() > limits.max_spectrum_states) {
        throw CapacityExceeded("direct eigenphase check states", chain.size(), limits.max_spectrum_states);
    }
    return walk_spectrum(chain, analysis, limits);
}

} // namespace qwalk
