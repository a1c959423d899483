#pragma once

// Quantization of a Markov chain on the edge space C^{X x X}.
//
// Amplitude of |x>|y> lives at index x * |X| + y. The walk is
// W(P) = ref(B) ref(A) with
//   A = span{ |x>|p_x>   },  |p_x>   = sum_y sqrt(p_xy)  |y>
//   B = span{ |p*_y>|y>  },  |p*_y>  = sum_x sqrt(p*_yx) |x>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/chain_analysis.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"
#include "qwalk/markov_chain.hpp"

namespace qwalk {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Vector in the edge space over ordered state pairs.
class EdgeState {
public:
    EdgeState() = default;
    EdgeState(std::size_t states, ComplexVector amplitudes) : states_(states), amps_(std::move(amplitudes)) {
        if (static_cast<std::size_t>(amps_.size()) != states_ * states_) {
            throw InvalidArgument("edge state needs " + std::to_string(states_ * states_) + " amplitudes, got " +
                                  std::to_string(amps_.size()));
        }
    }

    static EdgeState zero(std::size_t states) {
        return EdgeState(states, ComplexVector::Zero(static_cast<Eigen::Index>(states * states)));
    }

    static EdgeState basis(std::size_t states, std::size_t x, std::size_t y) {
        EdgeState s = zero(states);
        s(x, y) = 1.0;
        return s;
    }

    std::size_t states() const noexcept { return states_; }
    std::size_t dimension() const noexcept { return states_ * states_; }

    Complex& operator()(std::size_t x, std::size_t y) { return amps_(static_cast<Eigen::Index>(x * states_ + y)); }
    Complex operator()(std::size_t x, std::size_t y) const {
        return amps_(static_cast<Eigen::Index>(x * states_ + y));
    }

    ComplexVector& amplitudes() noexcept { return amps_; }
    const ComplexVector& amplitudes() const noexcept { return amps_; }
    std::span<Complex> span() noexcept { return {amps_.data(), static_cast<std::size_t>(amps_.size())}; }

    double norm() const { return amps_.norm(); }

    /// <this|other>
    Complex inner(const EdgeState& other) const { return amps_.dot(other.amps_); }

    /// Probability mass of the first register on `x`.
    double first_register_mass(std::size_t x) const {
        return amps_.segment(static_cast<Eigen::Index>(x * states_), static_cast<Eigen::Index>(states_)).squaredNorm();
    }

private:
    std::size_t states_ = 0;
    ComplexVector amps_;
};

enum class WalkMode { MatrixFree, Dense };

/// D_xy = sqrt(p_xy p*_yx), equal to diag(pi)^{1/2} P diag(pi)^{-1/2}.
inline Matrix discriminant(const Matrix& p, const ChainAnalysis& analysis) {
    return (p.array() * analysis.p_star.transpose().array()).sqrt().matrix();
}

template <typename Label>
Matrix discriminant(const MarkovChain<Label>& chain, const ChainAnalysis& analysis) {
    return discriminant(chain.transitions(), analysis);
}

/// |pi> = sum_x sqrt(pi_x) |x>|p_x>, amplitude sqrt(pi_x p_xy) on (x,y).
inline EdgeState pi_state(const Matrix& p, const ChainAnalysis& analysis) {
    const auto n = static_cast<std::size_t>(p.rows());
    EdgeState s = EdgeState::zero(n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            s(x, y) = std::sqrt(analysis.pi(static_cast<Eigen::Index>(x)) *
                                p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
        }
    }
    return s;
}

template <typename Label>
EdgeState pi_state(const MarkovChain<Label>& chain, const ChainAnalysis& analysis) {
    return pi_state(chain.transitions(), analysis);
}

/**
 * @brief The walk operator W(P) = ref(B) ref(A).
 *
 * Matrix-free application costs O(|X|^2): each reflection acts block-wise,
 * reflecting row x about |p_x> (for A) or column y about |p*_y> (for B).
 * Dense mode precomputes the explicit real orthogonal matrix and is limited
 * to small chains. Immutable after construction.
 */
class WalkOperator {
public:
    WalkOperator(const Matrix& p, const ChainAnalysis& analysis, WalkMode mode = WalkMode::MatrixFree,
                 const Limits& limits = {})
        : n_(static_cast<std::size_t>(p.rows())), mode_(mode), p_(p), p_star_(analysis.p_star) {
        sqrt_p_ = p.cwiseSqrt();
        sqrt_pstar_t_ = analysis.p_star.transpose().cwiseSqrt();
        if (mode_ == WalkMode::Dense) dense_ = build_dense(limits);
    }

    template <typename Label>
    WalkOperator(const MarkovChain<Label>& chain, const ChainAnalysis& analysis, WalkMode mode = WalkMode::MatrixFree,
                 const Limits& limits = {})
        : WalkOperator(chain.transitions(), analysis, mode, limits) {}

    std::size_t states() const noexcept { return n_; }
    std::size_t dimension() const noexcept { return n_ * n_; }
    WalkMode mode() const noexcept { return mode_; }
    const Matrix& transitions() const noexcept { return p_; }
    const Matrix& reversed_transitions() const noexcept { return p_star_; }

    /// sqrt(p_xy) at (x, y): row x is |p_x>.
    const RowMajorMatrix& sqrt_p() const noexcept { return sqrt_p_; }
    /// sqrt(p*_yx) at (x, y): column y is |p*_y>.
    const RowMajorMatrix& sqrt_pstar_t() const noexcept { return sqrt_pstar_t_; }

    void reflect_a(std::span<Complex> v) const {
        for (std::size_t x = 0; x < n_; ++x) {
            const double* row = sqrt_p_.data() + x * n_;
            Complex* vx = v.data() + x * n_;
            Complex dot = 0.0;
            for (std::size_t y = 0; y < n_; ++y) dot += row[y] * vx[y];
            dot *= 2.0;
            for (std::size_t y = 0; y < n_; ++y) vx[y] = dot * row[y] - vx[y];
        }
    }

    /// `scratch` must hold at least states() entries.
    void reflect_b(std::span<Complex> v, std::span<Complex> scratch) const {
        std::fill_n(scratch.data(), n_, Complex{});
        for (std::size_t x = 0; x < n_; ++x) {
            const double* row = sqrt_pstar_t_.data() + x * n_;
            const Complex* vx = v.data() + x * n_;
            for (std::size_t y = 0; y < n_; ++y) scratch[y] += row[y] * vx[y];
        }
        for (std::size_t y = 0; y < n_; ++y) scratch[y] *= 2.0;
        for (std::size_t x = 0; x < n_; ++x) {
            const double* row = sqrt_pstar_t_.data() + x * n_;
            Complex* vx = v.data() + x * n_;
            for (std::size_t y = 0; y < n_; ++y) vx[y] = scratch[y] * row[y] - vx[y];
        }
    }

    /// In place W v. `scratch` must hold at least states() entries.
    void apply(std::span<Complex> v, std::span<Complex> scratch) const {
        if (mode_ == WalkMode::Dense) {
            apply_dense(dense_, v);
            return;
        }
        reflect_a(v);
        reflect_b(v, scratch);
    }

    /// In place W^{-1} v = ref(A) ref(B) v.
    void apply_inverse(std::span<Complex> v, std::span<Complex> scratch) const {
        if (mode_ == WalkMode::Dense) {
            apply_dense(dense_.transpose(), v);
            return;
        }
        reflect_b(v, scratch);
        reflect_a(v);
    }

    std::size_t scratch_size() const noexcept { return n_; }

    EdgeState apply(const EdgeState& s) const { return transformed(s, [this](auto v, auto w) { apply(v, w); }); }
    EdgeState apply_inverse(const EdgeState& s) const {
        return transformed(s, [this](auto v, auto w) { apply_inverse(v, w); });
    }
    EdgeState reflect_a(const EdgeState& s) const { return transformed(s, [this](auto v, auto) { reflect_a(v); }); }
    EdgeState reflect_b(const EdgeState& s) const {
        return transformed(s, [this](auto v, auto w) { reflect_b(v, w); });
    }

    /// |x>|p_x>
    EdgeState a_vector(std::size_t x) const {
        EdgeState s = EdgeState::zero(n_);
        for (std::size_t y = 0; y < n_; ++y) s(x, y) = sqrt_p_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        return s;
    }

    /// |p*_y>|y>
    EdgeState b_vector(std::size_t y) const {
        EdgeState s = EdgeState::zero(n_);
        for (std::size_t x = 0; x < n_; ++x) {
            s(x, y) = sqrt_pstar_t_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        }
        return s;
    }

    /// Explicit |X|^2 x |X|^2 matrix of W(P).
    Matrix dense_matrix(const Limits& limits = {}) const {
        if (mode_ == WalkMode::Dense) return dense_;
        return build_dense(limits);
    }

private:
    template <typename F>
    EdgeState transformed(const EdgeState& s, F&& op) const {
        if (s.states() != n_) throw InvalidArgument("edge state dimension does not match the walk");
        EdgeState out = s;
        std::vector<Complex> scratch(scratch_size());
        op(out.span(), std::span<Complex>(scratch));
        return out;
    }

    template <typename M>
    void apply_dense(const M& w, std::span<Complex> v) const {
        const auto d = static_cast<Eigen::Index>(n_ * n_);
        Eigen::Map<ComplexVector> in(v.data(), d);
        const Vector re = w * in.real();
        const Vector im = w * in.imag();
        in.real() = re;
        in.imag() = im;
    }

    Matrix build_dense(const Limits& limits) const {
        if (n_ > limits.max_dense_states) {
            throw CapacityExceeded("dense walk matrix states", n_, limits.max_dense_states);
        }
        const auto d = static_cast<Eigen::Index>(n_ * n_);
        Matrix a_basis = Matrix::Zero(d, static_cast<Eigen::Index>(n_));
        Matrix b_basis = Matrix::Zero(d, static_cast<Eigen::Index>(n_));
        for (std::size_t x = 0; x < n_; ++x) {
            for (std::size_t y = 0; y < n_; ++y) {
                const auto idx = static_cast<Eigen::Index>(x * n_ + y);
                a_basis(idx, static_cast<Eigen::Index>(x)) = sqrt_p_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
                b_basis(idx, static_cast<Eigen::Index>(y)) =
                    sqrt_pstar_t_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
            }
        }
        const Matrix id = Matrix::Identity(d, d);
        const Matrix ref_a = 2.0 * a_basis * a_basis.transpose() - id;
        const Matrix ref_b = 2.0 * b_basis * b_basis.transpose() - id;
        return ref_b * ref_a;
    }

    std::size_t n_;
    WalkMode mode_;
    Matrix p_;
    Matrix p_star_;
    RowMajorMatrix sqrt_p_;
    RowMajorMatrix sqrt_pstar_t_;
    Matrix dense_;
};

inline EdgeState reflect_a(const WalkOperator& w, const EdgeState& s) { return w.reflect_a(s); }
inline EdgeState reflect_b(const WalkOperator& w, const EdgeState& s) { return w.reflect_b(s); }
inline EdgeState apply_walk(const WalkOperator& w, const EdgeState& s) { return w.apply(s); }

} // namespace qwalk
