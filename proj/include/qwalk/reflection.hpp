#pragma once

// Approximate reflection about |pi> by phase estimation on the walk, simulated
// on the full register of k ancilla banks (s qubits each) tensored with the
// edge space, plus the ideal reflection used as a cross-check oracle.
//
// Register layout: amplitude index = a * |X|^2 + e, where the ancilla index
// a packs bank b into bits [s*b, s*b + s) and e indexes the edge space.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"
#include "qwalk/quantum_walk.hpp"
#include "qwalk/walk_spectrum.hpp"

namespace qwalk {

struct ReflectionConfig {
    /// Qubits per phase-estimation bank (precision).
    int precision = 1;
    /// Number of independent banks.
    int banks = 1;

    void validate() const {
        if (precision < 1 || banks < 1) {
            throw InvalidArgument("reflection needs s >= 1 and k >= 1, got s=" + std::to_string(precision) +
                                  " k=" + std::to_string(banks));
        }
        if (precision * banks > 40) throw InvalidArgument("s*k above 40 ancilla qubits");
    }
};

/// Controlled walk calls per application: each bank runs W^{2^j} for
/// j < s forward and again inverted on uncompute.
inline std::size_t controlled_walk_calls(const ReflectionConfig& cfg) {
    return 2 * static_cast<std::size_t>(cfg.banks) * ((std::size_t{1} << cfg.precision) - 1);
}

/// s = ceil(log2(2 pi / Delta)) + 2
inline int default_precision(double phase_gap) {
    if (!(phase_gap > 0.0)) throw InvalidArgument("phase gap must be positive");
    return std::max(0, static_cast<int>(std::ceil(std::log2(2.0 * std::numbers::pi / phase_gap)))) + 2;
}

/// k = ceil(log2(1 / sqrt(eps))) + 2
inline int default_banks(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
    return std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / std::sqrt(epsilon)) - 1e-12))) + 2;
}

/// Ancilla banks tensored with the edge space.
class AncillaRegister {
public:
    AncillaRegister(const ReflectionConfig& cfg, const EdgeState& system, const Limits& limits = {})
        : cfg_(cfg), states_(system.states()), edge_dim_(system.dimension()) {
        cfg_.validate();
        const std::size_t ancillas = std::size_t{1} << (cfg_.precision * cfg_.banks);
        const std::size_t total = ancillas * edge_dim_;
        if (total / ancillas != edge_dim_ || total > limits.max_register_amplitudes) {
            throw CapacityExceeded("ancilla x edge register amplitudes", total, limits.max_register_amplitudes);
        }
        amps_ = ComplexVector::Zero(static_cast<Eigen::Index>(total));
        amps_.head(static_cast<Eigen::Index>(edge_dim_)) = system.amplitudes();
    }

    const ReflectionConfig& config() const noexcept { return cfg_; }
    std::size_t states() const noexcept { return states_; }
    std::size_t edge_dimension() const noexcept { return edge_dim_; }
    std::size_t ancilla_count() const noexcept { return static_cast<std::size_t>(amps_.size()) / edge_dim_; }
    ComplexVector& amplitudes() noexcept { return amps_; }
    const ComplexVector& amplitudes() const noexcept { return amps_; }

    Complex* slice(std::size_t ancilla) noexcept { return amps_.data() + ancilla * edge_dim_; }

    /// Edge-space component with every ancilla at zero (not renormalized).
    EdgeState zero_ancilla_component() const {
        return EdgeState(states_, amps_.head(static_cast<Eigen::Index>(edge_dim_)));
    }

    /// Norm of the part with some ancilla bank nonzero.
    double ancilla_residual() const {
        return amps_.tail(amps_.size() - static_cast<Eigen::Index>(edge_dim_)).norm();
    }

    double norm() const { return amps_.norm(); }

    /// Sum over ancillas and y of |amp(a, x, y)|^2.
    double first_register_mass(std::size_t x) const {
        double m = 0.0;
        for (std::size_t a = 0; a < ancilla_count(); ++a) {
            m += amps_.segment(static_cast<Eigen::Index>(a * edge_dim_ + x * states_), static_cast<Eigen::Index>(states_))
                     .squaredNorm();
        }
        return m;
    }

private:
    ReflectionConfig cfg_;
    std::size_t states_;
    std::size_t edge_dim_;
    ComplexVector amps_;
};

/**
 * @brief R(P): k phase-estimation banks, a phase flip whenever any bank reads
 * nonzero, then uncomputation of all banks.
 *
 * Each bank: Hadamard layer, controlled W^{2^j} for the j-th qubit realized as
 * 2^j repeated walk applications, inverse Fourier transform. The uncompute
 * pass runs the inverse circuit with W^{-1}.
 */
class PhaseEstimationReflection {
public:
    PhaseEstimationReflection(const WalkOperator& walk, ReflectionConfig cfg) : walk_(&walk), cfg_(cfg) {
        cfg_.validate();
        const std::size_t m = std::size_t{1} << cfg_.precision;
        dft_.resize(m * m);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t c = 0; c < m; ++c) {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>((a * c) % m) / static_cast<double>(m);
                dft_[a * m + c] = std::polar(1.0 / std::sqrt(static_cast<double>(m)), angle);
            }
        }
    }

    const ReflectionConfig& config() const noexcept { return cfg_; }
    std::size_t calls_per_application() const noexcept { return controlled_walk_calls(cfg_); }

    /**
     * In place R on the register. Because the flip hits every nonzero ancilla
     * reading, R = 2 U^dag P0 U - Id with P0 the all-zero projector, and P0 U
     * factors bank by bank: only the zero output of each bank's inverse
     * Fourier transform is needed, which is sum_t W^t h_t over the Hadamard
     * slices h_t and costs 2^s - 1 walk applications by Horner's rule. The
     * uncompute side starts each bank from a zero reading and needs the
     * successive powers W^{-t} only. Same operator as apply_circuit().
     */
    void apply(AncillaRegister& reg) const {
        check_layout(reg);
        const std::size_t m = std::size_t{1} << cfg_.precision;
        const std::size_t e = reg.edge_dimension();
        std::vector<Complex> group(m * e), scratch(walk_->scratch_size());

        // Contract bank 0, 1, ...: level b holds one slice per setting of banks > b.
        std::vector<Complex> level(reg.ancilla_count() / m * e);
        const Complex* src = reg.amplitudes().data();
        std::size_t groups = reg.ancilla_count() / m;
        for (int b = 0; b < cfg_.banks; ++b) {
            for (std::size_t g = 0; g < groups; ++g) contract_group(src + g * m * e, level.data() + g * e, group, scratch, e);
            src = level.data();
            groups /= m;
        }
        // level[0..e) = P0 U v; expand back from the last bank.
        std::vector<Complex> cur(level.begin(), level.begin() + static_cast<std::ptrdiff_t>(e));
        for (Complex& z : cur) z *= 2.0;
        groups = 1;
        std::vector<Complex> next;
        for (int b = cfg_.banks - 1; b > 0; --b) {
            next.assign(m * groups * e, Complex{});
            for (std::size_t g = 0; g < groups; ++g) expand_group(cur.data() + g * e, next.data() + g * m * e, scratch, e, m);
            cur.swap(next);
            groups *= m;
        }
        // Last bank straight into the register: R v = 2 U^dag P0 U v - v.
        Complex* out = reg.amplitudes().data();
        for (std::size_t g = 0; g < groups; ++g) {
            std::fill(group.begin(), group.end(), Complex{});
            expand_group(cur.data() + g * e, group.data(), scratch, e, m);
            Complex* o = out + g * m * e;
            for (std::size_t i = 0; i < m * e; ++i) o[i] = group[i] - o[i];
        }
    }

    AncillaRegister apply(const EdgeState& state, const Limits& limits = {}) const {
        AncillaRegister reg(cfg_, state, limits);
        apply(reg);
        return reg;
    }

    /// Literal gate-by-gate simulation: every bank computed, flip, every
    /// bank uncomputed with the controlled powers applied as repeated walks.
    void apply_circuit(AncillaRegister& reg) const {
        check_layout(reg);
        Workspace ws(*this, reg.edge_dimension());
        for (int b = 0; b < cfg_.banks; ++b) bank_pass(reg, b, true, ws);
        const auto e = static_cast<Eigen::Index>(reg.edge_dimension());
        reg.amplitudes().tail(reg.amplitudes().size() - e) *= -1.0;
        for (int b = cfg_.banks - 1; b >= 0; --b) bank_pass(reg, b, false, ws);
    }

private:
    struct Workspace {
        Workspace(const PhaseEstimationReflection& r, std::size_t edge_dim)
            : slices(std::size_t{1} << r.cfg_.precision), fourier((slices.size()) * edge_dim),
              scratch(r.walk_->scratch_size()) {}
        std::vector<Complex*> slices;
        std::vector<Complex> fourier;
        std::vector<Complex> scratch;
    };

    void check_layout(const AncillaRegister& reg) const {
        if (reg.config().precision != cfg_.precision || reg.config().banks != cfg_.banks) {
            throw InvalidArgument("register layout does not match the reflection configuration");
        }
        if (reg.states() != walk_->states()) throw InvalidArgument("register edge space does not match the walk");
    }

    // out = M^{-1/2} sum_t W^t h_t, h = Hadamard transform of the M input slices.
    void contract_group(const Complex* in, Complex* out, std::vector<Complex>& h, std::vector<Complex>& scratch,
                        std::size_t e) const {
        const std::size_t m = std::size_t{1} << cfg_.precision;
        if (std::all_of(in, in + m * e, [](Complex z) { return z == Complex{}; })) {
            std::fill_n(out, e, Complex{});
            return;
        }
        std::copy_n(in, m * e, h.data());
        walsh_hadamard(h.data(), m, e);
        std::span<Complex> acc(out, e);
        std::copy_n(h.data() + (m - 1) * e, e, out);
        for (std::size_t t = m - 1; t-- > 0;) {
            walk_->apply(acc, scratch);
            const Complex* ht = h.data() + t * e;
            for (std::size_t i = 0; i < e; ++i) out[i] += ht[i];
        }
        const double norm = 1.0 / static_cast<double>(m); // M^{-1/2} from H, M^{-1/2} from F
        for (std::size_t i = 0; i < e; ++i) out[i] *= norm;
    }

    // U_b^dag on a bank reading zero: slice t gets M^{-1/2} W^{-t} phi, then Hadamard.
    void expand_group(const Complex* phi, Complex* out, std::vector<Complex>& scratch, std::size_t e, std::size_t m) const {
        if (std::all_of(phi, phi + e, [](Complex z) { return z == Complex{}; })) return;
        const double norm = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < e; ++i) out[i] = norm * phi[i];
        for (std::size_t t = 1; t < m; ++t) {
            std::copy_n(out + (t - 1) * e, e, out + t * e);
            walk_->apply_inverse(std::span<Complex>(out + t * e, e), scratch);
        }
        walsh_hadamard(out, m, e);
    }

    // Unnormalized in-place transform over M contiguous slices of length e.
    static void walsh_hadamard(Complex* v, std::size_t m, std::size_t e) {
        for (std::size_t bit = 1; bit < m; bit <<= 1) {
            for (std::size_t a = 0; a < m; ++a) {
                if (a & bit) continue;
                Complex* u = v + a * e;
                Complex* w = v + (a | bit) * e;
                for (std::size_t i = 0; i < e; ++i) {
                    const Complex x = u[i], y = w[i];
                    u[i] = x + y;
                    w[i] = x - y;
                }
            }
        }
    }

    void bank_pass(AncillaRegister& reg, int bank, bool forward, Workspace& ws) const {
        const std::size_t s = static_cast<std::size_t>(cfg_.precision);
        const std::size_t m = std::size_t{1} << s;
        const std::size_t stride = std::size_t{1} << (s * static_cast<std::size_t>(bank));
        const std::size_t high_count = reg.ancilla_count() / (stride * m);
        const std::size_t e = reg.edge_dimension();

        for (std::size_t high = 0; high < high_count; ++high) {
            for (std::size_t low = 0; low < stride; ++low) {
                const std::size_t base = high * stride * m + low;
                bool nonzero = false;
                for (std::size_t a = 0; a < m; ++a) {
                    ws.slices[a] = reg.slice(base + a * stride);
                    if (!nonzero) {
                        nonzero = std::any_of(ws.slices[a], ws.slices[a] + e, [](Complex z) { return z != Complex{}; });
                    }
                }
                if (!nonzero) continue; // the pass is linear
                if (forward) {
                    hadamard_layer(ws, e);
                    controlled_powers(ws, e, false);
                    fourier(ws, e, false);
                } else {
                    fourier(ws, e, true);
                    controlled_powers(ws, e, true);
                    hadamard_layer(ws, e);
                }
            }
        }
    }

    void hadamard_layer(Workspace& ws, std::size_t e) const {
        const double h = 1.0 / std::numbers::sqrt2;
        const std::size_t m = ws.slices.size();
        for (std::size_t bit = 1; bit < m; bit <<= 1) {
            for (std::size_t a = 0; a < m; ++a) {
                if (a & bit) continue;
                Complex* u = ws.slices[a];
                Complex* v = ws.slices[a | bit];
                for (std::size_t i = 0; i < e; ++i) {
                    const Complex x = u[i], y = v[i];
                    u[i] = h * (x + y);
                    v[i] = h * (x - y);
                }
            }
        }
    }

    void controlled_powers(Workspace& ws, std::size_t e, bool inverse) const {
        const std::size_t m = ws.slices.size();
        for (std::size_t j = 0; j < static_cast<std::size_t>(cfg_.precision); ++j) {
            const std::size_t bit = std::size_t{1} << j;
            for (std::size_t a = 0; a < m; ++a) {
                if (!(a & bit)) continue;
                std::span<Complex> v(ws.slices[a], e);
                for (std::size_t rep = 0; rep < bit; ++rep) {
                    if (inverse) {
                        walk_->apply_inverse(v, ws.scratch);
                    } else {
                        walk_->apply(v, ws.scratch);
                    }
                }
            }
        }
    }

    // inverse: out_c = M^{-1/2} sum_a exp(-2 pi i a c / M) in_a, and its adjoint.
    void fourier(Workspace& ws, std::size_t e, bool adjoint_of_inverse) const {
        const std::size_t m = ws.slices.size();
        std::fill(ws.fourier.begin(), ws.fourier.end(), Complex{});
        for (std::size_t c = 0; c < m; ++c) {
            Complex* out = ws.fourier.data() + c * e;
            for (std::size_t a = 0; a < m; ++a) {
                const Complex w = adjoint_of_inverse ? dft_[a * m + c] : std::conj(dft_[a * m + c]);
                const Complex* in = ws.slices[a];
                for (std::size_t i = 0; i < e; ++i) out[i] += w * in[i];
            }
        }
        for (std::size_t c = 0; c < m; ++c) std::copy_n(ws.fourier.data() + c * e, e, ws.slices[c]);
    }

    const WalkOperator* walk_;
    ReflectionConfig cfg_;
    std::vector<Complex> dft_;
};

inline AncillaRegister approximate_reflection(const WalkOperator& walk, const ReflectionConfig& cfg,
                                              const EdgeState& state, const Limits& limits = {}) {
    return PhaseEstimationReflection(walk, cfg).apply(state, limits);
}

/// 2 <pi|state> |pi> - state
inline EdgeState exact_reflection(const EdgeState& pi, const EdgeState& state) {
    if (pi.states() != state.states()) throw InvalidArgument("reflection axis and state dimensions differ");
    const Complex overlap = pi.amplitudes().dot(state.amplitudes());
    return EdgeState(state.states(), 2.0 * overlap * pi.amplitudes() - state.amplitudes());
}

struct ReflectionReport {
    int precision = 0;
    int banks = 0;
    std::size_t controlled_walk_calls = 0;
    /// max ||(R + Id) psi|| over the tested vectors orthogonal to |pi>.
    double measured_error = 0.0;
    /// ||R |pi> - |pi>|| on the full register.
    double fixed_point_error = 0.0;
    /// Largest ancilla residual minus the reflection error it is bounded by.
    double ancilla_excess = 0.0;
    bool ancilla_restored = false;
    std::size_t vectors_tested = 0;
};

struct ReflectionSuiteOptions {
    std::size_t random_vectors = 4;
    std::uint64_t seed = 1;
    /// Test one eigenvector per distinct eigenphase; the error of an
    /// eigenvector depends only on its phase.
    bool distinct_phases_only = false;
};

/**
 * Runs R on |pi>, on eigenvectors of W in A+B orthogonal to |pi>, and on random
 * A+B vectors orthogonal to |pi>.
 *
 * Ancillas are counted as restored when the fixed point leaves them at zero
 * within 1e-9 and every other test vector leaves an ancilla residual no larger
 * than its own ||(R + Id) psi|| (+1e-9); the residual cannot be exactly zero
 * for phases that phase estimation does not resolve exactly.
 */
inline ReflectionReport reflection_error_suite(const WalkOperator& walk, const EdgeState& pi, const ReflectionConfig& cfg,
                                               const ReflectionSuiteOptions& opts = {}, const Limits& limits = {}) {
    const PhaseEstimationReflection refl(walk, cfg);
    ReflectionReport rep;
    rep.precision = cfg.precision;
    rep.banks = cfg.banks;
    rep.controlled_walk_calls = refl.calls_per_application();

    const auto e = static_cast<Eigen::Index>(pi.dimension());
    auto full_error = [&](const AncillaRegister& out, const ComplexVector& target, double sign) {
        // || out - sign * (|0> (x) target) ||
        ComplexVector diff = out.amplitudes();
        diff.head(e) -= sign * target;
        return diff.norm();
    };

    {
        const AncillaRegister out = refl.apply(pi, limits);
        rep.fixed_point_error = full_error(out, pi.amplitudes(), 1.0);
        rep.ancilla_excess = out.ancilla_residual() - 1e-9;
    }

    std::vector<ComplexVector> tests;
    const auto pairs = sum_space_eigenpairs(walk, limits);
    std::vector<double> seen;
    for (const auto& pr : pairs) {
        if (std::abs(pr.value - 1.0) < kPhaseTolerance) continue;
        if (opts.distinct_phases_only) {
            const bool dup = std::any_of(seen.begin(), seen.end(), [&](double p) { return std::abs(p - pr.phase) < 1e-7; });
            if (dup) continue;
            seen.push_back(pr.phase);
        }
        tests.push_back(pr.vector.amplitudes());
    }
    if (opts.random_vectors > 0) {
        const SumSpaceRestriction r = restrict_to_sum_space(walk, limits);
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> gauss;
        for (std::size_t i = 0; i < opts.random_vectors; ++i) {
            Eigen::VectorXcd coeff(r.basis.cols());
            for (Eigen::Index c = 0; c < coeff.size(); ++c) coeff(c) = Complex(gauss(rng), gauss(rng));
            tests.push_back(r.basis.cast<Complex>() * coeff);
        }
    }

    for (auto& v : tests) {
        v -= pi.amplitudes().dot(v) * pi.amplitudes();
        const double nv = v.norm();
        if (nv < 1e-12) continue;
        v /= nv;
        const AncillaRegister out = refl.apply(EdgeState(pi.states(), v), limits);
        const double err = full_error(out, v, -1.0);
        rep.measured_error = std::max(rep.measured_error, err);
        rep.ancilla_excess = std::max(rep.ancilla_excess, out.ancilla_residual() - err - 1e-9);
        ++rep.vectors_tested;
    }
    rep.ancilla_restored = rep.ancilla_excess <= 0.0;
    return rep;
}

} // namespace qwalk
