#pragma once

#include <cstddef>

namespace qwalk {

/// Size caps shared by every module that materializes a state space.
struct Limits {
    /// Largest Markov chain a builder will produce.
    std::size_t max_states = 4096;
    /// Largest chain for which the explicit |X|^2 x |X|^2 walk matrix is built.
    std::size_t max_dense_states = 64;
    /// Largest chain for which the walk is diagonalized on A+B.
    std::size_t max_spectrum_states = 128;
    /// Largest ancilla (x) edge-space register, in complex amplitudes (512 MiB).
    std::size_t max_register_amplitudes = std::size_t{1} << 25;
    /// Largest instance for the exhaustive ground-truth oracles (work units).
    std::size_t max_enumeration = std::size_t{1} << 30;
};

} // namespace qwalk
