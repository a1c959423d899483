#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Chain is structurally unusable: too few states, bad probabilities,
/// or builder parameters outside their range.
class DegenerateChain : public Error {
public:
    using Error::Error;
};

/// Chain is reducible or periodic.
class NotErgodic : public Error {
public:
    using Error::Error;
};

/// A state space or simulated register would exceed the configured cap.
class CapacityExceeded : public Error {
public:
    CapacityExceeded(const std::string& what, std::size_t requested, std::size_t cap)
        : Error(what + ": requested " + std::to_string(requested) + ", cap " + std::to_string(cap)),
          requested_(requested), cap_(cap) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

/// Caller passed a value outside an operation's contract.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace qwalk
