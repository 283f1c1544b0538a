#pragma once

#include <stdexcept>
#include <string>

#include "opsplit/common/types.hpp"

namespace opsplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Word-count or truncation-order limits of the symbolic engine exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain (divergent integral, negative time, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or incomplete configuration; the message names the offending key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Requested combination exists in the grammar but has no implementation path.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// No epsilon in (0, 1] satisfies the requested moment bound.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Rejection sampler hit its iteration cap.
class SamplerFailure : public Error {
public:
    using Error::Error;
};

/// Text that does not match a grammar; `position` is a 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at offset " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Non-finite intermediate state or a reference solver that failed to converge.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, State last_state)
        : Error(what), last_state_(std::move(last_state)) {}

    const State& last_state() const noexcept { return last_state_; }

private:
    State last_state_;
};

} // namespace opsplit
