#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracol {

/// Argument outside the mathematical domain of an operation (poles, negative
/// times, orders out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed right-hand-side expression. `offset` is the byte position in the
/// source text where parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Fault while evaluating an expression (log of a nonpositive number,
/// division by zero, non-finite result).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem statement violates a structural invariant (order chain, arity,
/// boundary coefficients).
class InvalidProblem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iteration failed to converge or was aborted by a strict contraction check.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& message, std::size_t node, double residual)
        : std::runtime_error(message), node_(node), residual_(residual) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    std::size_t node_;
    double residual_;
};

/// Invalid configuration file. `line` is 1-based, 0 when the problem is not
/// tied to a single line (a missing field).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Filesystem fault while reading a config or writing run outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracol
