#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace egab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerically invalid (non-finite) intermediate or result.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that cannot be normalized, e.g. an all-zero weight vector.
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An update whose intermediate collapsed to zero everywhere.
class DegenerateUpdateError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// Violated caller precondition (bad range, empty grid, empty history).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Weiszfeld iteration ran out of iterations; keeps the best iterate found.
class NonConvergenceError : public ComputationError {
public:
    NonConvergenceError(const std::string& what, std::vector<double> best)
        : ComputationError(what), best_iterate_(std::move(best)) {}

    const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }

private:
    std::vector<double> best_iterate_;
};

/// Malformed dataset file. Carries the 1-based line number of the offending row.
// Line 0 means the error is not tied to a line (unreadable file, bad JSON).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace egab
