#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tdag {

// Argument and precondition violations throw std::invalid_argument. The
// types below are the recoverable failure signals callers dispatch on.

/// An enumeration would exceed its EnumerationBudget. Never a truncated answer.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(std::size_t cap)
        : std::runtime_error("enumeration budget of " + std::to_string(cap) + " exceeded"), cap_(cap) {}
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

/// Some t-edge is forced in both directions. Carries the offending (unordered) type pair.
class TypeInconsistency : public std::runtime_error {
public:
    TypeInconsistency(int type_a, int type_b)
        : std::runtime_error("t-edge between types " + std::to_string(type_a) + " and " +
                             std::to_string(type_b) + " is oriented both ways"),
          types_(type_a, type_b) {}
    std::pair<int, int> types() const noexcept { return types_; }

private:
    std::pair<int, int> types_;
};

/// Covariance submatrix is singular, or data otherwise unusable for a test.
class DegenerateData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (BIF, CSV, JSON). Line and column are 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? what + " at " + std::to_string(line) + ":" + std::to_string(column)
                                      : what),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Well-formed input that violates a semantic constraint (CPT rows not summing to 1, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tdag
