#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace propcrit {

// Input lies outside the mathematical domain of an operation
// (singular matrix, non-SPD input, non-commuting family, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke a documented precondition (negative radius, model mismatch).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Unsupported : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Requested mode cannot be served by the given inputs (exact mode on a discrete spec).
class ModeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class WitnessNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Three distances that violate the triangle inequality.
class MetricDefect : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::size_t required)
        : std::runtime_error(what), required_(required) {}
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

}  // namespace propcrit
