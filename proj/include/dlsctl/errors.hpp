#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlsctl {

// Invalid dimensions, parameters or configuration values.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The DLS normal matrix A^T W A + C^T Lambda C is singular to working precision.
class SingularNormalMatrixError : public std::runtime_error {
public:
    SingularNormalMatrixError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    [[nodiscard]] double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

// A state entry became non-finite or exceeded the divergence bound.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t step_index)
        : std::runtime_error(what), step_index_(step_index) {}

    [[nodiscard]] std::size_t step_index() const noexcept { return step_index_; }

private:
    std::size_t step_index_;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ComparisonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// q_estimate is undefined for v2 = 0 together with lambda = 0.
class UndefinedEstimateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Numerical differentiation produced non-finite entries.
class DiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace dlsctl
