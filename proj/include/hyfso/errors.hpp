#pragma once

#include <stdexcept>
#include <string>

namespace hyfso {

/// Raised when an argument is outside an operation's stated domain.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Raised when an iterative evaluation fails to reach its tolerance.
/// Carries enough context to reproduce the failure: the operation name,
/// how many terms or subdivisions were spent, and the last tail estimate.
class numerical_error : public std::runtime_error {
public:
    numerical_error(std::string op, long iterations, double tail_estimate,
                    const std::string& detail)
        : std::runtime_error(op + ": " + detail + " (iterations=" +
                             std::to_string(iterations) +
                             ", tail=" + std::to_string(tail_estimate) + ")"),
          operation(std::move(op)),
          iterations(iterations),
          tail_estimate(tail_estimate) {}

    std::string operation;
    long iterations;
    double tail_estimate;
};

/// Raised when a scenario file cannot be parsed or fails validation.
class scenario_error : public std::runtime_error {
public:
    explicit scenario_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hyfso
