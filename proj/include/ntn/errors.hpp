#pragma once

#include <stdexcept>
#include <string>

namespace ntn {

/// Raised when an argument lies outside the domain of a model equation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A configuration field failed validation. `field()` is the dotted key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// ESSA cannot run because 2*tau_m < t_UL; callers should fall back to TA.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The physical-time verifier found interference in a generated schedule.
class VerificationError : public std::runtime_error {
public:
    VerificationError(const std::string& message, std::string trace)
        : std::runtime_error(message), trace_(std::move(trace)) {}

    const std::string& trace() const noexcept { return trace_; }

private:
    std::string trace_;
};

} // namespace ntn
