#pragma once

#include <stdexcept>
#include <string>

namespace bates {

// Bad or inconsistent configuration (parameters, grid spec, JSON input).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Query outside the computational (or trimmed) domain.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown: singular pivot, NaN in the time loop, ...
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bates
