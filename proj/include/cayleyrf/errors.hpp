#pragma once

#include <stdexcept>
#include <string>

namespace cayleyrf {

// Malformed values or structures supplied by the caller.
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Parameters outside the mathematical domain of an operation (e.g. n < 2).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Request exceeds a configured enumeration or size cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cayleyrf
