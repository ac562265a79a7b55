// errors.hpp — exception taxonomy shared by all modules and the CLI
#pragma once

#include <stdexcept>
#include <string>

namespace unravel {

// Bad user input: config schema violations, incompatible backend/model
// pairings, out-of-range physics parameters. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Out-of-domain argument to a library function (theta at an endpoint,
// zeta = 0 where the theory diverges, ...).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Request exceeds a hard resource cap (dense state-vector site limit).
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical invariant (trace, Hermiticity, norm, positivity) broke
// beyond tolerance mid-run. CLI exit code 3.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace unravel
