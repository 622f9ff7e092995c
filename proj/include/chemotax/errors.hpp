#pragma once

#include <stdexcept>
#include <string>

namespace chemotax {

// Base class for all simulator errors so callers can catch one type
// at the CLI boundary and map it to an exit status.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : SimError {
    explicit ConfigError(const std::string& msg) : SimError(msg) {}
};

struct ZeroMassError : SimError {
    explicit ZeroMassError(const std::string& msg) : SimError(msg) {}
};

struct NegativityError : SimError {
    explicit NegativityError(const std::string& msg) : SimError(msg) {}
};

struct DtUnderflowError : SimError {
    explicit DtUnderflowError(const std::string& msg) : SimError(msg) {}
};

struct SchemeFailureError : SimError {
    explicit SchemeFailureError(const std::string& msg) : SimError(msg) {}
};

struct NoSStarFoundError : SimError {
    explicit NoSStarFoundError(const std::string& msg) : SimError(msg) {}
};

struct QuadratureFailureError : SimError {
    explicit QuadratureFailureError(const std::string& msg) : SimError(msg) {}
};

struct NonConvergenceError : SimError {
    explicit NonConvergenceError(const std::string& msg) : SimError(msg) {}
};

struct IoError : SimError {
    explicit IoError(const std::string& msg) : SimError(msg) {}
};

} // namespace chemotax
