// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace coopdyn {

// A requested Hilbert space (or density matrix) exceeds the configured budget.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A SystemSpec or run configuration is inconsistent or incomplete.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative method failed to reach its tolerance within its budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_residual(achieved) {}
    double achieved_residual;
};

// A measurement's validity precondition failed (fit window too wide,
// dynamics left the assumed subspace, truncation level populated, ...).
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coopdyn
