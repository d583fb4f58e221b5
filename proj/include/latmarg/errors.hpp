#pragma once

#include <stdexcept>
#include <string>

namespace latmarg {

// Requested point count exceeds the configured budget ceiling.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A least-squares or normalization step could not be completed
// (rank-deficient design, too few usable partitions, underflowed normalizer).
struct FitError : std::runtime_error {
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative procedure failed to converge (optimizer, Hessian regularization).
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latmarg
