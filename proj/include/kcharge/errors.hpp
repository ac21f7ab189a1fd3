#pragma once

#include <stdexcept>
#include <string>

namespace kcharge {

// Search or generation exceeded a configured resource budget (label cap,
// retry bound, subset/permutation caps, wall-clock limit).
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A file could not be parsed or carries an unknown schema version.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Loaded or constructed data violates a model invariant.
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// The deployment fails the k-coverage precondition.
struct UnderCoveredError : std::runtime_error {
    explicit UnderCoveredError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kcharge
