#pragma once

#include <optional>
#include <vector>

#include "kcharge/coverage.hpp"
#include "kcharge/solution.hpp"

namespace kcharge {

struct OracleBudget {
    int max_requesters = 10;
    std::size_t max_subsets = 1u << 20;
    std::size_t max_expansions = 50'000'000;  // branch-and-bound node cap
};

// Deadline arithmetic used by the exhaustive search: the continuous model
// or the bucketed model of the time-expanded graph (arrival snapped up to
// the containing bucket boundary), for apples-to-apples DP comparison.
enum class TimeModel { continuous, grid };

// All minimal-by-inclusion requester subsets whose charges zero the table.
// Complete: a superset of a zeroing set also zeroes, so minimality is
// checked against immediate subsets only.
std::vector<std::vector<int>> enumerate_charge_sets(const RequirementTable& table,
                                                    const std::vector<ChargingRequest>& requests,
                                                    const CoverageSignatureMap& sig,
                                                    const OracleBudget& budget = {});

// Global optimum by exhaustive search: every minimal zeroing set, every
// feasible visit order, branch-and-bound on partial distance plus the
// straight-line return. Throws BudgetError past the configured caps.
std::optional<Solution> solve_exact(const NetworkInstance& inst, const RequirementTable& table,
                                    const CoverageSignatureMap& sig,
                                    const OracleBudget& budget = {},
                                    TimeModel model = TimeModel::continuous);

}  // namespace kcharge
