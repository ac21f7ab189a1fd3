#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "kcharge/instance.hpp"

namespace kcharge {

// Infeasibility is a domain value, not an exception: a charging time of
// +inf dominates every deadline test.
inline constexpr double kInfeasibleTime = std::numeric_limits<double>::infinity();

inline bool is_infeasible(double t) { return t == kInfeasibleTime; }

// Linear decay, floored at zero: B_i(t) = max(0, B_i(t0) - beta_i * (t - t0)).
double residual_energy(const SensorNode& node, double t, double t0 = 0.0);

// One recurrence step: finish charging `from` (starting at t_i), travel to
// `to`, and return the charging time at `to`, or kInfeasibleTime when it
// would pass the deadline D_to = residual/beta of `to`.
double advance(double t_i, const SensorNode& from, const SensorNode& to, const SimParams& params);

struct PathEvaluation {
    bool feasible = true;
    std::vector<double> charge_times;  // charging begins, per visited sensor
    double travel_distance = 0.0;      // m, includes the return leg iff include_return
    double travel_energy = 0.0;        // J, distance * move_cost
    std::optional<int> violated_at;    // first sensor whose deadline is missed
};

// Walks the order from the depot: the first hop has travel time only, each
// later hop follows the charging-time recurrence. The order holds sensor
// ids only; the depot start (and optional return) is implicit.
PathEvaluation evaluate_path(std::span<const int> order, const NetworkInstance& inst);

struct Insertion {
    std::size_t position = 0;  // insert before order[position]; == size() appends
    double delta_distance = 0.0;
};

// Cheapest feasible insertion slot for `candidate`, including the closing
// slot before the depot return. Every candidate slot is re-evaluated as a
// whole order so all charging times stay valid. Ties pick the earliest
// slot; returns nullopt when no slot validates.
std::optional<Insertion> best_insertion(const std::vector<int>& order, int candidate,
                                        const NetworkInstance& inst);

}  // namespace kcharge
