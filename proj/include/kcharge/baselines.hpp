#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kcharge/coverage.hpp"
#include "kcharge/graphs.hpp"
#include "kcharge/solution.hpp"

namespace kcharge {

struct AcsParams {
    int agents = 20;
    int iterations = 200;
    double global_decay = 0.1;       // theta
    double local_decay = 0.1;
    double heuristic_exponent = 2.0;  // weight of inverse distance
    double exploit_prob = 0.9;       // q0
    double initial_pheromone = 0.0;  // <= 0: 1 / (requesters * mean edge length)
    std::uint64_t seed = 0;
};

// Pheromone over directed reachability edges, indexed by graph node index.
struct PheromoneMatrix {
    std::vector<std::vector<double>> tau;

    double initial = 0.0;
};

// One global-update step of an edge amount: decay plus deposit 1/L* when
// the edge lies on the iteration-best feasible tour.
inline double pheromone_update(double tau_prev, double theta, bool on_best_tour,
                               double best_length) {
    const double deposit = on_best_tour ? 1.0 / best_length : 0.0;
    return (1.0 - theta) * tau_prev + theta * deposit;
}

struct AcsTracePoint {
    int iteration = 0;
    double best_distance = 0.0;  // best-so-far, +inf until the first success
};

// Modified ant colony system: deadline-valid moves only, agents stop on a
// satisfied table, an infeasible clock, or when stuck. Deterministic under
// p.seed.
std::optional<Solution> solve_acs(const NetworkInstance& inst, const RequirementTable& table,
                                  const CoverageSignatureMap& sig, const ReachabilityGraph& rg,
                                  const AcsParams& p,
                                  std::vector<AcsTracePoint>* trace = nullptr);

// Nearest deadline-valid unvisited requester until the table is satisfied.
std::optional<Solution> solve_greedy(const NetworkInstance& inst, const RequirementTable& table,
                                     const CoverageSignatureMap& sig, const ReachabilityGraph& rg);

// Uniformly random deadline-valid walks, best over `restarts` attempts.
std::optional<Solution> solve_random(const NetworkInstance& inst, const RequirementTable& table,
                                     const CoverageSignatureMap& sig, const ReachabilityGraph& rg,
                                     std::uint64_t seed, int restarts);

}  // namespace kcharge
