#include "kcharge/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kcharge/errors.hpp"
#include "kcharge/kinematics.hpp"

namespace kcharge {

namespace {

// Arrival (charging begin) at graph node `next` when leaving node `cur` at
// time t, or infeasible. Node indices are reachability-graph indices.
double walk_step(const NetworkInstance& inst, const ReachabilityGraph& rg, int cur, int next,
                 double t) {
    const SimParams& p = inst.params;
    const SensorNode& to = inst.sensor(rg.node_ids[next]);
    if (cur == 0) {
        const double arrival = t + distance(p.depot, to.position) / p.charger_speed;
        return arrival <= rg.deadlines[next] ? arrival : kInfeasibleTime;
    }
    return advance(t, inst.sensor(rg.node_ids[cur]), to, p);
}

Point node_position(const NetworkInstance& inst, const ReachabilityGraph& rg, int node) {
    return node == 0 ? inst.params.depot : inst.sensor(rg.node_ids[node]).position;
}

// Deadline-valid moves out of `cur`: outgoing reachability edges to
// unvisited requesters whose arrival meets the deadline.
std::vector<int> valid_moves(const NetworkInstance& inst, const ReachabilityGraph& rg,
                             const std::vector<char>& visited, int cur, double t) {
    std::vector<int> moves;
    for (int next : rg.out[cur]) {
        if (next == 0 || visited[next]) continue;
        if (!is_infeasible(walk_step(inst, rg, cur, next, t))) moves.push_back(next);
    }
    return moves;
}

Solution checked_solution(const std::vector<int>& order, const NetworkInstance& inst) {
    Solution sol = make_solution(order, inst);
    if (!sol.feasible) throw InvariantError("heuristic produced a deadline-violating tour");
    return sol;
}

}  // namespace

std::optional<Solution> solve_greedy(const NetworkInstance& inst, const RequirementTable& table,
                                     const CoverageSignatureMap& sig, const ReachabilityGraph& rg) {
    const ActiveCoverage cov = ActiveCoverage::build(sig, table, inst.requests);
    if (cov.initially_satisfied()) return make_solution({}, inst);

    ChargeState state(cov);
    std::vector<char> visited(rg.node_ids.size(), 0);
    std::vector<int> order;
    int cur = 0;
    double t = inst.params.departure_time;

    while (!state.all_satisfied()) {
        const std::vector<int> moves = valid_moves(inst, rg, visited, cur, t);
        if (moves.empty()) return std::nullopt;  // stuck
        int pick = moves.front();
        double pick_d = distance(node_position(inst, rg, cur), node_position(inst, rg, pick));
        for (std::size_t i = 1; i < moves.size(); ++i) {
            const double d =
                distance(node_position(inst, rg, cur), node_position(inst, rg, moves[i]));
            if (d < pick_d) {
                pick = moves[i];
                pick_d = d;
            }
        }
        t = walk_step(inst, rg, cur, pick, t);
        visited[pick] = 1;
        order.push_back(rg.node_ids[pick]);
        state.charge(rg.node_ids[pick]);
        cur = pick;
    }
    return checked_solution(order, inst);
}

std::optional<Solution> solve_random(const NetworkInstance& inst, const RequirementTable& table,
                                     const CoverageSignatureMap& sig, const ReachabilityGraph& rg,
                                     std::uint64_t seed, int restarts) {
    if (restarts < 1) throw InvariantError("restarts must be >= 1");
    const ActiveCoverage cov = ActiveCoverage::build(sig, table, inst.requests);
    if (cov.initially_satisfied()) return make_solution({}, inst);

    std::mt19937_64 rng(seed);
    std::optional<Solution> best;
    for (int run = 0; run < restarts; ++run) {
        ChargeState state(cov);
        std::vector<char> visited(rg.node_ids.size(), 0);
        std::vector<int> order;
        int cur = 0;
        double t = inst.params.departure_time;
        while (!state.all_satisfied()) {
            const std::vector<int> moves = valid_moves(inst, rg, visited, cur, t);
            if (moves.empty()) {
                order.clear();
                break;
            }
            std::uniform_int_distribution<std::size_t> u(0, moves.size() - 1);
            const int pick = moves[u(rng)];
            t = walk_step(inst, rg, cur, pick, t);
            visited[pick] = 1;
            order.push_back(rg.node_ids[pick]);
            state.charge(rg.node_ids[pick]);
            cur = pick;
        }
        if (order.empty() && !state.all_satisfied()) continue;
        Solution sol = checked_solution(order, inst);
        if (!best || sol.travel_distance < best->travel_distance) best = std::move(sol);
    }
    return best;
}

std::optional<Solution> solve_acs(const NetworkInstance& inst, const RequirementTable& table,
                                  const CoverageSignatureMap& sig, const ReachabilityGraph& rg,
                                  const AcsParams& p, std::vector<AcsTracePoint>* trace) {
    const ActiveCoverage cov = ActiveCoverage::build(sig, table, inst.requests);
    if (cov.initially_satisfied()) return make_solution({}, inst);

    const std::size_t n = rg.node_ids.size();
    std::mt19937_64 rng(p.seed);

    // tau0 defaults to 1 / (requesters * mean reachability edge length).
    double tau0 = p.initial_pheromone;
    if (tau0 <= 0.0) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (int j : rg.out[i]) {
                sum += distance(node_position(inst, rg, static_cast<int>(i)),
                                node_position(inst, rg, j));
                ++count;
            }
        }
        const double mean = count ? sum / static_cast<double>(count) : 1.0;
        tau0 = 1.0 / (std::max<double>(1.0, static_cast<double>(rg.requester_count())) *
                      std::max(mean, 1e-9));
    }

    PheromoneMatrix pheromone;
    pheromone.initial = tau0;
    pheromone.tau.assign(n, std::vector<double>(n, tau0));

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::optional<Solution> best;
    std::vector<double> weights;

    for (int iter = 0; iter < p.iterations; ++iter) {
        std::optional<Solution> iter_best;
        for (int agent = 0; agent < p.agents; ++agent) {
            ChargeState state(cov);
            std::vector<char> visited(n, 0);
            std::vector<int> order_nodes;
            int cur = 0;
            double t = inst.params.departure_time;
            bool success = false;
            while (true) {
                if (state.all_satisfied()) {
                    success = true;
                    break;
                }
                const std::vector<int> moves = valid_moves(inst, rg, visited, cur, t);
                if (moves.empty()) break;  // stuck at a vertex

                int pick;
                if (moves.size() == 1) {
                    pick = moves.front();
                } else {
                    weights.assign(moves.size(), 0.0);
                    for (std::size_t i = 0; i < moves.size(); ++i) {
                        const double d = std::max(
                            1e-9, distance(node_position(inst, rg, cur),
                                           node_position(inst, rg, moves[i])));
                        weights[i] = pheromone.tau[cur][moves[i]] *
                                     std::pow(1.0 / d, p.heuristic_exponent);
                    }
                    if (coin(rng) <= p.exploit_prob) {
                        pick = moves[static_cast<std::size_t>(
                            std::max_element(weights.begin(), weights.end()) - weights.begin())];
                    } else {
                        std::discrete_distribution<std::size_t> roulette(weights.begin(),
                                                                         weights.end());
                        pick = moves[roulette(rng)];
                    }
                }

                t = walk_step(inst, rg, cur, pick, t);
                // Local update on the traversed edge.
                pheromone.tau[cur][pick] =
                    (1.0 - p.local_decay) * pheromone.tau[cur][pick] + p.local_decay * tau0;
                visited[pick] = 1;
                order_nodes.push_back(pick);
                state.charge(rg.node_ids[pick]);
                cur = pick;
            }
            if (!success) continue;
            std::vector<int> order;
            order.reserve(order_nodes.size());
            for (int node : order_nodes) order.push_back(rg.node_ids[node]);
            Solution sol = checked_solution(order, inst);
            if (!iter_best || sol.travel_distance < iter_best->travel_distance)
                iter_best = std::move(sol);
        }

        // Global update: decay everywhere, deposit 1/L* on the closed edges
        // of the iteration-best feasible tour.
        std::vector<std::pair<int, int>> best_edges;
        double best_len = 0.0;
        if (iter_best) {
            best_len = iter_best->travel_distance;
            int prev = 0;
            for (int id : iter_best->order) {
                best_edges.emplace_back(prev, rg.index_of(id));
                prev = rg.index_of(id);
            }
            if (inst.params.include_return && !iter_best->order.empty())
                best_edges.emplace_back(prev, 0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const bool on_best =
                    iter_best && std::find(best_edges.begin(), best_edges.end(),
                                           std::make_pair(static_cast<int>(i),
                                                          static_cast<int>(j))) != best_edges.end();
                pheromone.tau[i][j] =
                    pheromone_update(pheromone.tau[i][j], p.global_decay, on_best, best_len);
            }
        }

        if (iter_best && (!best || iter_best->travel_distance < best->travel_distance))
            best = std::move(iter_best);
        if (trace)
            trace->push_back({iter, best ? best->travel_distance : kInfeasibleTime});
    }
    return best;
}

}  // namespace kcharge
