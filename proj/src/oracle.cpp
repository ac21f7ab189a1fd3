#include "kcharge/oracle.hpp"

#include <algorithm>

#include "kcharge/errors.hpp"
#include "kcharge/graphs.hpp"
#include "kcharge/kinematics.hpp"

namespace kcharge {

std::vector<std::vector<int>> enumerate_charge_sets(const RequirementTable& table,
                                                    const std::vector<ChargingRequest>& requests,
                                                    const CoverageSignatureMap& sig,
                                                    const OracleBudget& budget) {
    const ActiveCoverage cov = ActiveCoverage::build(sig, table, requests);
    const int r = static_cast<int>(cov.requesters.size());
    if (cov.initially_satisfied()) return {{}};
    if (r > 63 || (std::size_t{1} << r) > budget.max_subsets)
        throw BudgetError("subset enumeration over " + std::to_string(r) +
                          " requesters exceeds the budget");

    auto zeroes_mask = [&](std::uint64_t mask) {
        ChargeState state(cov);
        for (int s = 0; s < r; ++s)
            if ((mask >> s) & 1) state.charge(cov.requesters[s]);
        return state.all_satisfied();
    };

    std::vector<std::vector<int>> minimal;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
        if (!zeroes_mask(mask)) continue;
        bool is_minimal = true;
        for (int s = 0; s < r && is_minimal; ++s) {
            if ((mask >> s) & 1) is_minimal = !zeroes_mask(mask & ~(std::uint64_t{1} << s));
        }
        if (!is_minimal) continue;
        std::vector<int> ids;
        for (int s = 0; s < r; ++s)
            if ((mask >> s) & 1) ids.push_back(cov.requesters[s]);
        minimal.push_back(std::move(ids));
    }
    return minimal;
}

std::optional<Solution> solve_exact(const NetworkInstance& inst, const RequirementTable& table,
                                    const CoverageSignatureMap& sig, const OracleBudget& budget,
                                    TimeModel model) {
    const SimParams& p = inst.params;
    const ActiveCoverage cov = ActiveCoverage::build(sig, table, inst.requests);
    if (cov.initially_satisfied()) return make_solution({}, inst);
    if (static_cast<int>(cov.requesters.size()) > budget.max_requesters)
        throw BudgetError("oracle limited to " + std::to_string(budget.max_requesters) +
                          " requesters, instance has " + std::to_string(cov.requesters.size()));

    const std::vector<std::vector<int>> sets =
        enumerate_charge_sets(table, inst.requests, sig, budget);
    if (sets.empty()) return std::nullopt;

    // Bucket arrays per requester for the grid model, identical to the
    // time-expanded construction.
    std::vector<std::vector<double>> buckets(inst.sensors.size() + 1);
    if (model == TimeModel::grid) {
        for (const ChargingRequest& r : inst.requests)
            if (r.deadline > p.departure_time)
                buckets[r.sensor_id] = bucket_times(r.deadline, p.departure_time, p.time_step);
    }

    // Arrival at `next` when charging there begins, or infeasible; grid mode
    // snaps the arrival up to the containing bucket boundary.
    auto step_time = [&](double t, int cur_id, int next_id) -> double {
        const SensorNode& next = inst.sensor(next_id);
        double arrival;
        if (cur_id == kDepotId) {
            arrival = t + distance(p.depot, next.position) / p.charger_speed;
            const double deadline = next.residual / next.consumption_rate;
            if (arrival > deadline) return kInfeasibleTime;
        } else {
            arrival = advance(t, inst.sensor(cur_id), next, p);
            if (is_infeasible(arrival)) return kInfeasibleTime;
        }
        if (model == TimeModel::grid) {
            const std::vector<double>& times = buckets[next_id];
            auto it = std::lower_bound(times.begin(), times.end(), arrival);
            if (it == times.end()) return kInfeasibleTime;
            return *it;
        }
        return arrival;
    };

    std::size_t expansions = 0;
    bool found = false;
    double best_total = 0.0;
    std::vector<int> best_order;

    std::vector<int> order;
    for (const std::vector<int>& ids : sets) {
        order.clear();
        const std::size_t n = ids.size();
        std::vector<char> used(n, 0);

        auto dfs = [&](auto&& self, double t, double dist, int cur_id) -> void {
            if (++expansions > budget.max_expansions)
                throw BudgetError("oracle expansion cap exceeded");
            if (order.size() == n) {
                const double total =
                    dist + (p.include_return ? distance(inst.sensor(cur_id).position, p.depot)
                                             : 0.0);
                if (!found || total < best_total) {
                    found = true;
                    best_total = total;
                    best_order = order;
                }
                return;
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                const int next_id = ids[i];
                const double arrival = step_time(t, cur_id, next_id);
                if (is_infeasible(arrival)) continue;
                const double leg = dist + distance(cur_id == kDepotId
                                                       ? p.depot
                                                       : inst.sensor(cur_id).position,
                                                   inst.sensor(next_id).position);
                // Admissible bound: the tour still has to come home. The
                // slack keeps equal-length orderings alive so the reported
                // minimum is the true minimum over rounded leg sums.
                const double bound =
                    leg + (p.include_return ? distance(inst.sensor(next_id).position, p.depot)
                                            : 0.0);
                if (found && bound > best_total + 1e-9) continue;
                used[i] = 1;
                order.push_back(next_id);
                self(self, arrival, leg, next_id);
                order.pop_back();
                used[i] = 0;
            }
        };
        dfs(dfs, p.departure_time, 0.0, kDepotId);
    }

    if (!found) return std::nullopt;
    return make_solution(best_order, inst);
}

}  // namespace kcharge
