#include "kcharge/kinematics.hpp"

#include <algorithm>

#include "kcharge/errors.hpp"

namespace kcharge {

double residual_energy(const SensorNode& node, double t, double t0) {
    return std::max(0.0, node.residual - node.consumption_rate * (t - t0));
}

double advance(double t_i, const SensorNode& from, const SensorNode& to, const SimParams& params) {
    if (is_infeasible(t_i)) return kInfeasibleTime;
    const double charge = (params.battery_capacity -
                           residual_energy(from, t_i, params.departure_time)) /
                          params.transfer_rate;
    const double travel = distance(from.position, to.position) / params.charger_speed;
    const double arrival = t_i + charge + travel;
    const double deadline = to.residual / to.consumption_rate;
    return arrival <= deadline ? arrival : kInfeasibleTime;
}

PathEvaluation evaluate_path(std::span<const int> order, const NetworkInstance& inst) {
    const SimParams& p = inst.params;
    PathEvaluation eval;
    eval.charge_times.reserve(order.size());

    std::vector<char> seen(inst.sensors.size() + 1, 0);
    double t = p.departure_time;
    Point at = p.depot;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const SensorNode& node = inst.sensor(order[i]);
        if (seen[node.id]) throw InvariantError("sensor " + std::to_string(node.id) + " repeated in order");
        seen[node.id] = 1;

        if (i == 0) {
            // First hop from the depot: travel only, nothing to top up.
            const double arrival = t + distance(at, node.position) / p.charger_speed;
            const double deadline = node.residual / node.consumption_rate;
            t = arrival <= deadline ? arrival : kInfeasibleTime;
        } else {
            t = advance(t, inst.sensor(order[i - 1]), node, p);
        }
        eval.charge_times.push_back(t);
        if (is_infeasible(t) && eval.feasible) {
            eval.feasible = false;
            eval.violated_at = node.id;
        }
        eval.travel_distance += distance(at, node.position);
        at = node.position;
    }
    if (p.include_return && !order.empty()) eval.travel_distance += distance(at, p.depot);
    eval.travel_energy = eval.travel_distance * p.move_cost;
    return eval;
}

std::optional<Insertion> best_insertion(const std::vector<int>& order, int candidate,
                                        const NetworkInstance& inst) {
    if (std::find(order.begin(), order.end(), candidate) != order.end())
        throw InvariantError("candidate " + std::to_string(candidate) + " already in order");

    const double base = evaluate_path(order, inst).travel_distance;
    std::optional<Insertion> best;
    std::vector<int> trial;
    trial.reserve(order.size() + 1);
    for (std::size_t pos = 0; pos <= order.size(); ++pos) {
        trial.assign(order.begin(), order.end());
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(pos), candidate);
        const PathEvaluation eval = evaluate_path(trial, inst);
        if (!eval.feasible) continue;
        const double delta = eval.travel_distance - base;
        if (!best || delta < best->delta_distance) best = Insertion{pos, delta};
    }
    return best;
}

}  // namespace kcharge
