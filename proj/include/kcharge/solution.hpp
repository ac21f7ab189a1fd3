#pragma once

#include <string>
#include <vector>

#include "kcharge/coverage.hpp"
#include "kcharge/instance.hpp"

namespace kcharge {

// A charging tour: sensor ids in visit order, depot start/return implicit.
struct Solution {
    std::vector<int> order;
    std::vector<double> charge_times;  // s, charging begins per visited sensor
    double travel_distance = 0.0;      // m
    double travel_energy = 0.0;        // J
    bool feasible = true;
};

// Evaluates an order into a Solution (charge times, distance, energy,
// deadline feasibility).
Solution make_solution(const std::vector<int>& order, const NetworkInstance& inst);

// Full validity: deadline-feasible and restores k-coverage when exactly the
// ordered sensors are charged.
bool validate_solution(const Solution& sol, const NetworkInstance& inst, double grid_spacing);

// JSON document {order, charge_times_s, distance_m, energy_kj, feasible}.
std::string solution_to_json(const Solution& sol);
Solution solution_from_json(const std::string& text);

void save_solution(const Solution& sol, const std::string& path);
Solution load_solution(const std::string& path);

}  // namespace kcharge
