#include "kcharge/solution.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kcharge/errors.hpp"
#include "kcharge/kinematics.hpp"

namespace kcharge {

Solution make_solution(const std::vector<int>& order, const NetworkInstance& inst) {
    const PathEvaluation eval = evaluate_path(order, inst);
    Solution sol;
    sol.order = order;
    sol.charge_times = eval.charge_times;
    sol.travel_distance = eval.travel_distance;
    sol.travel_energy = eval.travel_energy;
    sol.feasible = eval.feasible;
    return sol;
}

bool validate_solution(const Solution& sol, const NetworkInstance& inst, double grid_spacing) {
    const PathEvaluation eval = evaluate_path(sol.order, inst);
    if (!eval.feasible) return false;
    const std::set<int> charged(sol.order.begin(), sol.order.end());
    return verify_k_coverage(inst, charged, grid_spacing);
}

std::string solution_to_json(const Solution& sol) {
    nlohmann::json doc{{"order", sol.order},
                       {"charge_times_s", sol.charge_times},
                       {"distance_m", sol.travel_distance},
                       {"energy_kj", sol.travel_energy / 1000.0},
                       {"feasible", sol.feasible}};
    return doc.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        Solution sol;
        sol.order = doc.at("order").get<std::vector<int>>();
        sol.charge_times = doc.at("charge_times_s").get<std::vector<double>>();
        sol.travel_distance = doc.at("distance_m").get<double>();
        sol.travel_energy = doc.at("energy_kj").get<double>() * 1000.0;
        sol.feasible = doc.at("feasible").get<bool>();
        return sol;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed solution file: ") + e.what());
    }
}

void save_solution(const Solution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << solution_to_json(sol);
    if (!out) throw IoError("write failed: " + path);
}

Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return solution_from_json(buf.str());
}

}  // namespace kcharge
