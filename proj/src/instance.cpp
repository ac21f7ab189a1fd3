#include "kcharge/instance.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "kcharge/coverage.hpp"
#include "kcharge/errors.hpp"

namespace kcharge {

namespace {

constexpr int kSchemaVersion = 1;

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw InvariantError(std::string(name) + " must be strictly positive");
}

}  // namespace

const SensorNode& NetworkInstance::sensor(int id) const {
    if (id < 1 || id > static_cast<int>(sensors.size()))
        throw InvariantError("unknown sensor id " + std::to_string(id));
    return sensors[id - 1];
}

bool NetworkInstance::has_request(int sensor_id) const {
    return request_for(sensor_id) != nullptr;
}

const ChargingRequest* NetworkInstance::request_for(int sensor_id) const {
    auto it = std::lower_bound(requests.begin(), requests.end(), sensor_id,
                               [](const ChargingRequest& r, int id) { return r.sensor_id < id; });
    return it != requests.end() && it->sensor_id == sensor_id ? &*it : nullptr;
}

std::vector<ChargingRequest> derive_requests(const std::vector<SensorNode>& sensors,
                                             const SimParams& params) {
    std::vector<ChargingRequest> requests;
    for (const SensorNode& s : sensors) {
        if (s.residual / params.battery_capacity <= params.alpha)
            requests.push_back({s.id, s.residual / s.consumption_rate});
    }
    return requests;
}

NetworkInstance generate_instance(const GenerationParams& gen, std::uint64_t seed) {
    if (gen.n < 1) throw InvariantError("n must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, gen.params.area_width);
    std::uniform_real_distribution<double> uy(0.0, gen.params.area_height);

    std::vector<Point> positions(gen.n);
    bool covered = false;
    for (int attempt = 0; attempt < gen.max_retries && !covered; ++attempt) {
        for (Point& p : positions) {
            p.x = ux(rng);
            p.y = uy(rng);
        }
        covered = grid_is_k_covered(positions, gen.params.sensing_range, gen.params.area_width,
                                    gen.params.area_height, gen.coverage_grid_spacing,
                                    gen.params.coverage_k);
    }
    if (!covered)
        throw BudgetError("coverage unachievable: no " + std::to_string(gen.params.coverage_k) +
                          "-covered deployment of n=" + std::to_string(gen.n) + " sensors within " +
                          std::to_string(gen.max_retries) + " attempts");

    const double cap = gen.params.battery_capacity;
    std::uniform_real_distribution<double> udrain(0.0, (1.0 - gen.residual_floor_frac) * cap);
    std::uniform_real_distribution<double> ubeta(gen.beta_min, gen.beta_max);

    NetworkInstance inst;
    inst.params = gen.params;
    inst.seed = seed;
    inst.sensors.reserve(gen.n);
    for (int i = 0; i < gen.n; ++i) {
        SensorNode s;
        s.id = i + 1;
        s.position = positions[i];
        // residual uniform in (floor*B, B]
        s.residual = cap - udrain(rng);
        s.consumption_rate = ubeta(rng);
        inst.sensors.push_back(s);
    }
    inst.requests = derive_requests(inst.sensors, inst.params);
    validate_instance(inst);
    return inst;
}

void validate_instance(const NetworkInstance& inst) {
    const SimParams& p = inst.params;
    require_positive(p.area_width, "area_width");
    require_positive(p.area_height, "area_height");
    require_positive(p.sensing_range, "sensing_range");
    require_positive(p.charger_speed, "charger_speed");
    require_positive(p.move_cost, "move_cost");
    require_positive(p.battery_capacity, "battery_capacity");
    require_positive(p.transfer_rate, "transfer_rate");
    require_positive(p.time_step, "time_step");
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw InvariantError("alpha must be in (0, 1]");
    if (p.coverage_k < 1) throw InvariantError("coverage_k must be >= 1");
    if (p.depot.x < 0.0 || p.depot.x > p.area_width || p.depot.y < 0.0 || p.depot.y > p.area_height)
        throw InvariantError("depot outside the area");

    for (std::size_t i = 0; i < inst.sensors.size(); ++i) {
        const SensorNode& s = inst.sensors[i];
        if (s.id != static_cast<int>(i) + 1)
            throw InvariantError("sensor ids must be 1..n in order");
        if (s.position.x < 0.0 || s.position.x > p.area_width || s.position.y < 0.0 ||
            s.position.y > p.area_height)
            throw InvariantError("sensor " + std::to_string(s.id) + " outside the area");
        if (s.residual < 0.0 || s.residual > p.battery_capacity)
            throw InvariantError("sensor " + std::to_string(s.id) + " residual out of [0, B]");
        if (!(s.consumption_rate > 0.0))
            throw InvariantError("sensor " + std::to_string(s.id) + " consumption rate must be > 0");
    }

    // Request set must be exactly { i : B_i(t0)/B <= alpha } with exact deadlines.
    const std::vector<ChargingRequest> expected = derive_requests(inst.sensors, inst.params);
    if (inst.requests.size() != expected.size())
        throw InvariantError("request set does not match the residual-energy threshold");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (inst.requests[i].sensor_id != expected[i].sensor_id)
            throw InvariantError("request set does not match the residual-energy threshold");
        if (inst.requests[i].deadline != expected[i].deadline)
            throw InvariantError("request deadline for sensor " +
                                 std::to_string(expected[i].sensor_id) +
                                 " does not equal residual/consumption_rate");
    }
}

namespace {

using nlohmann::json;

json params_to_json(const SimParams& p) {
    return json{{"area_width_m", p.area_width},
                {"area_height_m", p.area_height},
                {"sensing_range_m", p.sensing_range},
                {"charger_speed_mps", p.charger_speed},
                {"move_cost_j_per_m", p.move_cost},
                {"battery_capacity_j", p.battery_capacity},
                {"transfer_rate_w", p.transfer_rate},
                {"alpha", p.alpha},
                {"coverage_k", p.coverage_k},
                {"depot_x_m", p.depot.x},
                {"depot_y_m", p.depot.y},
                {"departure_time_s", p.departure_time},
                {"time_step_s", p.time_step},
                {"include_return", p.include_return}};
}

SimParams params_from_json(const json& j) {
    SimParams p;
    p.area_width = j.at("area_width_m").get<double>();
    p.area_height = j.at("area_height_m").get<double>();
    p.sensing_range = j.at("sensing_range_m").get<double>();
    p.charger_speed = j.at("charger_speed_mps").get<double>();
    p.move_cost = j.at("move_cost_j_per_m").get<double>();
    p.battery_capacity = j.at("battery_capacity_j").get<double>();
    p.transfer_rate = j.at("transfer_rate_w").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.coverage_k = j.at("coverage_k").get<int>();
    p.depot.x = j.at("depot_x_m").get<double>();
    p.depot.y = j.at("depot_y_m").get<double>();
    p.departure_time = j.at("departure_time_s").get<double>();
    p.time_step = j.at("time_step_s").get<double>();
    p.include_return = j.at("include_return").get<bool>();
    return p;
}

}  // namespace

std::string instance_to_json(const NetworkInstance& inst) {
    json sensors = json::array();
    for (const SensorNode& s : inst.sensors) {
        sensors.push_back(json{{"id", s.id},
                               {"x", s.position.x},
                               {"y", s.position.y},
                               {"residual_j", s.residual},
                               {"beta_w", s.consumption_rate}});
    }
    json requests = json::array();
    for (const ChargingRequest& r : inst.requests) {
        requests.push_back(json{{"sensor_id", r.sensor_id}, {"deadline_s", r.deadline}});
    }
    json doc{{"schema_version", kSchemaVersion},
             {"params", params_to_json(inst.params)},
             {"sensors", sensors},
             {"requests", requests},
             {"seed", inst.seed}};
    return doc.dump(2) + "\n";
}

NetworkInstance instance_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed instance file: ") + e.what());
    }
    NetworkInstance inst;
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != kSchemaVersion)
            throw IoError("unsupported instance schema_version " + std::to_string(version));
        inst.params = params_from_json(doc.at("params"));
        for (const json& js : doc.at("sensors")) {
            SensorNode s;
            s.id = js.at("id").get<int>();
            s.position.x = js.at("x").get<double>();
            s.position.y = js.at("y").get<double>();
            s.residual = js.at("residual_j").get<double>();
            s.consumption_rate = js.at("beta_w").get<double>();
            inst.sensors.push_back(s);
        }
        for (const json& jr : doc.at("requests")) {
            ChargingRequest r;
            r.sensor_id = jr.at("sensor_id").get<int>();
            r.deadline = jr.at("deadline_s").get<double>();
            inst.requests.push_back(r);
        }
        inst.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed instance file: ") + e.what());
    }
    validate_instance(inst);
    return inst;
}

void save_instance(const NetworkInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << instance_to_json(inst);
    if (!out) throw IoError("write failed: " + path);
}

NetworkInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

}  // namespace kcharge
