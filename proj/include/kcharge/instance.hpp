#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kcharge/geometry.hpp"

namespace kcharge {

// Depot / service station vertex id. Sensors are numbered from 1.
inline constexpr int kDepotId = 0;

// Global physics and problem parameters of one scenario.
struct SimParams {
    double area_width = 500.0;        // m
    double area_height = 500.0;       // m
    double sensing_range = 135.0;     // m
    double charger_speed = 5.0;       // m/s
    double move_cost = 600.0;         // J/m
    double battery_capacity = 10800.0;  // J
    double transfer_rate = 20.0;      // W
    double alpha = 0.45;              // request threshold, fraction of capacity
    int coverage_k = 2;
    Point depot{250.0, 250.0};
    double departure_time = 0.0;      // t0, all times are absolute seconds
    double time_step = 1.0;           // s, DP time discretization
    bool include_return = true;       // tours close at the depot

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct SensorNode {
    int id = 0;
    Point position;
    double residual = 0.0;          // B_i(t0), J
    double consumption_rate = 0.0;  // beta_i, W

    friend bool operator==(const SensorNode&, const SensorNode&) = default;
};

struct ChargingRequest {
    int sensor_id = 0;
    double deadline = 0.0;  // D_i = B_i(t0) / beta_i, absolute seconds

    friend bool operator==(const ChargingRequest&, const ChargingRequest&) = default;
};

struct NetworkInstance {
    SimParams params;
    std::vector<SensorNode> sensors;   // ids 1..n, in id order
    std::vector<ChargingRequest> requests;  // sorted by sensor_id
    std::uint64_t seed = 0;

    const SensorNode& sensor(int id) const;
    bool has_request(int sensor_id) const;
    const ChargingRequest* request_for(int sensor_id) const;

    friend bool operator==(const NetworkInstance&, const NetworkInstance&) = default;
};

// Generator knobs. Physical defaults follow the standard scenario; the
// consumption-rate interval is a configurable stand-in for field data.
struct GenerationParams {
    int n = 64;
    SimParams params;
    double beta_min = 0.2;  // W
    double beta_max = 1.0;  // W
    double residual_floor_frac = 0.05;  // residual uniform in (floor*B, B]
    double coverage_grid_spacing = 5.0;  // m, spacing of the k-coverage check
    int max_retries = 200;  // position resampling bound
};

// Request set per the residual-energy threshold: sensor i requests iff
// B_i(t0)/B <= alpha, with deadline B_i(t0)/beta_i.
std::vector<ChargingRequest> derive_requests(const std::vector<SensorNode>& sensors,
                                             const SimParams& params);

// Seeded instance generator. Positions are uniform over the area and
// resampled until the full deployment k-covers the sampling grid; throws
// BudgetError after gen.max_retries failed attempts. Deterministic:
// identical (gen, seed) yield identical instances.
NetworkInstance generate_instance(const GenerationParams& gen, std::uint64_t seed);

// Structural invariant checks shared by the generator and the loader
// (ids, ranges, referential integrity, request-threshold consistency).
// Throws InvariantError. Does not check k-coverage.
void validate_instance(const NetworkInstance& inst);

// Instance file I/O. Self-describing JSON document with a schema tag;
// save/load round-trips field-for-field.
void save_instance(const NetworkInstance& inst, const std::string& path);
NetworkInstance load_instance(const std::string& path);

std::string instance_to_json(const NetworkInstance& inst);
NetworkInstance instance_from_json(const std::string& text);

}  // namespace kcharge
