#pragma once

#include <vector>

#include "kcharge/coverage.hpp"
#include "kcharge/instance.hpp"

namespace kcharge::testing {

inline SimParams small_params(double width, double height, double range, int k,
                              double alpha = 0.45) {
    SimParams p;
    p.area_width = width;
    p.area_height = height;
    p.sensing_range = range;
    p.coverage_k = k;
    p.alpha = alpha;
    p.depot = {width / 2.0, height / 2.0};
    return p;
}

inline SensorNode sensor(int id, double x, double y, double residual, double beta) {
    return SensorNode{id, {x, y}, residual, beta};
}

inline NetworkInstance instance_of(SimParams params, std::vector<SensorNode> sensors) {
    NetworkInstance inst;
    inst.params = params;
    inst.sensors = std::move(sensors);
    inst.requests = derive_requests(inst.sensors, inst.params);
    validate_instance(inst);
    return inst;
}

// Two mandatory requesters where nearest-first dead-ends: the close sensor
// is a trap, the far one has a tight deadline that only a direct hop meets.
inline NetworkInstance trap_instance() {
    SimParams p = small_params(100, 100, 150, 2);
    return instance_of(p, {sensor(1, 60, 50, 4320, 0.5),   // D = 8640 s
                           sensor(2, 90, 50, 100, 1.0)});  // D = 100 s
}

// Five interchangeable requesters, any two restore coverage; the optimal
// pair is {7, 4} with a closed tour of 80 m.
inline NetworkInstance toy5_instance() {
    SimParams p = small_params(100, 100, 200, 4);
    return instance_of(p, {sensor(1, 25, 25, 10800, 1.0),  // full battery, no request
                           sensor(2, 75, 75, 10800, 1.0),
                           sensor(3, 10, 50, 3000, 0.3),  // D = 10000 s
                           sensor(4, 90, 50, 3000, 0.3),
                           sensor(5, 50, 10, 3000, 0.3),
                           sensor(6, 50, 90, 3000, 0.3),
                           sensor(7, 55, 50, 3000, 0.3)});
}

inline CoverageSignatureMap signatures_of(const NetworkInstance& inst, double spacing = 5.0) {
    return compute_signatures(inst, spacing);
}

inline RequirementTable table_of(const NetworkInstance& inst, const CoverageSignatureMap& sig) {
    return build_requirement_table(sig, inst.requests, inst.params.coverage_k);
}

// Small-field generator settings where k-coverage is reachable with few
// sensors (the production defaults need dozens of disks).
inline GenerationParams small_gen(int n, int k, double alpha) {
    GenerationParams gen;
    gen.n = n;
    gen.params = small_params(200, 200, 135, k, alpha);
    return gen;
}

}  // namespace kcharge::testing
