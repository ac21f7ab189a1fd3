#pragma once

#include <set>
#include <vector>

#include "kcharge/geometry.hpp"
#include "kcharge/instance.hpp"

namespace kcharge {

// One subregion of the disk arrangement, realized as the set of grid points
// sharing the same covering-sensor signature.
struct Subregion {
    std::vector<int> covering;  // sensor ids, ascending; empty = uncovered
    int point_count = 0;
};

struct CoverageSignatureMap {
    double grid_spacing = 5.0;
    std::vector<Subregion> subregions;  // index = subregion id, first-seen order
    // sensor id -> subregion indices whose signature contains it (ids 0..n,
    // slot 0 unused since the depot senses nothing)
    std::vector<std::vector<int>> covered_by_sensor;
};

// Per-subregion minimum number of requesting sensors that must be charged.
struct RequirementTable {
    std::vector<int> entries;  // parallel to CoverageSignatureMap::subregions

    bool all_zero() const {
        for (int e : entries)
            if (e != 0) return false;
        return true;
    }
    friend bool operator==(const RequirementTable&, const RequirementTable&) = default;
};

// Sampling grid coordinates along one axis: multiples of `spacing` plus the
// far boundary when spacing does not divide the extent.
std::vector<double> grid_axis(double extent, double spacing);

// True iff every grid point lies within `radius` of at least k centers.
bool grid_is_k_covered(const std::vector<Point>& centers, double radius,
                       double width, double height, double spacing, int k);

// Classifies every grid point by its covering-sensor set. Deterministic:
// subregion indices follow row-major first encounter.
CoverageSignatureMap compute_signatures(const NetworkInstance& inst, double grid_spacing);

// T[i] = max(0, k - covering(i) + requesting_covering(i)). Throws
// UnderCoveredError if some subregion has fewer than k covering sensors.
RequirementTable build_requirement_table(const CoverageSignatureMap& sig,
                                         const std::vector<ChargingRequest>& requests,
                                         int k);

// Charging a requester decrements every entry of the subregions its disk
// covers, floored at zero. Persistent: the input table is unchanged.
RequirementTable apply_charge(const RequirementTable& table, int sensor_id,
                              const CoverageSignatureMap& sig);

// Direct grid check with alive set = non-requesters plus charged requesters.
bool verify_k_coverage(const NetworkInstance& inst, const std::set<int>& charged_ids,
                       double grid_spacing);

// Precomputed view of the subregions still requiring charges ("active"
// entries, T > 0), shared by the solvers. Requesters get dense slots.
struct ActiveCoverage {
    std::vector<int> requesters;            // sensor ids, ascending
    std::vector<int> slot_of;               // sensor id -> slot, -1 if none
    std::vector<int> required;              // per active subregion
    std::vector<std::vector<int>> covers;   // slot -> active subregion indices
    std::vector<std::vector<int>> covered_by;  // active subregion -> slots

    static ActiveCoverage build(const CoverageSignatureMap& sig,
                                const RequirementTable& table,
                                const std::vector<ChargingRequest>& requests);

    int slot(int sensor_id) const {
        return sensor_id >= 0 && sensor_id < static_cast<int>(slot_of.size())
                   ? slot_of[sensor_id]
                   : -1;
    }
    bool initially_satisfied() const { return required.empty(); }
};

// Incremental requirement state along one tour under construction.
class ChargeState {
public:
    explicit ChargeState(const ActiveCoverage& cov);

    bool all_satisfied() const { return open_entries_ == 0; }
    // Would charging this sensor decrement at least one positive entry?
    bool would_contribute(int sensor_id) const;
    void charge(int sensor_id);
    int remaining(std::size_t subregion_slot) const { return remaining_[subregion_slot]; }
    int open_entries() const { return open_entries_; }

private:
    const ActiveCoverage* cov_;
    std::vector<int> remaining_;
    int open_entries_ = 0;
};

}  // namespace kcharge
