#include "kcharge/coverage.hpp"

#include <algorithm>
#include <map>

#include "kcharge/errors.hpp"

namespace kcharge {

std::vector<double> grid_axis(double extent, double spacing) {
    std::vector<double> coords;
    for (int i = 0;; ++i) {
        const double c = i * spacing;
        if (c > extent) break;
        coords.push_back(c);
    }
    if (coords.empty() || coords.back() < extent) coords.push_back(extent);
    return coords;
}

bool grid_is_k_covered(const std::vector<Point>& centers, double radius,
                       double width, double height, double spacing, int k) {
    const auto xs = grid_axis(width, spacing);
    const auto ys = grid_axis(height, spacing);
    for (double y : ys) {
        for (double x : xs) {
            const Point q{x, y};
            int count = 0;
            for (const Point& c : centers) {
                if (within_range(c, q, radius) && ++count >= k) break;
            }
            if (count < k) return false;
        }
    }
    return true;
}

CoverageSignatureMap compute_signatures(const NetworkInstance& inst, double grid_spacing) {
    if (grid_spacing <= 0.0 || grid_spacing > inst.params.sensing_range)
        throw InvariantError("grid_spacing must be in (0, sensing_range]");

    CoverageSignatureMap sig;
    sig.grid_spacing = grid_spacing;
    sig.covered_by_sensor.assign(inst.sensors.size() + 1, {});

    const auto xs = grid_axis(inst.params.area_width, grid_spacing);
    const auto ys = grid_axis(inst.params.area_height, grid_spacing);
    const double r = inst.params.sensing_range;

    std::map<std::vector<int>, int> index_of;
    std::vector<int> covering;
    for (double y : ys) {
        for (double x : xs) {
            const Point q{x, y};
            covering.clear();
            for (const SensorNode& s : inst.sensors) {
                if (within_range(s.position, q, r)) covering.push_back(s.id);
            }
            auto [it, inserted] = index_of.try_emplace(covering, static_cast<int>(sig.subregions.size()));
            if (inserted) {
                sig.subregions.push_back({covering, 0});
                for (int id : covering) sig.covered_by_sensor[id].push_back(it->second);
            }
            ++sig.subregions[it->second].point_count;
        }
    }
    return sig;
}

RequirementTable build_requirement_table(const CoverageSignatureMap& sig,
                                         const std::vector<ChargingRequest>& requests,
                                         int k) {
    std::vector<char> requesting(sig.covered_by_sensor.size(), 0);
    for (const ChargingRequest& r : requests) {
        if (r.sensor_id >= 0 && r.sensor_id < static_cast<int>(requesting.size()))
            requesting[r.sensor_id] = 1;
    }

    RequirementTable table;
    table.entries.reserve(sig.subregions.size());
    for (std::size_t i = 0; i < sig.subregions.size(); ++i) {
        const Subregion& a = sig.subregions[i];
        const int covering = static_cast<int>(a.covering.size());
        if (covering < k)
            throw UnderCoveredError("subregion " + std::to_string(i) + " covered by only " +
                                    std::to_string(covering) + " sensors, need k=" + std::to_string(k));
        int req = 0;
        for (int id : a.covering) req += requesting[id];
        table.entries.push_back(std::max(0, k - covering + req));
    }
    return table;
}

RequirementTable apply_charge(const RequirementTable& table, int sensor_id,
                              const CoverageSignatureMap& sig) {
    RequirementTable out = table;
    if (sensor_id < 0 || sensor_id >= static_cast<int>(sig.covered_by_sensor.size())) return out;
    for (int a : sig.covered_by_sensor[sensor_id]) {
        if (out.entries[a] > 0) --out.entries[a];
    }
    return out;
}

bool verify_k_coverage(const NetworkInstance& inst, const std::set<int>& charged_ids,
                       double grid_spacing) {
    std::vector<Point> alive;
    alive.reserve(inst.sensors.size());
    for (const SensorNode& s : inst.sensors) {
        if (!inst.has_request(s.id) || charged_ids.count(s.id)) alive.push_back(s.position);
    }
    return grid_is_k_covered(alive, inst.params.sensing_range, inst.params.area_width,
                             inst.params.area_height, grid_spacing, inst.params.coverage_k);
}

ActiveCoverage ActiveCoverage::build(const CoverageSignatureMap& sig,
                                     const RequirementTable& table,
                                     const std::vector<ChargingRequest>& requests) {
    ActiveCoverage cov;
    cov.slot_of.assign(sig.covered_by_sensor.size(), -1);
    for (const ChargingRequest& r : requests) cov.requesters.push_back(r.sensor_id);
    std::sort(cov.requesters.begin(), cov.requesters.end());
    for (std::size_t s = 0; s < cov.requesters.size(); ++s)
        cov.slot_of[cov.requesters[s]] = static_cast<int>(s);

    cov.covers.assign(cov.requesters.size(), {});
    for (std::size_t a = 0; a < table.entries.size(); ++a) {
        if (table.entries[a] <= 0) continue;
        const int idx = static_cast<int>(cov.required.size());
        cov.required.push_back(table.entries[a]);
        cov.covered_by.emplace_back();
        for (int id : sig.subregions[a].covering) {
            const int s = cov.slot_of[id];
            if (s >= 0) {
                cov.covers[s].push_back(idx);
                cov.covered_by.back().push_back(s);
            }
        }
    }
    return cov;
}

ChargeState::ChargeState(const ActiveCoverage& cov)
    : cov_(&cov), remaining_(cov.required) {
    for (int r : remaining_)
        if (r > 0) ++open_entries_;
}

bool ChargeState::would_contribute(int sensor_id) const {
    const int s = cov_->slot(sensor_id);
    if (s < 0) return false;
    for (int a : cov_->covers[s])
        if (remaining_[a] > 0) return true;
    return false;
}

void ChargeState::charge(int sensor_id) {
    const int s = cov_->slot(sensor_id);
    if (s < 0) return;
    for (int a : cov_->covers[s]) {
        if (remaining_[a] > 0 && --remaining_[a] == 0) --open_entries_;
    }
}

}  // namespace kcharge
