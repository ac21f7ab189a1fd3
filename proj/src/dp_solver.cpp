#include "kcharge/dp_solver.hpp"

#include <algorithm>
#include <chrono>

#include "kcharge/errors.hpp"
#include "kcharge/kinematics.hpp"

namespace kcharge {

DpSearch::DpSearch(const TimeExpandedGraph& g, const RequirementTable& table,
                   const CoverageSignatureMap& sig, const NetworkInstance& inst, DpOptions opts)
    : g_(g), table_(table), inst_(inst), opts_(opts),
      active_(ActiveCoverage::build(sig, table, inst.requests)) {
    if (static_cast<int>(active_.requesters.size()) > ColorSet::kCapacity)
        throw BudgetError("more than " + std::to_string(ColorSet::kCapacity) +
                          " requesters exceed the color-set capacity");
    subregion_mask_.resize(active_.required.size());
    for (std::size_t a = 0; a < active_.covered_by.size(); ++a)
        for (int slot : active_.covered_by[a])
            subregion_mask_[a] = subregion_mask_[a].with(slot);
}

bool DpSearch::all_satisfied(const ColorSet& colors) const {
    for (std::size_t a = 0; a < subregion_mask_.size(); ++a)
        if (colors.intersect_count(subregion_mask_[a]) < active_.required[a]) return false;
    return true;
}

bool DpSearch::contributes(const ColorSet& colors, int slot) const {
    for (int a : active_.covers[slot])
        if (colors.intersect_count(subregion_mask_[a]) < active_.required[a]) return true;
    return false;
}

RequirementTable DpSearch::table_for(const ColorSet& colors) const {
    RequirementTable t = table_;
    std::size_t active_idx = 0;
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        if (t.entries[i] <= 0) continue;
        t.entries[i] = std::max(
            0, active_.required[active_idx] - colors.intersect_count(subregion_mask_[active_idx]));
        ++active_idx;
    }
    return t;
}

double DpSearch::return_leg(int vertex) const {
    if (!inst_.params.include_return) return 0.0;
    return distance(inst_.sensor(g_.vertices[vertex].sensor_id).position, inst_.params.depot);
}

void DpSearch::harvest(int vertex, const ColorSet& colors, double dist, std::int32_t pred) {
    ++stats_.harvested;
    const double total = dist + return_leg(vertex);
    if (!have_best_ || total < best_total_) {
        have_best_ = true;
        best_total_ = total;
        best_ = DpLabel{vertex, colors, dist, pred};
    }
}

void DpSearch::run() {
    store_.assign(g_.vertices.size(), {});

    if (active_.initially_satisfied()) {
        // Nothing to charge: the empty tour at v0 is optimal.
        have_best_ = true;
        best_total_ = 0.0;
        best_ = DpLabel{0, {}, 0.0, -1};
        return;
    }

    const auto started = std::chrono::steady_clock::now();
    auto over_time = [&] {
        if (opts_.time_budget_s <= 0.0) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
        return elapsed.count() > opts_.time_budget_s;
    };

    const std::vector<int> topo = topological_order(g_);
    store_[0].emplace(ColorSet{}, Entry{0.0, -1});
    stats_.labels_stored = 1;

    for (int v : topo) {
        if (store_[v].empty()) continue;
        if (over_time()) throw BudgetError("dp time budget exceeded");
        for (const auto& [colors, entry] : store_[v]) {
            for (const TeEdge& e : g_.adj[v]) {
                const int slot = active_.slot(g_.vertices[e.to].sensor_id);
                if (slot < 0) continue;
                if (colors.test(slot)) continue;  // colorful: no sensor twice
                if (opts_.contribution_filter && !contributes(colors, slot)) continue;
                ++stats_.relaxations;

                const ColorSet next = colors.with(slot);
                const double dist = entry.dist + e.weight;
                Store& target = store_[e.to];
                auto it = target.find(next);
                if (it != target.end()) {
                    if (dist < it->second.dist) {
                        it->second = Entry{dist, static_cast<std::int32_t>(v)};
                        if (all_satisfied(next))
                            harvest(e.to, next, dist, static_cast<std::int32_t>(v));
                    }
                    continue;
                }
                if (opts_.dominance_pruning) {
                    bool dominated = false;
                    for (const auto& [c2, e2] : target) {
                        if (e2.dist <= dist && c2.subset_of(next)) {
                            dominated = true;
                            break;
                        }
                    }
                    if (dominated) continue;
                    std::erase_if(target, [&](const auto& kv) {
                        return kv.second.dist >= dist && next.subset_of(kv.first);
                    });
                }
                target.emplace(next, Entry{dist, static_cast<std::int32_t>(v)});
                if (++stats_.labels_stored > opts_.label_cap)
                    throw BudgetError("dp label cap of " + std::to_string(opts_.label_cap) +
                                      " exceeded");
                if (all_satisfied(next)) harvest(e.to, next, dist, static_cast<std::int32_t>(v));
            }
        }
    }
}

const DpLabel& DpSearch::best_label() const {
    if (!have_best_) throw InvariantError("no feasible label stored");
    return best_;
}

std::vector<int> DpSearch::recover_path(const DpLabel& label) const {
    std::vector<int> order;
    int vertex = label.vertex;
    ColorSet colors = label.colors;
    std::int32_t pred = label.pred_vertex;
    while (vertex != 0) {
        const int sensor = g_.vertices[vertex].sensor_id;
        const int slot = active_.slot(sensor);
        if (slot < 0 || !colors.test(slot))
            throw InvariantError("broken predecessor chain: color set misses its own vertex");
        order.push_back(sensor);
        colors = colors.without(slot);
        if (pred < 0) throw InvariantError("broken predecessor chain: missing predecessor");
        vertex = pred;
        if (vertex == 0) break;
        auto it = store_[vertex].find(colors);
        if (it == store_[vertex].end())
            throw InvariantError("broken predecessor chain: predecessor label not stored");
        pred = it->second.pred;
    }
    if (!colors.empty()) throw InvariantError("broken predecessor chain: leftover colors at v0");
    std::reverse(order.begin(), order.end());
    return order;
}

std::optional<Solution> solve_dp(const TimeExpandedGraph& g, const RequirementTable& table,
                                 const CoverageSignatureMap& sig, const NetworkInstance& inst,
                                 const DpOptions& opts, DpStats* stats_out) {
    DpSearch search(g, table, sig, inst, opts);
    try {
        search.run();
    } catch (...) {
        if (stats_out) *stats_out = search.stats();
        throw;
    }
    if (stats_out) *stats_out = search.stats();
    if (!search.has_result()) return std::nullopt;

    const std::vector<int> order = search.recover_path(search.best_label());
    Solution sol = make_solution(order, inst);
    if (!sol.feasible)
        throw InvariantError("dp produced a deadline-violating tour");  // conservative grid broken
    return sol;
}

}  // namespace kcharge
