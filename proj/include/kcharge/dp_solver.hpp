#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kcharge/coverage.hpp"
#include "kcharge/graphs.hpp"
#include "kcharge/solution.hpp"

namespace kcharge {

// Set of node colors on a colorful path. Colors are the requesters' dense
// slots (the identity coloring: every sensor already has a unique color).
struct ColorSet {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    static constexpr int kCapacity = 128;

    bool test(int b) const {
        return b < 64 ? (lo >> b) & 1 : (hi >> (b - 64)) & 1;
    }
    ColorSet with(int b) const {
        ColorSet c = *this;
        if (b < 64) c.lo |= std::uint64_t{1} << b;
        else c.hi |= std::uint64_t{1} << (b - 64);
        return c;
    }
    ColorSet without(int b) const {
        ColorSet c = *this;
        if (b < 64) c.lo &= ~(std::uint64_t{1} << b);
        else c.hi &= ~(std::uint64_t{1} << (b - 64));
        return c;
    }
    int intersect_count(const ColorSet& m) const {
        return std::popcount(lo & m.lo) + std::popcount(hi & m.hi);
    }
    bool subset_of(const ColorSet& m) const {
        return (lo & ~m.lo) == 0 && (hi & ~m.hi) == 0;
    }
    int count() const { return std::popcount(lo) + std::popcount(hi); }
    bool empty() const { return lo == 0 && hi == 0; }

    friend bool operator==(const ColorSet&, const ColorSet&) = default;
};

struct ColorSetHash {
    std::size_t operator()(const ColorSet& c) const {
        std::uint64_t x = c.lo * 0x9e3779b97f4a7c15ULL;
        x ^= (c.hi + 0x9e3779b97f4a7c15ULL) + (x << 6) + (x >> 2);
        x ^= x >> 31;
        return static_cast<std::size_t>(x * 0xbf58476d1ce4e5b9ULL);
    }
};

struct DpOptions {
    std::size_t label_cap = 5'000'000;
    double time_budget_s = 0.0;       // 0 = unlimited
    bool contribution_filter = true;  // only extend to charges that decrement T
    bool dominance_pruning = false;   // drop superset-colors labels that cost more
};

struct DpStats {
    std::size_t labels_stored = 0;
    std::size_t relaxations = 0;
    std::size_t harvested = 0;
};

struct DpLabel {
    int vertex = 0;
    ColorSet colors;
    double distance = 0.0;        // path distance up to `vertex`, no return leg
    std::int32_t pred_vertex = -1;
};

// Color-coded dynamic program over the time-expanded DAG. Keeps, per
// (vertex, color set), the minimum path distance and one predecessor; a
// label's requirement table is a pure function of its color set.
class DpSearch {
public:
    DpSearch(const TimeExpandedGraph& g, const RequirementTable& table,
             const CoverageSignatureMap& sig, const NetworkInstance& inst,
             DpOptions opts = {});

    // Propagates labels in topological order; throws BudgetError when the
    // label cap or time budget is exceeded.
    void run();

    bool has_result() const { return have_best_; }
    const DpLabel& best_label() const;
    // Best path distance including the closing leg (when tours close).
    double best_total_distance() const { return best_total_; }

    // Walks predecessors from a stored label back to v0, removing one color
    // per step. Throws InvariantError on a broken chain.
    std::vector<int> recover_path(const DpLabel& label) const;

    const DpStats& stats() const { return stats_; }

    // The requirement table reached after charging the color set.
    RequirementTable table_for(const ColorSet& colors) const;
    bool all_satisfied(const ColorSet& colors) const;
    bool contributes(const ColorSet& colors, int slot) const;
    int slot_of(int sensor_id) const { return active_.slot(sensor_id); }

    template <typename F>
    void for_each_label(F&& f) const {
        for (std::size_t v = 0; v < store_.size(); ++v)
            for (const auto& [colors, entry] : store_[v])
                f(DpLabel{static_cast<int>(v), colors, entry.dist, entry.pred});
    }

private:
    struct Entry {
        double dist = 0.0;
        std::int32_t pred = -1;
    };
    using Store = std::unordered_map<ColorSet, Entry, ColorSetHash>;

    double return_leg(int vertex) const;
    void harvest(int vertex, const ColorSet& colors, double dist, std::int32_t pred);

    const TimeExpandedGraph& g_;
    const RequirementTable& table_;
    const NetworkInstance& inst_;
    DpOptions opts_;
    ActiveCoverage active_;
    std::vector<ColorSet> subregion_mask_;  // per active subregion: covering slots
    std::vector<Store> store_;
    DpStats stats_;
    bool have_best_ = false;
    DpLabel best_;
    double best_total_ = 0.0;
};

// Minimal-travel feasible tour via DpSearch, or nullopt when no colorful
// path reaches an all-zero table. The returned solution is re-validated
// against the continuous-time model.
std::optional<Solution> solve_dp(const TimeExpandedGraph& g, const RequirementTable& table,
                                 const CoverageSignatureMap& sig, const NetworkInstance& inst,
                                 const DpOptions& opts = {}, DpStats* stats_out = nullptr);

}  // namespace kcharge
