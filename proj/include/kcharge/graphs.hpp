#pragma once

#include <cstdint>
#include <vector>

#include "kcharge/instance.hpp"

namespace kcharge {

// Time buckets of one requester: multiples of `step` from t0, with the
// deadline itself closing the last (possibly shorter) bucket.
std::vector<double> bucket_times(double deadline, double t0, double step);

struct TeVertex {
    int sensor_id = 0;   // 0 = start vertex v0
    int bucket = 0;      // time index k
    double time = 0.0;   // t_i^k, bucket upper endpoint (t0 for v0)
};

struct TeEdge {
    std::int32_t to = 0;
    double weight = 0.0;  // travel distance, m
};

// Time-expanded DAG: one vertex per (requester, time bucket) plus v0 at
// index 0. An edge lands in the bucket whose right-closed interval contains
// the arrival computed from the source bucket time.
struct TimeExpandedGraph {
    std::vector<TeVertex> vertices;          // [0] = v0
    std::vector<std::vector<TeEdge>> adj;    // out-edges per vertex
    std::vector<std::vector<int>> clique;    // sensor id -> its vertex indices by bucket
    std::size_t edge_count = 0;

    // Estimated-size guard for pathological inputs; build throws BudgetError past it.
    static constexpr std::size_t kMaxEdges = 60'000'000;
};

TimeExpandedGraph build_time_expanded(const NetworkInstance& inst);

// Kahn's algorithm with deterministic tie-breaking; throws InvariantError
// when a cycle is present (never on built graphs).
std::vector<int> topological_order(const TimeExpandedGraph& g);

// Static reachability graph over requesters plus v0 (node 0). An edge i->j
// exists iff the worst-case departure estimate (full charge at i from its
// t0 residual, then travel) meets j's deadline; v0 carries no charging term
// and has an unconstrained (infinite) deadline of its own.
struct ReachabilityGraph {
    std::vector<int> node_ids;                // [0] = 0 (v0), then requester ids ascending
    std::vector<double> deadlines;            // per node index; v0 = +inf
    std::vector<std::vector<int>> out;        // neighbor node indices, ascending
    std::vector<std::vector<char>> edge;      // adjacency matrix over node indices

    int index_of(int sensor_id) const;        // -1 if not a node
    bool has_edge(int from_id, int to_id) const;
    std::size_t requester_count() const { return node_ids.size() - 1; }
};

ReachabilityGraph build_reachability(const NetworkInstance& inst);

}  // namespace kcharge
