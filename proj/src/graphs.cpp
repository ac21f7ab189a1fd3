#include "kcharge/graphs.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "kcharge/errors.hpp"
#include "kcharge/kinematics.hpp"

namespace kcharge {

std::vector<double> bucket_times(double deadline, double t0, double step) {
    std::vector<double> times;
    for (int k = 0;; ++k) {
        const double t = t0 + k * step;
        if (t >= deadline) break;
        times.push_back(t);
    }
    times.push_back(deadline);
    return times;
}

TimeExpandedGraph build_time_expanded(const NetworkInstance& inst) {
    const SimParams& p = inst.params;
    TimeExpandedGraph g;
    g.clique.assign(inst.sensors.size() + 1, {});
    g.vertices.push_back({kDepotId, 0, p.departure_time});

    // Materialize cliques for requesters with positive deadlines.
    struct Requester {
        int id;
        double deadline;
        std::vector<double> times;
        int first_vertex;
    };
    std::vector<Requester> reqs;
    for (const ChargingRequest& r : inst.requests) {
        if (r.deadline <= p.departure_time) continue;  // dead on departure, no vertices
        Requester q{r.sensor_id, r.deadline,
                    bucket_times(r.deadline, p.departure_time, p.time_step), 0};
        q.first_vertex = static_cast<int>(g.vertices.size());
        for (int k = 0; k < static_cast<int>(q.times.size()); ++k) {
            g.clique[q.id].push_back(static_cast<int>(g.vertices.size()));
            g.vertices.push_back({q.id, k, q.times[k]});
        }
        reqs.push_back(std::move(q));
    }

    std::size_t upper = 0;
    for (const Requester& q : reqs) upper += q.times.size();
    upper *= reqs.empty() ? 0 : reqs.size();
    if (upper > TimeExpandedGraph::kMaxEdges)
        throw BudgetError("time-expanded graph too large (" + std::to_string(upper) +
                          " potential edges)");

    g.adj.assign(g.vertices.size(), {});

    // Lands `arrival` in the right-closed bucket of requester q, or -1 when
    // it overshoots the deadline.
    auto target_bucket = [](const Requester& q, double arrival) -> int {
        auto it = std::lower_bound(q.times.begin(), q.times.end(), arrival);
        if (it == q.times.end()) return -1;
        return static_cast<int>(it - q.times.begin());
    };

    // v0 edges: travel only, no charging term.
    for (const Requester& q : reqs) {
        const double arrival =
            p.departure_time + distance(p.depot, inst.sensor(q.id).position) / p.charger_speed;
        const int k = target_bucket(q, arrival);
        if (k < 0) continue;
        g.adj[0].push_back({q.first_vertex + k, distance(p.depot, inst.sensor(q.id).position)});
        ++g.edge_count;
    }

    // Sensor-to-sensor edges: Eq.-2 arrival from the source bucket time,
    // with the source residual decayed to that time.
    for (const Requester& qi : reqs) {
        const SensorNode& ni = inst.sensor(qi.id);
        for (const Requester& qj : reqs) {
            if (qi.id == qj.id) continue;
            const SensorNode& nj = inst.sensor(qj.id);
            const double d = distance(ni.position, nj.position);
            for (int k = 0; k < static_cast<int>(qi.times.size()); ++k) {
                const double t = qi.times[k];
                const double arrival = t +
                    (p.battery_capacity - residual_energy(ni, t, p.departure_time)) /
                        p.transfer_rate +
                    d / p.charger_speed;
                const int kk = target_bucket(qj, arrival);
                if (kk < 1) continue;  // k' > 0: an arrival cannot precede departure
                g.adj[qi.first_vertex + k].push_back({qj.first_vertex + kk, d});
                ++g.edge_count;
            }
        }
    }
    return g;
}

std::vector<int> topological_order(const TimeExpandedGraph& g) {
    const std::size_t n = g.vertices.size();
    std::vector<int> indegree(n, 0);
    for (const auto& edges : g.adj)
        for (const TeEdge& e : edges) ++indegree[e.to];

    using Key = std::tuple<double, int, int, int>;  // (time, sensor, bucket, index)
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0)
            ready.emplace(g.vertices[v].time, g.vertices[v].sensor_id, g.vertices[v].bucket,
                          static_cast<int>(v));
    }

    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int v = std::get<3>(ready.top());
        ready.pop();
        order.push_back(v);
        for (const TeEdge& e : g.adj[v]) {
            if (--indegree[e.to] == 0)
                ready.emplace(g.vertices[e.to].time, g.vertices[e.to].sensor_id,
                              g.vertices[e.to].bucket, e.to);
        }
    }
    if (order.size() != n) throw InvariantError("cycle detected in time-expanded graph");
    return order;
}

int ReachabilityGraph::index_of(int sensor_id) const {
    auto it = std::lower_bound(node_ids.begin(), node_ids.end(), sensor_id);
    return it != node_ids.end() && *it == sensor_id ? static_cast<int>(it - node_ids.begin()) : -1;
}

bool ReachabilityGraph::has_edge(int from_id, int to_id) const {
    const int a = index_of(from_id);
    const int b = index_of(to_id);
    return a >= 0 && b >= 0 && edge[a][b] != 0;
}

ReachabilityGraph build_reachability(const NetworkInstance& inst) {
    const SimParams& p = inst.params;
    ReachabilityGraph g;
    g.node_ids.push_back(kDepotId);
    g.deadlines.push_back(kInfeasibleTime);  // depot deadline is infinite
    for (const ChargingRequest& r : inst.requests) {
        g.node_ids.push_back(r.sensor_id);
        g.deadlines.push_back(r.deadline);
    }

    const std::size_t n = g.node_ids.size();
    g.edge.assign(n, std::vector<char>(n, 0));
    g.out.assign(n, {});
    auto position = [&](std::size_t idx) {
        return idx == 0 ? p.depot : inst.sensor(g.node_ids[idx]).position;
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (j != 0 && g.deadlines[j] <= p.departure_time) continue;  // dead sensors unreachable
            const double travel = distance(position(i), position(j)) / p.charger_speed;
            double depart = travel;
            if (i != 0)
                depart += (p.battery_capacity - inst.sensor(g.node_ids[i]).residual) /
                          p.transfer_rate;
            if (p.departure_time + depart <= g.deadlines[j]) {
                g.edge[i][j] = 1;
                g.out[i].push_back(static_cast<int>(j));
            }
        }
    }
    return g;
}

}  // namespace kcharge
