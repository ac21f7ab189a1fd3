#include "kcharge/rl_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kcharge/errors.hpp"

namespace kcharge {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

RlContext RlContext::build(const NetworkInstance& inst, const RequirementTable& table,
                           const CoverageSignatureMap& sig, const ReachabilityGraph& rg) {
    RlContext ctx;
    ctx.inst = &inst;
    ctx.rg = &rg;
    ctx.active = ActiveCoverage::build(sig, table, inst.requests);
    ctx.diagonal = std::hypot(inst.params.area_width, inst.params.area_height);
    ctx.max_deadline = 1.0;
    for (const ChargingRequest& r : inst.requests)
        ctx.max_deadline = std::max(ctx.max_deadline, r.deadline);
    return ctx;
}

PartialTour::PartialTour(const RlContext& ctx)
    : state(ctx.active), last_charge_time(ctx.inst->params.departure_time) {}

void PartialTour::insert(const RlContext& ctx, int sensor_id, std::size_t position) {
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(position), sensor_id);
    state.charge(sensor_id);
    const PathEvaluation eval = evaluate_path(order, *ctx.inst);
    if (!eval.feasible) throw InvariantError("infeasible insertion applied to partial tour");
    distance = eval.travel_distance;
    last_charge_time = eval.charge_times.empty() ? ctx.inst->params.departure_time
                                                 : eval.charge_times.back();
}

bool PartialTour::visited(int sensor_id) const {
    return std::find(order.begin(), order.end(), sensor_id) != order.end();
}

std::vector<int> action_set(const RlContext& ctx, const PartialTour& tour) {
    std::vector<int> actions;
    for (int candidate : ctx.active.requesters) {
        if (tour.visited(candidate)) continue;
        // A charge that decrements nothing can neither shorten the tour nor
        // restore coverage; it only burns deadline slack.
        if (!tour.state.would_contribute(candidate)) continue;
        bool reachable = ctx.rg->has_edge(kDepotId, candidate);
        for (std::size_t i = 0; i < tour.order.size() && !reachable; ++i)
            reachable = ctx.rg->has_edge(tour.order[i], candidate);
        if (reachable) actions.push_back(candidate);
    }
    return actions;
}

std::vector<double> encode(const RlContext& ctx, const PartialTour& tour, int candidate) {
    return encode(ctx, tour, candidate, best_insertion(tour.order, candidate, *ctx.inst));
}

std::vector<double> encode(const RlContext& ctx, const PartialTour& tour, int candidate,
                           const std::optional<Insertion>& insertion) {
    const NetworkInstance& inst = *ctx.inst;
    const SensorNode& node = inst.sensor(candidate);
    std::vector<double> f(kFeatureCount, 0.0);

    if (insertion) {
        f[0] = 1.0;
        f[1] = clamp01(insertion->delta_distance / ctx.diagonal);
        std::vector<int> trial = tour.order;
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(insertion->position), candidate);
        const PathEvaluation eval = evaluate_path(trial, inst);
        const double deadline = node.residual / node.consumption_rate;
        f[2] = clamp01((deadline - eval.charge_times[insertion->position]) / ctx.max_deadline);
    }

    const std::size_t total = ctx.active.required.size();
    const int slot = ctx.active.slot(candidate);
    if (slot >= 0 && total > 0) {
        int decremented = 0;
        for (int a : ctx.active.covers[slot])
            if (tour.state.remaining(static_cast<std::size_t>(a)) > 0) ++decremented;
        f[3] = static_cast<double>(decremented) / static_cast<double>(total);
    }
    f[4] = node.residual / inst.params.battery_capacity;
    f[5] = node.position.x / inst.params.area_width;
    f[6] = node.position.y / inst.params.area_height;

    const std::size_t requesters = std::max<std::size_t>(1, ctx.active.requesters.size());
    f[7] = static_cast<double>(tour.order.size()) / static_cast<double>(requesters);
    f[8] = total == 0 ? 1.0
                      : static_cast<double>(total - static_cast<std::size_t>(tour.state.open_entries())) /
                            static_cast<double>(total);
    f[9] = clamp01(tour.distance / (ctx.diagonal * static_cast<double>(requesters)));
    f[10] = clamp01(tour.last_charge_time / ctx.max_deadline);
    return f;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(std::max<std::size_t>(1, capacity)) {
    ring_.reserve(std::min<std::size_t>(capacity_, 4096));
}

void ReplayBuffer::push(Transition t) {
    if (ring_.size() < capacity_) {
        ring_.push_back(std::move(t));
        return;
    }
    ring_[next_] = std::move(t);  // oldest first
    next_ = (next_ + 1) % capacity_;
}

namespace {

struct Candidate {
    int id = 0;
    std::optional<Insertion> insertion;
    bool viable = false;  // successor state keeps every open subregion servable
    std::vector<double> features;
};

// Necessary condition for the successor state to be completable: every
// still-open subregion keeps at least as many insertable unvisited
// contributors as charges it still needs.
bool successor_viable(const RlContext& ctx, const PartialTour& next) {
    std::vector<signed char> insertable(ctx.active.requesters.size(), -1);
    auto slot_insertable = [&](int slot) {
        if (insertable[slot] < 0) {
            const int id = ctx.active.requesters[slot];
            insertable[slot] =
                !next.visited(id) && best_insertion(next.order, id, *ctx.inst).has_value() ? 1 : 0;
        }
        return insertable[slot] == 1;
    };
    for (std::size_t a = 0; a < ctx.active.required.size(); ++a) {
        const int need = next.state.remaining(a);
        if (need == 0) continue;
        int have = 0;
        for (int slot : ctx.active.covered_by[a]) {
            if (slot_insertable(slot) && ++have >= need) break;
        }
        if (have < need) return false;
    }
    return true;
}

// Regret feature over the live action set: for each of the candidate's
// still-open subregions take the cheapest sibling delta (none: twice the
// diagonal), keep the dearest of those, subtract the candidate's own delta.
void fill_regret(const RlContext& ctx, const PartialTour& tour, std::vector<Candidate>& cands) {
    for (Candidate& c : cands) {
        if (!c.insertion) continue;
        const int slot = ctx.active.slot(c.id);
        double dearest = 0.0;
        for (int a : ctx.active.covers[slot]) {
            if (tour.state.remaining(static_cast<std::size_t>(a)) == 0) continue;
            double cheapest_alt = 2.0 * ctx.diagonal;
            for (const Candidate& other : cands) {
                if (other.id == c.id || !other.insertion) continue;
                const int oslot = ctx.active.slot(other.id);
                for (int oa : ctx.active.covers[oslot]) {
                    if (oa == a) {
                        cheapest_alt = std::min(cheapest_alt, other.insertion->delta_distance);
                        break;
                    }
                }
            }
            dearest = std::max(dearest, cheapest_alt);
        }
        c.features[11] =
            std::clamp((dearest - c.insertion->delta_distance) / ctx.diagonal, -1.0, 1.0);
    }
}

std::vector<Candidate> scan_actions(const RlContext& ctx, const PartialTour& tour) {
    std::vector<Candidate> out;
    for (int id : action_set(ctx, tour)) {
        Candidate c;
        c.id = id;
        c.insertion = best_insertion(tour.order, id, *ctx.inst);
        if (c.insertion) {
            PartialTour next = tour;
            next.insert(ctx, id, c.insertion->position);
            c.viable = next.state.all_satisfied() || successor_viable(ctx, next);
        }
        c.features = encode(ctx, tour, id, c.insertion);
        out.push_back(std::move(c));
    }
    fill_regret(ctx, tour, out);
    return out;
}

std::vector<std::vector<double>> feasible_features(const std::vector<Candidate>& cands) {
    std::vector<std::vector<double>> out;
    for (const Candidate& c : cands)
        if (c.insertion) out.push_back(c.features);
    return out;
}

double max_q(const MlpNetwork& net, const std::vector<std::vector<double>>& actions) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& f : actions) best = std::max(best, net.forward(f));
    return best;
}

}  // namespace

double q_target(const MlpNetwork& net, const Transition& t, double gamma, double distance_scale) {
    const double r = t.reward / distance_scale;
    if (t.dead_end) return r + gamma * kDeadEndValue;
    if (t.terminal || t.next_actions.empty()) return r;
    return r + gamma * max_q(net, t.next_actions);
}

namespace {

// Greedy pick over feasible-insertion candidates, preferring ones whose
// successor stays completable; ties take the first (lowest id). Returns -1
// when none is feasible.
int greedy_pick(const MlpNetwork& net, const std::vector<Candidate>& cands) {
    int best = -1;
    double best_q = 0.0;
    bool best_viable = false;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!cands[i].insertion) continue;
        const double q = net.forward(cands[i].features);
        if (best < 0 || (cands[i].viable && !best_viable) ||
            (cands[i].viable == best_viable && q > best_q)) {
            best = static_cast<int>(i);
            best_q = q;
            best_viable = cands[i].viable;
        }
    }
    return best;
}

}  // namespace

QPolicy train(const NetworkInstance& inst, const RequirementTable& table,
              const CoverageSignatureMap& sig, const ReachabilityGraph& rg,
              const RlHyperparams& hp, TrainStats* stats) {
    const RlContext ctx = RlContext::build(inst, table, sig, rg);
    std::mt19937_64 rng(hp.seed);

    std::vector<int> sizes{kFeatureCount};
    for (int h : hp.hidden) sizes.push_back(h);
    sizes.push_back(1);
    QPolicy policy{MlpNetwork(sizes, rng()), hp, false};

    if (stats) *stats = {};
    if (ctx.active.initially_satisfied()) return policy;  // nothing to learn

    ReplayBuffer buffer(hp.replay_capacity);
    std::vector<double> grad(policy.net.parameter_count(), 0.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int steps_per_episode = std::max<int>(1, static_cast<int>(ctx.active.requesters.size()));
    const double decay_span = std::max(1.0, hp.epsilon_decay_frac * hp.episodes);

    bool any_action = false;
    for (int episode = 0; episode < hp.episodes; ++episode) {
        const double frac = std::min(1.0, episode / decay_span);
        const double epsilon = hp.epsilon_start + (hp.epsilon_end - hp.epsilon_start) * frac;

        PartialTour tour(ctx);
        std::vector<Candidate> cands = scan_actions(ctx, tour);
        double loss_sum = 0.0;
        std::size_t loss_count = 0;

        for (int m = 0; m < steps_per_episode; ++m) {
            if (cands.empty()) break;  // stuck: no vertex reachable
            any_action = true;

            int pick;
            if (coin(rng) < epsilon) {
                std::uniform_int_distribution<std::size_t> u(0, cands.size() - 1);
                pick = static_cast<int>(u(rng));
            } else {
                pick = greedy_pick(policy.net, cands);
                if (pick < 0) {  // every insertion infeasible: episode cannot go on
                    std::uniform_int_distribution<std::size_t> u(0, cands.size() - 1);
                    pick = static_cast<int>(u(rng));
                }
            }
            const Candidate chosen = std::move(cands[pick]);

            Transition t;
            t.features = chosen.features;
            if (!chosen.insertion) {
                t.reward = kInfeasibleReward;
                t.terminal = true;
                t.masked = true;
            } else {
                tour.insert(ctx, chosen.id, chosen.insertion->position);
                t.reward = -chosen.insertion->delta_distance;
                t.terminal = tour.state.all_satisfied();
                if (!t.terminal) {
                    cands = scan_actions(ctx, tour);
                    t.next_actions = feasible_features(cands);
                    if (t.next_actions.empty()) {
                        t.terminal = true;
                        t.dead_end = true;  // unsatisfied with nothing playable
                    }
                }
            }
            const bool done = t.terminal;
            if (stats && done && !t.dead_end && !t.masked) ++stats->episodes_satisfied;
            buffer.push(std::move(t));

            // One-step Q update on a uniform replay batch.
            const auto batch = buffer.sample(static_cast<std::size_t>(hp.batch_size), rng);
            if (!batch.empty()) {
                std::fill(grad.begin(), grad.end(), 0.0);
                for (const Transition* tr : batch) {
                    const double y = q_target(policy.net, *tr, hp.gamma, ctx.diagonal);
                    loss_sum += policy.net.accumulate_gradient(tr->features, y, grad);
                    ++loss_count;
                }
                policy.net.apply_step(grad, hp.learning_rate / static_cast<double>(batch.size()));
            }
            if (stats) ++stats->transitions;
            if (done) break;
        }
        if (stats) stats->episode_mean_loss.push_back(loss_count ? loss_sum / loss_count : 0.0);
    }
    policy.no_action_available = !any_action;
    return policy;
}

std::optional<Solution> rollout(const QPolicy& policy, const NetworkInstance& inst,
                                const RequirementTable& table, const CoverageSignatureMap& sig,
                                const ReachabilityGraph& rg) {
    const RlContext ctx = RlContext::build(inst, table, sig, rg);
    PartialTour tour(ctx);

    while (!tour.state.all_satisfied()) {
        const std::vector<Candidate> cands = scan_actions(ctx, tour);
        const int pick = greedy_pick(policy.net, cands);
        if (pick < 0) return std::nullopt;  // every remaining action is masked
        tour.insert(ctx, cands[pick].id, cands[pick].insertion->position);
    }

    Solution sol = make_solution(tour.order, inst);
    if (!sol.feasible) throw InvariantError("rollout produced a deadline-violating tour");
    return sol;
}

void save_policy(const QPolicy& policy, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << policy.net.to_text();
    if (!out) throw IoError("write failed: " + path);
}

MlpNetwork load_policy_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return MlpNetwork::from_text(buf.str());
}

}  // namespace kcharge
