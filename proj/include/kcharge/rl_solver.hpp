#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kcharge/coverage.hpp"
#include "kcharge/graphs.hpp"
#include "kcharge/kinematics.hpp"
#include "kcharge/nn.hpp"
#include "kcharge/solution.hpp"

namespace kcharge {

struct RlHyperparams {
    double gamma = 1.0;  // undiscounted: the return telescopes to -(tour length)
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_decay_frac = 0.8;  // linear decay over this fraction of episodes
    int episodes = 500;
    int batch_size = 32;
    double learning_rate = 1e-2;
    std::size_t replay_capacity = 10'000;
    std::vector<int> hidden = {64, 64};
    std::uint64_t seed = 0;
};

// Rewards below this are the -inf branch of the reward function; such
// transitions are stored but masked out of gradient batches.
inline constexpr double kInfeasibleReward = -1e9;

// Value bootstrapped for an unsatisfied successor state with no feasible
// action left (a dead end). Bounded so the regression stays conditioned,
// large enough that completions always dominate.
inline constexpr double kDeadEndValue = -6.0;

// Feature layout, all entries in [-1, 1]:
//   0 insertion feasible (1/0)        candidate block
//   1 best-insertion delta / diagonal
//   2 deadline slack at best slot / max deadline
//   3 fraction of open table entries the candidate decrements
//   4 candidate residual fraction B_i(t0)/B
//   5 x / width
//   6 y / height
//   7 fraction of requesters visited  state block
//   8 fraction of table entries satisfied
//   9 tour distance / (diagonal * requesters)
//  10 elapsed time / max deadline
//  11 insertion regret vs the action set: for the candidate's open
//     subregions, the cost of the dearest cheapest-alternative minus its
//     own delta, over the diagonal (0 when encoded without siblings)
inline constexpr int kFeatureCount = 12;

// Shared per-instance view used by encoding, training and rollout.
struct RlContext {
    const NetworkInstance* inst = nullptr;
    const ReachabilityGraph* rg = nullptr;
    ActiveCoverage active;
    double diagonal = 1.0;
    double max_deadline = 1.0;

    static RlContext build(const NetworkInstance& inst, const RequirementTable& table,
                           const CoverageSignatureMap& sig, const ReachabilityGraph& rg);
};

// Ordered partial solution starting at v0, with cached evaluation.
struct PartialTour {
    std::vector<int> order;
    ChargeState state;
    double distance = 0.0;
    double last_charge_time = 0.0;

    explicit PartialTour(const RlContext& ctx);
    void insert(const RlContext& ctx, int sensor_id, std::size_t position);
    bool visited(int sensor_id) const;
};

// Candidate action set: unvisited requesters with at least one
// reachability edge from the tour's vertices (v0 included), restricted to
// those that still decrement the requirement table.
std::vector<int> action_set(const RlContext& ctx, const PartialTour& tour);

std::vector<double> encode(const RlContext& ctx, const PartialTour& tour, int candidate);
std::vector<double> encode(const RlContext& ctx, const PartialTour& tour, int candidate,
                           const std::optional<Insertion>& insertion);

struct Transition {
    std::vector<double> features;  // state-action encoding
    double reward = 0.0;           // meters, -(distance delta)
    bool terminal = false;
    bool dead_end = false;  // successor unsatisfied with no feasible action
    bool masked = false;    // -inf reward branch, excluded from batches
    std::vector<std::vector<double>> next_actions;  // encodings of feasible next actions
};

// One-step target: rewards regress in diagonal units so network outputs
// stay near unity at any field scale. Terminal transitions take the reward
// alone; dead ends bootstrap kDeadEndValue.
double q_target(const MlpNetwork& net, const Transition& t, double gamma, double distance_scale);

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return ring_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return ring_[i]; }

    // Uniform sample of distinct unmasked transitions, at most batch.
    template <typename Rng>
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;  // eviction cursor once full
    std::vector<Transition> ring_;
};

struct QPolicy {
    MlpNetwork net;
    RlHyperparams hp;
    bool no_action_available = false;  // isolated depot: nothing was learnable
};

struct TrainStats {
    std::vector<double> episode_mean_loss;  // squared-loss mean per episode
    std::size_t transitions = 0;
    int episodes_satisfied = 0;  // training episodes that restored coverage
};

// One-step Q-learning with experience replay, per-instance (online)
// training. Deterministic under hp.seed.
QPolicy train(const NetworkInstance& inst, const RequirementTable& table,
              const CoverageSignatureMap& sig, const ReachabilityGraph& rg,
              const RlHyperparams& hp, TrainStats* stats = nullptr);

// Greedy rollout: argmax-Q over feasible insertions until the table is
// satisfied, or nullopt when the episode dead-ends.
std::optional<Solution> rollout(const QPolicy& policy, const NetworkInstance& inst,
                                const RequirementTable& table, const CoverageSignatureMap& sig,
                                const ReachabilityGraph& rg);

void save_policy(const QPolicy& policy, const std::string& path);
MlpNetwork load_policy_network(const std::string& path);

template <typename Rng>
std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
    std::vector<const Transition*> out;
    if (ring_.empty()) return out;
    std::vector<std::uint32_t> eligible;
    eligible.reserve(ring_.size());
    for (std::size_t i = 0; i < ring_.size(); ++i)
        if (!ring_[i].masked) eligible.push_back(static_cast<std::uint32_t>(i));
    if (eligible.empty()) return out;

    const std::size_t want = std::min(batch, eligible.size());
    for (std::size_t taken = 0; taken < want; ++taken) {
        std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1 - taken);
        const std::size_t j = pick(rng);
        out.push_back(&ring_[eligible[j]]);
        std::swap(eligible[j], eligible[eligible.size() - 1 - taken]);
    }
    return out;
}

}  // namespace kcharge
