// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Budgets and tolerances are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "kcharge/baselines.hpp"
#include "kcharge/bench.hpp"
#include "kcharge/dp_solver.hpp"
#include "kcharge/errors.hpp"
#include "kcharge/kinematics.hpp"
#include "kcharge/oracle.hpp"
#include "kcharge/rl_solver.hpp"

using namespace kcharge;
namespace th = kcharge::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Criterion 3 bookkeeping: every solver-returned solution in this suite
// goes through here.
int g_solutions_checked = 0;
int g_validation_failures = 0;

void check_solution(const std::optional<Solution>& sol, const NetworkInstance& inst) {
    if (!sol) return;
    ++g_solutions_checked;
    if (!validate_solution(*sol, inst, 5.0)) ++g_validation_failures;
}

struct Prepared {
    NetworkInstance inst;
    CoverageSignatureMap sig;
    RequirementTable table;
};

Prepared prepare(NetworkInstance inst, double spacing = 5.0) {
    Prepared p{std::move(inst), {}, {}};
    p.sig = compute_signatures(p.inst, spacing);
    p.table = build_requirement_table(p.sig, p.inst.requests, p.inst.params.coverage_k);
    return p;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// --- Criterion 1: DP distance equals the exhaustive optimum, exactly. ----

Outcome criterion_oracle_equivalence() {
    const auto start = Clock::now();
    const int kInstances = 50;
    const int n_cycle[] = {12, 14, 16};
    const int k_cycle[] = {1, 2, 2};

    int used = 0, nonempty = 0, mismatches = 0;
    std::uint64_t seed = 1000;
    while (used < kInstances) {
        ++seed;
        GenerationParams gen = th::small_gen(n_cycle[used % 3], k_cycle[used % 3], 0.42);
        gen.params.time_step = 2.0;
        NetworkInstance inst;
        try {
            inst = generate_instance(gen, seed);
        } catch (const BudgetError&) {
            continue;
        }
        if (inst.requests.size() > 8) continue;
        Prepared p = prepare(std::move(inst));

        const TimeExpandedGraph g = build_time_expanded(p.inst);
        const auto dp = solve_dp(g, p.table, p.sig, p.inst);
        const auto oracle = solve_exact(p.inst, p.table, p.sig, {}, TimeModel::grid);
        check_solution(dp, p.inst);
        check_solution(oracle, p.inst);

        if (dp.has_value() != oracle.has_value()) {
            ++mismatches;
        } else if (dp && oracle) {
            if (!dp->order.empty()) ++nonempty;
            if (dp->travel_distance != oracle->travel_distance) ++mismatches;
        }
        ++used;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << used << " instances (" << nonempty << " with nonempty optima), " << mismatches
           << " mismatches, " << elapsed << " s";
    return {mismatches == 0 && elapsed < 60.0 && nonempty >= 10, detail.str()};
}

// --- Criterion 2: the time-expanded graph is a DAG, executably. ----------

Outcome criterion_dag() {
    const auto start = Clock::now();
    int built = 0, cycles = 0;
    std::uint64_t seed = 9000;
    while (built < 100) {
        ++seed;
        GenerationParams gen = th::small_gen(12 + static_cast<int>(seed % 9), 1 + static_cast<int>(seed % 2), 0.45);
        gen.params.time_step = 2.0;
        NetworkInstance inst;
        try {
            inst = generate_instance(gen, seed);
        } catch (const BudgetError&) {
            continue;
        }
        const TimeExpandedGraph g = build_time_expanded(inst);
        try {
            const auto order = topological_order(g);
            if (order.size() != g.vertices.size()) ++cycles;
        } catch (const InvariantError&) {
            ++cycles;
        }
        ++built;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << built << " graphs, " << cycles << " cycle errors, " << elapsed << " s";
    return {cycles == 0 && elapsed < 30.0, detail.str()};
}

// --- Criterion 4: the hand-evaluated charging-time recurrence. -----------

Outcome criterion_advance_unit() {
    SimParams p;  // stock physics: B = 10.8 kJ, r_c = 20 W, s = 5 m/s
    const SensorNode from = th::sensor(1, 0, 0, 5450, 0.5);  // 5400 J at t = 100
    const SensorNode ok = th::sensor(2, 200, 0, 250, 0.5);   // D = 500 s
    const SensorNode late = th::sensor(2, 200, 0, 200, 0.5); // D = 400 s
    const double arrival = advance(100.0, from, ok, p);
    const bool exact = arrival == 410.0;
    const bool rejected = is_infeasible(advance(100.0, from, late, p));
    std::ostringstream detail;
    detail << "advance = " << arrival << " (want exactly 410), tighter deadline infeasible: "
           << (rejected ? "yes" : "no");
    return {exact && rejected, detail.str()};
}

// --- Criterion 5: DQN within 5% of DP, and at most Greedy. ----------------

Outcome criterion_dqn_quality() {
    const auto start = Clock::now();
    const int kInstances = 30;
    const int n_cycle[] = {24, 26, 28};

    int used = 0;
    int within5 = 0;
    int both_feasible = 0, beats_greedy = 0;
    int dqn_found = 0;
    std::uint64_t seed = 40000;
    while (used < kInstances && seconds_since(start) < 1500.0) {
        ++seed;
        GenerationParams gen;
        gen.n = n_cycle[used % 3];
        gen.params = th::small_params(350, 350, 135, 2, 0.45);
        gen.params.time_step = 2.0;
        NetworkInstance inst;
        try {
            inst = generate_instance(gen, seed);
        } catch (const BudgetError&) {
            continue;
        }
        if (inst.requests.size() > 12) continue;
        Prepared p = prepare(std::move(inst));
        if (p.table.all_zero()) continue;  // want instances with real tours

        std::optional<Solution> dp;
        try {
            const TimeExpandedGraph g = build_time_expanded(p.inst);
            DpOptions opts;
            opts.time_budget_s = 30.0;
            dp = solve_dp(g, p.table, p.sig, p.inst, opts);
        } catch (const BudgetError&) {
            continue;  // criterion restricts to instances where DP completes
        }
        if (!dp) continue;
        check_solution(dp, p.inst);

        const ReachabilityGraph rg = build_reachability(p.inst);
        RlHyperparams hp;
        hp.episodes = 2000;
        hp.seed = seed;
        const QPolicy policy = train(p.inst, p.table, p.sig, rg, hp);
        const auto dqn = rollout(policy, p.inst, p.table, p.sig, rg);
        check_solution(dqn, p.inst);
        const auto greedy = solve_greedy(p.inst, p.table, p.sig, rg);
        check_solution(greedy, p.inst);

        ++used;
        if (dqn) {
            ++dqn_found;
            if (dqn->travel_distance <= 1.05 * dp->travel_distance) ++within5;
            if (greedy) {
                ++both_feasible;
                if (dqn->travel_distance <= greedy->travel_distance + 1e-9) ++beats_greedy;
            }
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << used << " instances, within 5% of DP on " << within5 << " (need >= "
           << static_cast<int>(std::ceil(0.8 * used)) << "), <= greedy on " << beats_greedy << "/"
           << both_feasible << ", dqn feasible " << dqn_found << ", " << elapsed << " s";
    const bool pass = used == kInstances && within5 >= static_cast<int>(std::ceil(0.8 * used)) &&
                      (both_feasible == 0 || beats_greedy * 10 >= both_feasible * 9) &&
                      elapsed <= 1800.0;
    return {pass, detail.str()};
}

// --- Criterion 6: toy-instance optimality with a recorded seed. -----------

Outcome criterion_dqn_toy() {
    Prepared p = prepare(th::toy5_instance());
    const ReachabilityGraph rg = build_reachability(p.inst);
    const auto oracle = solve_exact(p.inst, p.table, p.sig);
    check_solution(oracle, p.inst);
    if (!oracle) return {false, "oracle found no tour on the toy instance"};

    RlHyperparams hp;
    hp.episodes = 500;
    hp.seed = 0;  // recorded seed
    const QPolicy policy = train(p.inst, p.table, p.sig, rg, hp);
    const auto sol = rollout(policy, p.inst, p.table, p.sig, rg);
    check_solution(sol, p.inst);
    std::ostringstream detail;
    if (!sol) {
        detail << "rollout found nothing, oracle " << oracle->travel_distance << " m";
        return {false, detail.str()};
    }
    detail << "rollout " << sol->travel_distance << " m vs oracle " << oracle->travel_distance
           << " m (seed 0)";
    return {sol->travel_distance == oracle->travel_distance, detail.str()};
}

// --- Criterion 7: gradient check against central differences. -------------

Outcome criterion_gradient_check() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int in = 4 + static_cast<int>(rng() % 5);
        const int h1 = 6 + static_cast<int>(rng() % 8);
        const int h2 = 4 + static_cast<int>(rng() % 6);
        MlpNetwork net({in, h1, h2, 1}, rng());
        std::vector<double> x(static_cast<std::size_t>(in));
        for (double& v : x) v = ux(rng);
        const double target = ux(rng);

        std::vector<double> grad(net.parameter_count(), 0.0);
        net.accumulate_gradient(x, target, grad);
        for (std::size_t i = 0; i < net.parameter_count(); ++i) {
            const double theta = net.parameters()[i];
            const double h = 1e-5 * (1.0 + std::abs(theta));
            net.parameters()[i] = theta + h;
            const double up = net.forward(x);
            net.parameters()[i] = theta - h;
            const double dn = net.forward(x);
            net.parameters()[i] = theta;
            const double numeric =
                ((target - up) * (target - up) - (target - dn) * (target - dn)) / (2.0 * h);
            const double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
            worst = std::max(worst, std::abs(numeric - grad[i]) / denom);
        }
    }
    std::ostringstream detail;
    detail << "10 networks, worst relative error " << worst << " (limit 1e-4)";
    return {worst < 1e-4, detail.str()};
}

// --- Criterion 8: ACS update arithmetic and monotone convergence. ---------

Outcome criterion_acs() {
    const double tau = pheromone_update(1.0, 0.1, true, 500.0);
    const bool arithmetic = std::abs(tau - 0.9002) <= 1e-12 &&
                            std::abs(pheromone_update(1.0, 0.1, false, 500.0) - 0.9) <= 1e-12;

    int traced = 0, violations = 0;
    std::uint64_t seed = 60000;
    AcsParams params;
    params.agents = 8;
    params.iterations = 30;
    while (traced < 20) {
        ++seed;
        GenerationParams gen = th::small_gen(14 + static_cast<int>(seed % 5), 2, 0.5);
        NetworkInstance inst;
        try {
            inst = generate_instance(gen, seed);
        } catch (const BudgetError&) {
            continue;
        }
        Prepared p = prepare(std::move(inst));
        const ReachabilityGraph rg = build_reachability(p.inst);
        params.seed = seed;
        std::vector<AcsTracePoint> trace;
        const auto sol = solve_acs(p.inst, p.table, p.sig, rg, params, &trace);
        check_solution(sol, p.inst);
        for (std::size_t i = 1; i < trace.size(); ++i)
            if (trace[i].best_distance > trace[i - 1].best_distance) ++violations;
        ++traced;
    }
    std::ostringstream detail;
    detail << "tau = " << tau << " (want 0.9002), " << traced
           << " seeded traces, monotonicity violations: " << violations;
    return {arithmetic && violations == 0, detail.str()};
}

// --- Criterion 9: table trends at production scale. -----------------------

struct CellStat {
    int ok = 0;
    int budget = 0;
    int runs = 0;
    // Median over every seed of the cell, an unsolved run costing +inf: a
    // tour that cannot restore coverage is unboundedly expensive.
    double trend_median = std::numeric_limits<double>::quiet_NaN();
    double ok_median = std::numeric_limits<double>::quiet_NaN();
};

CellStat cell_stat(const std::vector<ResultRecord>& records, const std::string& alg, int k, int n,
                   double alpha) {
    CellStat s;
    std::vector<double> costs;
    std::vector<double> energies;
    for (const ResultRecord& r : records) {
        if (r.algorithm != alg || r.k != k || r.n != n || std::abs(r.alpha - alpha) > 1e-12)
            continue;
        ++s.runs;
        if (r.status == "ok") {
            ++s.ok;
            costs.push_back(*r.travel_energy_kj);
            energies.push_back(*r.travel_energy_kj);
        } else {
            if (r.status == "budget-exceeded") ++s.budget;
            costs.push_back(std::numeric_limits<double>::infinity());
        }
    }
    if (!costs.empty()) s.trend_median = median(costs);
    if (!energies.empty()) s.ok_median = median(energies);
    return s;
}

bool monotone_chain(const std::vector<CellStat>& chain, std::string& why) {
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const double prev = chain[i - 1].trend_median;
        const double cur = chain[i].trend_median;
        if (std::isinf(prev) && std::isinf(cur)) continue;
        if (!(cur >= prev - 1e-9)) {
            why = "trend median fell from " + std::to_string(prev) + " to " +
                  std::to_string(cur);
            return false;
        }
    }
    return true;
}

Outcome criterion_trends() {
    const auto start = Clock::now();
    ExperimentConfig cfg;
    cfg.algorithms = {"dp", "dqn", "greedy"};
    cfg.seeds_per_cell = 20;
    cfg.seed_base = 1;
    cfg.gen.max_retries = 2000;  // do not let rare resampling misses poison cells
    cfg.budgets.dp_label_cap = 8'000'000;
    cfg.budgets.dp_time_s = 60.0;
    cfg.rl.episodes = 400;
    cfg.jobs = 1;

    // Coverage-requirement sweep at the stock scale.
    cfg.k_values = {2, 3, 4};
    cfg.n_values = {64};
    cfg.alpha_values = {0.45};
    const auto k_records = run_sweep(cfg);

    // Threshold sweep, second table shape.
    cfg.k_values = {2};
    cfg.n_values = {32};
    cfg.alpha_values = {0.2, 0.45, 0.6};
    const auto a_records = run_sweep(cfg);

    for (const auto& records : {k_records, a_records})
        for (const ResultRecord& r : records)
            if (r.feasible) ++g_solutions_checked;  // validated inside run_cell

    std::ostringstream detail;
    bool pass = true;
    std::string why;

    // DQN: no budget mechanism may fire, and trend medians rise with k and
    // alpha (unsolved seeds cost +inf, so thinning hard cells cannot make
    // them look cheaper).
    std::vector<CellStat> dqn_k{cell_stat(k_records, "dqn", 2, 64, 0.45),
                                cell_stat(k_records, "dqn", 3, 64, 0.45),
                                cell_stat(k_records, "dqn", 4, 64, 0.45)};
    std::vector<CellStat> dqn_a{cell_stat(a_records, "dqn", 2, 32, 0.2),
                                cell_stat(a_records, "dqn", 2, 32, 0.45),
                                cell_stat(a_records, "dqn", 2, 32, 0.6)};
    for (const auto& chain : {dqn_k, dqn_a})
        for (const CellStat& c : chain)
            if (c.budget != 0) {
                pass = false;
                detail << "[dqn hit a budget] ";
            }
    if (!monotone_chain(dqn_k, why)) {
        pass = false;
        detail << "[dqn k-chain: " << why << "] ";
    }
    if (!monotone_chain(dqn_a, why)) {
        pass = false;
        detail << "[dqn alpha-chain: " << why << "] ";
    }
    if (dqn_k[0].ok < 15 || dqn_a[0].ok < 15) {
        pass = false;
        detail << "[dqn under-populated at the easy end] ";
    }

    // Greedy trend medians follow the same directions.
    std::vector<CellStat> greedy_k{cell_stat(k_records, "greedy", 2, 64, 0.45),
                                   cell_stat(k_records, "greedy", 3, 64, 0.45),
                                   cell_stat(k_records, "greedy", 4, 64, 0.45)};
    if (!monotone_chain(greedy_k, why)) {
        pass = false;
        detail << "[greedy k-chain: " << why << "] ";
    }

    // DP budget exhaustion concentrates at the hard end and only there;
    // with 20 seeds per cell the easy end may sample a rare tail blowup.
    const CellStat dp_k2 = cell_stat(k_records, "dp", 2, 64, 0.45);
    const CellStat dp_k3 = cell_stat(k_records, "dp", 3, 64, 0.45);
    const CellStat dp_k4 = cell_stat(k_records, "dp", 4, 64, 0.45);
    const CellStat dp_a02 = cell_stat(a_records, "dp", 2, 32, 0.2);
    const CellStat dp_a045 = cell_stat(a_records, "dp", 2, 32, 0.45);
    const CellStat dp_a06 = cell_stat(a_records, "dp", 2, 32, 0.6);
    auto exhaustion_pattern = [&](const CellStat& easy, const CellStat& mid,
                                  const CellStat& hard, const char* name) {
        if (easy.budget > 2 || hard.budget < 10 || easy.budget > mid.budget ||
            mid.budget > hard.budget) {
            pass = false;
            detail << "[dp exhaustion not concentrated at the hard " << name << " end: "
                   << easy.budget << "->" << mid.budget << "->" << hard.budget << "] ";
        }
    };
    exhaustion_pattern(dp_k2, dp_k3, dp_k4, "k");
    exhaustion_pattern(dp_a02, dp_a045, dp_a06, "alpha");

    // Per-cell DQN vs Greedy medians where both are populated on at least
    // half the seeds.
    for (int k : {2, 3, 4}) {
        const CellStat d = cell_stat(k_records, "dqn", k, 64, 0.45);
        const CellStat g = cell_stat(k_records, "greedy", k, 64, 0.45);
        if (d.ok >= 10 && g.ok >= 10 && !(d.ok_median <= g.ok_median + 1e-9)) {
            pass = false;
            detail << "[dqn median above greedy at k=" << k << "] ";
        }
    }

    const double elapsed = seconds_since(start);
    if (elapsed > 7200.0) pass = false;
    auto put_chain = [&detail](const char* name, const std::vector<CellStat>& chain) {
        detail << name << " {";
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (i) detail << ", ";
            detail << chain[i].trend_median << " (" << chain[i].ok << "/" << chain[i].runs
                   << " ok)";
        }
        detail << "} ";
    };
    put_chain("dqn k-trend", dqn_k);
    put_chain("alpha-trend", dqn_a);
    detail << "dp budget k={" << dp_k2.budget << "," << dp_k3.budget << "," << dp_k4.budget
           << "} alpha={" << dp_a02.budget << "," << dp_a045.budget << "," << dp_a06.budget
           << "}, " << elapsed << " s";
    return {pass, detail.str()};
}

// --- Criterion 10: bit-identical reruns for every solver. -----------------

Outcome criterion_determinism() {
    // A fixed instance small enough for the exact solver.
    NetworkInstance inst;
    std::uint64_t seed = 90000;
    for (;; ++seed) {
        GenerationParams gen;
        gen.n = 24;
        gen.params = th::small_params(250, 250, 135, 2, 0.45);
        try {
            inst = generate_instance(gen, seed);
        } catch (const BudgetError&) {
            continue;
        }
        if (inst.requests.size() >= 4 && inst.requests.size() <= 9) break;
    }
    Prepared p = prepare(std::move(inst));
    const ReachabilityGraph rg = build_reachability(p.inst);
    const TimeExpandedGraph g = build_time_expanded(p.inst);

    auto to_bytes = [](const std::optional<Solution>& sol) {
        return sol ? solution_to_json(*sol) : std::string("none");
    };

    std::vector<std::pair<std::string, std::string>> mismatched;
    auto compare = [&](const std::string& name, auto&& runner) {
        const auto a = runner();
        const auto b = runner();
        check_solution(a, p.inst);
        if (to_bytes(a) != to_bytes(b)) mismatched.emplace_back(name, "differs");
    };

    compare("dp", [&] { return solve_dp(g, p.table, p.sig, p.inst); });
    compare("exact", [&] { return solve_exact(p.inst, p.table, p.sig); });
    compare("greedy", [&] { return solve_greedy(p.inst, p.table, p.sig, rg); });
    compare("random", [&] { return solve_random(p.inst, p.table, p.sig, rg, 5, 50); });
    compare("acs", [&] {
        AcsParams params;
        params.agents = 10;
        params.iterations = 40;
        params.seed = 5;
        return solve_acs(p.inst, p.table, p.sig, rg, params);
    });
    compare("dqn", [&] {
        RlHyperparams hp;
        hp.episodes = 120;
        hp.seed = 5;
        const QPolicy policy = train(p.inst, p.table, p.sig, rg, hp);
        return rollout(policy, p.inst, p.table, p.sig, rg);
    });

    std::ostringstream detail;
    detail << "6 solvers, " << (p.inst.requests.size()) << " requesters";
    for (const auto& [name, what] : mismatched) detail << " [" << name << ' ' << what << ']';
    return {mismatched.empty(), detail.str()};
}

Outcome criterion_validator_totals() {
    std::ostringstream detail;
    detail << g_solutions_checked << " solutions validated, " << g_validation_failures
           << " failures";
    return {g_validation_failures == 0 && g_solutions_checked > 100, detail.str()};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    // Criterion 3 is evaluated last: it aggregates validations from all runs.
    const Entry entries[] = {
        {1, "oracle equivalence (dp == exact, time-grid)", criterion_oracle_equivalence},
        {2, "time-expanded DAG theorem", criterion_dag},
        {4, "charging-time recurrence unit vector", criterion_advance_unit},
        {5, "dqn quality vs dp and greedy", criterion_dqn_quality},
        {6, "dqn toy-instance optimality", criterion_dqn_toy},
        {7, "gradient check vs finite differences", criterion_gradient_check},
        {8, "acs update arithmetic and convergence", criterion_acs},
        {9, "table trend reproduction", criterion_trends},
        {10, "solver determinism", criterion_determinism},
        {3, "feasibility validator totals", criterion_validator_totals},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        Outcome outcome;
        try {
            outcome = e.fn();
        } catch (const std::exception& ex) {
            outcome = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("[%s] criterion %d: %s — %s\n", outcome.pass ? "PASS" : "FAIL", e.id, e.name,
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
