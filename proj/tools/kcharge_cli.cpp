// Command-line front end: instance generation, single solves, parameter
// sweeps, and solution verification.

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "kcharge/bench.hpp"
#include "kcharge/errors.hpp"
#include "kcharge/graphs.hpp"
#include "kcharge/kinematics.hpp"
#include "kcharge/oracle.hpp"
#include "kcharge/solution.hpp"

namespace {

using namespace kcharge;

void add_gen_overrides(CLI::App* cmd, GenerationParams& gen) {
    cmd->add_option("--area-width", gen.params.area_width, "Field width, m");
    cmd->add_option("--area-height", gen.params.area_height, "Field height, m");
    cmd->add_option("--sensing-range", gen.params.sensing_range, "Sensing disk radius, m");
    cmd->add_option("--speed", gen.params.charger_speed, "Charger speed, m/s");
    cmd->add_option("--move-cost", gen.params.move_cost, "Travel cost, J/m");
    cmd->add_option("--battery", gen.params.battery_capacity, "Battery capacity, J");
    cmd->add_option("--transfer-rate", gen.params.transfer_rate, "Charging rate, W");
    cmd->add_option("--time-step", gen.params.time_step, "Time discretization step, s");
    cmd->add_flag("--include-return,!--no-include-return", gen.params.include_return,
                  "Close tours at the depot (default on)");
    cmd->add_option("--depot-x", gen.params.depot.x, "Depot x, m (default area center)");
    cmd->add_option("--depot-y", gen.params.depot.y, "Depot y, m (default area center)");
    cmd->add_option("--beta-min", gen.beta_min, "Consumption rate lower bound, W");
    cmd->add_option("--beta-max", gen.beta_max, "Consumption rate upper bound, W");
    cmd->add_option("--gen-retries", gen.max_retries, "Coverage resampling bound");
}

int cmd_gen(const GenerationParams& gen, std::uint64_t seed, const std::string& out) {
    NetworkInstance inst = generate_instance(gen, seed);
    if (out.empty() || out == "-") {
        std::cout << instance_to_json(inst);
    } else {
        save_instance(inst, out);
        std::cout << "wrote " << out << " (" << inst.sensors.size() << " sensors, "
                  << inst.requests.size() << " requests)\n";
    }
    return 0;
}

struct SolveArgs {
    std::string instance_path;
    std::string algorithm = "dp";
    std::uint64_t seed = 0;
    double grid_spacing = 5.0;
    std::string out;
    std::string trace_path;   // acs convergence csv
    std::string policy_path;  // dqn parameter dump
    std::string dump_graph;   // edge list
    std::string graph_kind = "time-expanded";
    RunBudgets budgets;
    RlHyperparams rl;
    AcsParams acs;
    int random_restarts = 100;
    bool filter_off = false;
};

int cmd_solve(SolveArgs& a) {
    const NetworkInstance inst = load_instance(a.instance_path);
    const CoverageSignatureMap sig = compute_signatures(inst, a.grid_spacing);
    const RequirementTable table =
        build_requirement_table(sig, inst.requests, inst.params.coverage_k);

    if (!a.dump_graph.empty()) {
        std::ofstream out(a.dump_graph);
        if (!out) throw IoError("cannot open " + a.dump_graph + " for writing");
        if (a.graph_kind == "reachability") {
            const ReachabilityGraph rg = build_reachability(inst);
            for (std::size_t i = 0; i < rg.node_ids.size(); ++i)
                for (int j : rg.out[i]) {
                    const Point pi = i == 0 ? inst.params.depot
                                            : inst.sensor(rg.node_ids[i]).position;
                    const Point pj = j == 0 ? inst.params.depot
                                            : inst.sensor(rg.node_ids[j]).position;
                    out << "v" << rg.node_ids[i] << " v" << rg.node_ids[j] << ' '
                        << distance(pi, pj) << '\n';
                }
        } else {
            const TimeExpandedGraph g = build_time_expanded(inst);
            auto name = [&](int v) {
                std::ostringstream s;
                if (v == 0) s << "v0";
                else s << 'v' << g.vertices[v].sensor_id << '@' << g.vertices[v].bucket;
                return s.str();
            };
            for (std::size_t v = 0; v < g.vertices.size(); ++v)
                for (const TeEdge& e : g.adj[v])
                    out << name(static_cast<int>(v)) << ' ' << name(e.to) << ' ' << e.weight
                        << '\n';
        }
        std::cout << "wrote " << a.dump_graph << '\n';
    }

    const auto started = std::chrono::steady_clock::now();
    std::optional<Solution> sol;
    DpStats dp_stats;
    if (a.algorithm == "dp") {
        const TimeExpandedGraph g = build_time_expanded(inst);
        DpOptions opts;
        opts.label_cap = a.budgets.dp_label_cap;
        opts.time_budget_s = a.budgets.dp_time_s;
        opts.contribution_filter = !a.filter_off;
        sol = solve_dp(g, table, sig, inst, opts, &dp_stats);
        std::cerr << "dp labels stored: " << dp_stats.labels_stored
                  << ", relaxations: " << dp_stats.relaxations << '\n';
    } else if (a.algorithm == "dqn") {
        const ReachabilityGraph rg = build_reachability(inst);
        RlHyperparams hp = a.rl;
        hp.seed = a.seed;
        const QPolicy policy = train(inst, table, sig, rg, hp);
        if (!a.policy_path.empty()) save_policy(policy, a.policy_path);
        sol = rollout(policy, inst, table, sig, rg);
    } else if (a.algorithm == "acs") {
        const ReachabilityGraph rg = build_reachability(inst);
        AcsParams p = a.acs;
        p.seed = a.seed;
        std::vector<AcsTracePoint> trace;
        sol = solve_acs(inst, table, sig, rg, p, a.trace_path.empty() ? nullptr : &trace);
        if (!a.trace_path.empty()) {
            std::ofstream out(a.trace_path);
            out << "iteration,best_distance_m\n";
            for (const AcsTracePoint& t : trace)
                out << t.iteration << ','
                    << (is_infeasible(t.best_distance) ? "" : std::to_string(t.best_distance))
                    << '\n';
        }
    } else if (a.algorithm == "greedy") {
        const ReachabilityGraph rg = build_reachability(inst);
        sol = solve_greedy(inst, table, sig, rg);
    } else if (a.algorithm == "random") {
        const ReachabilityGraph rg = build_reachability(inst);
        sol = solve_random(inst, table, sig, rg, a.seed, a.random_restarts);
    } else if (a.algorithm == "exact") {
        OracleBudget budget;
        budget.max_requesters = a.budgets.oracle_max_requesters;
        sol = solve_exact(inst, table, sig, budget);
    } else {
        throw InvariantError("unknown algorithm '" + a.algorithm + "'");
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (!sol) {
        std::cerr << "no feasible tour found (" << elapsed << " s)\n";
        return 2;
    }
    if (!validate_solution(*sol, inst, a.grid_spacing))
        throw InvariantError("solver returned an invalid solution");
    const std::string doc = solution_to_json(*sol);
    if (a.out.empty() || a.out == "-") {
        std::cout << doc;
    } else {
        std::ofstream out(a.out);
        if (!out) throw IoError("cannot open " + a.out + " for writing");
        out << doc;
    }
    std::cerr << a.algorithm << ": distance " << sol->travel_distance << " m, energy "
              << sol->travel_energy / 1000.0 << " kJ, " << sol->order.size() << " nodes, "
              << elapsed << " s\n";
    return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               double grid_spacing) {
    const NetworkInstance inst = load_instance(instance_path);
    const Solution sol = load_solution(solution_path);

    const PathEvaluation eval = evaluate_path(sol.order, inst);
    bool ok = true;
    if (!eval.feasible) {
        std::cout << "FAIL: deadline violated at sensor "
                  << (eval.violated_at ? std::to_string(*eval.violated_at) : "?") << '\n';
        ok = false;
    }
    if (std::abs(eval.travel_distance - sol.travel_distance) > 1e-6) {
        std::cout << "FAIL: stored distance " << sol.travel_distance << " != recomputed "
                  << eval.travel_distance << '\n';
        ok = false;
    }
    const std::set<int> charged(sol.order.begin(), sol.order.end());
    if (!verify_k_coverage(inst, charged, grid_spacing)) {
        std::cout << "FAIL: k-coverage not restored\n";
        ok = false;
    }
    if (ok) {
        std::cout << "OK: feasible, distance " << eval.travel_distance << " m, k-coverage holds\n";
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobile charger scheduling under k-coverage: solvers and benchmarks"};
    app.require_subcommand(1);

    // gen
    GenerationParams gen;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a seeded random instance");
    gen_cmd->add_option("--n", gen.n, "Number of sensors")->required();
    gen_cmd->add_option("--k", gen.params.coverage_k, "Coverage requirement");
    gen_cmd->add_option("--alpha", gen.params.alpha, "Remaining-energy threshold");
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--grid-spacing", gen.coverage_grid_spacing,
                        "Grid spacing of the coverage check, m");
    gen_cmd->add_option("--out,-o", gen_out, "Output path (default stdout)");
    add_gen_overrides(gen_cmd, gen);

    // solve
    SolveArgs solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance");
    solve_cmd->add_option("--instance,-i", solve.instance_path, "Instance file")->required();
    solve_cmd->add_option("--algorithm,-a", solve.algorithm, "dp|dqn|acs|greedy|random|exact");
    solve_cmd->add_option("--seed", solve.seed, "Solver seed (dqn, acs, random)");
    solve_cmd->add_option("--grid-spacing", solve.grid_spacing, "Coverage grid spacing, m");
    solve_cmd->add_option("--out,-o", solve.out, "Solution JSON path (default stdout)");
    solve_cmd->add_option("--label-cap", solve.budgets.dp_label_cap, "DP label cap");
    solve_cmd->add_option("--dp-time-budget", solve.budgets.dp_time_s, "DP wall budget, s");
    solve_cmd->add_flag("--no-contribution-filter", solve.filter_off,
                        "Disable the DP table-decrease propagation filter");
    solve_cmd->add_option("--oracle-max-requesters", solve.budgets.oracle_max_requesters,
                          "Exact-solver size cap");
    solve_cmd->add_option("--episodes", solve.rl.episodes, "DQN episodes");
    solve_cmd->add_option("--gamma", solve.rl.gamma, "DQN discount");
    solve_cmd->add_option("--epsilon-start", solve.rl.epsilon_start, "DQN initial epsilon");
    solve_cmd->add_option("--epsilon-end", solve.rl.epsilon_end, "DQN final epsilon");
    solve_cmd->add_option("--batch-size", solve.rl.batch_size, "DQN replay batch");
    solve_cmd->add_option("--learning-rate", solve.rl.learning_rate, "DQN SGD step");
    solve_cmd->add_option("--replay-capacity", solve.rl.replay_capacity, "DQN replay capacity");
    solve_cmd->add_option("--hidden", solve.rl.hidden, "DQN hidden layer widths");
    solve_cmd->add_option("--dump-policy", solve.policy_path, "Write trained DQN parameters");
    solve_cmd->add_option("--agents", solve.acs.agents, "ACS agents per iteration");
    solve_cmd->add_option("--iterations", solve.acs.iterations, "ACS iterations");
    solve_cmd->add_option("--theta", solve.acs.global_decay, "ACS global decay");
    solve_cmd->add_option("--local-decay", solve.acs.local_decay, "ACS local decay");
    solve_cmd->add_option("--q0", solve.acs.exploit_prob, "ACS exploitation probability");
    solve_cmd->add_option("--tau0", solve.acs.initial_pheromone, "ACS initial pheromone");
    solve_cmd->add_option("--trace", solve.trace_path, "ACS convergence CSV");
    solve_cmd->add_option("--restarts", solve.random_restarts, "Random-algorithm restarts");
    solve_cmd->add_option("--dump-graph", solve.dump_graph, "Write edge list `src dst weight_m`");
    solve_cmd->add_option("--graph", solve.graph_kind, "time-expanded|reachability (for --dump-graph)");

    // bench
    ExperimentConfig cfg;
    std::string bench_out = "results.csv";
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a parameter sweep");
    bench_cmd->add_option("--algorithms,-a", cfg.algorithms, "Algorithms to run")->required()->delimiter(',');
    bench_cmd->add_option("--k", cfg.k_values, "Coverage requirements")->delimiter(',');
    bench_cmd->add_option("--n", cfg.n_values, "Network sizes")->delimiter(',');
    bench_cmd->add_option("--alpha", cfg.alpha_values, "Energy thresholds")->delimiter(',');
    bench_cmd->add_option("--seeds", cfg.seeds_per_cell, "Seeds per cell");
    bench_cmd->add_option("--seed-base", cfg.seed_base, "First seed");
    bench_cmd->add_option("--grid-spacing", cfg.grid_spacing, "Coverage grid spacing, m");
    bench_cmd->add_option("--label-cap", cfg.budgets.dp_label_cap, "DP label cap");
    bench_cmd->add_option("--dp-time-budget", cfg.budgets.dp_time_s, "DP wall budget, s");
    bench_cmd->add_option("--episodes", cfg.rl.episodes, "DQN episodes");
    bench_cmd->add_option("--restarts", cfg.random_restarts, "Random-algorithm restarts");
    bench_cmd->add_option("--jobs,-j", cfg.jobs, "Parallel cells");
    bench_cmd->add_flag("--no-timing", [&cfg](std::int64_t) { cfg.measure_time = false; },
                        "Pin compute_time_s to 0 for byte-stable output");
    bench_cmd->add_option("--out,-o", bench_out, "Results CSV path");
    add_gen_overrides(bench_cmd, cfg.gen);

    // verify
    std::string verify_instance, verify_solution;
    double verify_spacing = 5.0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Re-validate a solution file");
    verify_cmd->add_option("--instance,-i", verify_instance, "Instance file")->required();
    verify_cmd->add_option("--solution,-s", verify_solution, "Solution file")->required();
    verify_cmd->add_option("--grid-spacing", verify_spacing, "Coverage grid spacing, m");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen, gen_seed, gen_out);
        if (solve_cmd->parsed()) return cmd_solve(solve);
        if (bench_cmd->parsed()) {
            const std::vector<ResultRecord> records = run_sweep(cfg);
            {
                std::ofstream out(bench_out);
                if (!out) throw IoError("cannot open " + bench_out + " for writing");
                write_results_csv(records, out);
            }
            const std::string summary_path = bench_out + ".summary.csv";
            {
                std::ofstream out(summary_path);
                write_summary_csv(summarize(records), out);
            }
            std::cout << "wrote " << records.size() << " records to " << bench_out
                      << " and medians to " << summary_path << '\n';
            return 0;
        }
        if (verify_cmd->parsed()) return cmd_verify(verify_instance, verify_solution, verify_spacing);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
