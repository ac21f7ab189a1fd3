#include "kcharge/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "kcharge/errors.hpp"
#include "kcharge/kinematics.hpp"
#include "kcharge/oracle.hpp"

namespace kcharge {

namespace {

std::optional<Solution> dispatch(const ExperimentConfig& cfg, const std::string& algorithm,
                                 const NetworkInstance& inst, const RequirementTable& table,
                                 const CoverageSignatureMap& sig, std::uint64_t seed) {
    if (algorithm == "dp") {
        const TimeExpandedGraph g = build_time_expanded(inst);
        DpOptions opts;
        opts.label_cap = cfg.budgets.dp_label_cap;
        opts.time_budget_s = cfg.budgets.dp_time_s;
        return solve_dp(g, table, sig, inst, opts);
    }
    const ReachabilityGraph rg = build_reachability(inst);
    if (algorithm == "dqn") {
        RlHyperparams hp = cfg.rl;
        hp.seed = seed;
        const QPolicy policy = train(inst, table, sig, rg, hp);
        return rollout(policy, inst, table, sig, rg);
    }
    if (algorithm == "acs") {
        AcsParams p = cfg.acs;
        p.seed = seed;
        return solve_acs(inst, table, sig, rg, p);
    }
    if (algorithm == "greedy") return solve_greedy(inst, table, sig, rg);
    if (algorithm == "random") return solve_random(inst, table, sig, rg, seed, cfg.random_restarts);
    if (algorithm == "exact") {
        OracleBudget budget;
        budget.max_requesters = cfg.budgets.oracle_max_requesters;
        return solve_exact(inst, table, sig, budget);
    }
    throw InvariantError("unknown algorithm '" + algorithm + "'");
}

}  // namespace

ResultRecord run_cell(const ExperimentConfig& cfg, const std::string& algorithm, int k, int n,
                      double alpha, std::uint64_t seed) {
    ResultRecord rec;
    rec.algorithm = algorithm;
    rec.k = k;
    rec.n = n;
    rec.alpha = alpha;
    rec.seed = seed;

    const auto started = std::chrono::steady_clock::now();
    auto stop_clock = [&] {
        if (!cfg.measure_time) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    try {
        GenerationParams gen = cfg.gen;
        gen.n = n;
        gen.params.coverage_k = k;
        gen.params.alpha = alpha;
        const NetworkInstance inst = generate_instance(gen, seed);
        const CoverageSignatureMap sig = compute_signatures(inst, cfg.grid_spacing);
        const RequirementTable table =
            build_requirement_table(sig, inst.requests, inst.params.coverage_k);

        const std::optional<Solution> sol = dispatch(cfg, algorithm, inst, table, sig, seed);
        rec.compute_time_s = stop_clock();
        if (!sol) {
            rec.status = "none-found";
            return rec;
        }
        // Any returned solution must re-validate; a failure here is a
        // solver bug, not a benchmark outcome.
        if (!validate_solution(*sol, inst, cfg.grid_spacing))
            throw InvariantError("solver " + algorithm + " returned an invalid solution (seed " +
                                 std::to_string(seed) + ")");
        rec.feasible = true;
        rec.status = "ok";
        rec.travel_distance_m = sol->travel_distance;
        rec.travel_energy_kj = sol->travel_energy / 1000.0;
        rec.nodes_charged = static_cast<int>(sol->order.size());
        return rec;
    } catch (const BudgetError&) {
        rec.compute_time_s = stop_clock();
        rec.status = "budget-exceeded";
        return rec;
    }
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg) {
    if (cfg.algorithms.empty()) throw InvariantError("algorithm list is empty");
    if (cfg.k_values.empty() || cfg.n_values.empty() || cfg.alpha_values.empty())
        throw InvariantError("sweep ranges must be nonempty");
    if (cfg.seeds_per_cell < 1) throw InvariantError("seeds_per_cell must be >= 1");

    struct Task {
        std::string algorithm;
        int k;
        int n;
        double alpha;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const std::string& alg : cfg.algorithms)
        for (int k : cfg.k_values)
            for (int n : cfg.n_values)
                for (double alpha : cfg.alpha_values)
                    for (int s = 0; s < cfg.seeds_per_cell; ++s)
                        tasks.push_back({alg, k, n, alpha, cfg.seed_base + static_cast<std::uint64_t>(s)});

    std::vector<ResultRecord> records(tasks.size());
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const Task& t = tasks[i];
            records[i] = run_cell(cfg, t.algorithm, t.k, t.n, t.alpha, t.seed);
        }
        return records;
    }

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            const Task& t = tasks[i];
            try {
                records[i] = run_cell(cfg, t.algorithm, t.k, t.n, t.alpha, t.seed);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure.empty()) failure = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (failed.load()) throw InvariantError("sweep failed: " + failure);
    return records;
}

const char* const kResultCsvHeader =
    "algorithm,k,n,alpha,seed,feasible,travel_distance_m,travel_energy_kj,compute_time_s,"
    "nodes_charged,status";

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_alpha(double v) {
    std::string s = fmt(v, "%.4f");
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace

void write_results_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
    out << kResultCsvHeader << '\n';
    for (const ResultRecord& r : records) {
        out << r.algorithm << ',' << r.k << ',' << r.n << ',' << fmt_alpha(r.alpha) << ','
            << r.seed << ',' << (r.feasible ? "true" : "false") << ','
            << (r.travel_distance_m ? fmt(*r.travel_distance_m) : "") << ','
            << (r.travel_energy_kj ? fmt(*r.travel_energy_kj) : "") << ','
            << fmt(r.compute_time_s) << ',' << r.nodes_charged << ',' << r.status << '\n';
    }
}

double median(std::vector<double> values) {
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records) {
    struct Key {
        std::string algorithm;
        int k;
        int n;
        double alpha;
        bool operator<(const Key& o) const {
            return std::tie(algorithm, k, n, alpha) < std::tie(o.algorithm, o.k, o.n, o.alpha);
        }
    };
    std::map<Key, std::vector<const ResultRecord*>> cells;
    for (const ResultRecord& r : records)
        cells[{r.algorithm, r.k, r.n, r.alpha}].push_back(&r);

    std::vector<CellSummary> out;
    for (const auto& [key, rows] : cells) {
        CellSummary c;
        c.algorithm = key.algorithm;
        c.k = key.k;
        c.n = key.n;
        c.alpha = key.alpha;
        c.runs = static_cast<int>(rows.size());
        std::vector<double> energies;
        std::vector<double> times;
        for (const ResultRecord* r : rows) {
            times.push_back(r->compute_time_s);
            if (r->status == "ok") {
                ++c.feasible_count;
                energies.push_back(*r->travel_energy_kj);
            } else if (r->status == "budget-exceeded") {
                ++c.budget_exceeded_count;
            }
        }
        if (!energies.empty()) c.median_energy_kj = median(energies);
        c.median_time_s = median(times);
        out.push_back(std::move(c));
    }
    return out;
}

void write_summary_csv(const std::vector<CellSummary>& cells, std::ostream& out) {
    out << "algorithm,k,n,alpha,runs,feasible,budget_exceeded,median_energy_kj,median_time_s\n";
    for (const CellSummary& c : cells) {
        out << c.algorithm << ',' << c.k << ',' << c.n << ',' << fmt_alpha(c.alpha) << ','
            << c.runs << ',' << c.feasible_count << ',' << c.budget_exceeded_count << ','
            << (c.median_energy_kj ? fmt(*c.median_energy_kj) : "") << ','
            << fmt(c.median_time_s) << '\n';
    }
}

}  // namespace kcharge
