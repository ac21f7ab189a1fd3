#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kcharge/baselines.hpp"
#include "kcharge/dp_solver.hpp"
#include "kcharge/instance.hpp"
#include "kcharge/rl_solver.hpp"

namespace kcharge {

struct RunBudgets {
    std::size_t dp_label_cap = 5'000'000;
    double dp_time_s = 0.0;  // 0 = unlimited
    int oracle_max_requesters = 10;
};

struct ExperimentConfig {
    std::vector<std::string> algorithms;  // dp, dqn, acs, greedy, random, exact
    std::vector<int> k_values{2};
    std::vector<int> n_values{64};
    std::vector<double> alpha_values{0.45};
    int seeds_per_cell = 20;
    std::uint64_t seed_base = 1;
    GenerationParams gen;       // n/k/alpha overridden per cell
    double grid_spacing = 5.0;  // coverage analysis resolution
    RunBudgets budgets;
    RlHyperparams rl;
    AcsParams acs;
    int random_restarts = 100;
    bool measure_time = true;  // false pins compute_time_s to 0 for byte-stable output
    int jobs = 1;
};

struct ResultRecord {
    std::string algorithm;
    int k = 0;
    int n = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    bool feasible = false;
    std::optional<double> travel_distance_m;
    std::optional<double> travel_energy_kj;
    double compute_time_s = 0.0;
    int nodes_charged = 0;
    std::string status;  // ok | none-found | budget-exceeded
};

// Generates the seeded instance, runs one solver under its budgets, times
// it (train + rollout inclusive for dqn), and validates any returned
// solution. A solution failing validation is a solver bug and throws.
ResultRecord run_cell(const ExperimentConfig& cfg, const std::string& algorithm, int k, int n,
                      double alpha, std::uint64_t seed);

// Full sweep, one record per cell x seed, in deterministic order.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg);

extern const char* const kResultCsvHeader;

void write_results_csv(const std::vector<ResultRecord>& records, std::ostream& out);

struct CellSummary {
    std::string algorithm;
    int k = 0;
    int n = 0;
    double alpha = 0.0;
    int runs = 0;
    int feasible_count = 0;
    int budget_exceeded_count = 0;
    std::optional<double> median_energy_kj;  // over records with status ok
    double median_time_s = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records);
void write_summary_csv(const std::vector<CellSummary>& cells, std::ostream& out);

double median(std::vector<double> values);

}  // namespace kcharge
