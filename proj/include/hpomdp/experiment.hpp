#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpomdp/methods.hpp"

namespace hpomdp {

struct ExperimentConfig {
    std::string id;  // stable row label, e.g. "set1-sigma0.4"
    int set = 1;
    EnvConfig env;  // env.seed is overridden per master seed; see run_config
    std::vector<std::string> methods;
};

// The published comparison table: a known-start sigma sweep, a uniform-belief
// sigma sweep (no TLP: it needs the start building), and a known-start size
// sweep (no FP: flat planning is already saturated at the base size).
std::vector<ExperimentConfig> benchmark_configs();

struct ExperimentParams {
    int runs = 233;
    std::uint64_t master_seed = 1;
    int jobs = 1;
    SolverParams solver;
    int sim_count = 100;  // outcome-row simulations per abstract action
    std::string out_dir;  // when nonempty, runs.tsv and summary.tsv land here
};

struct ExperimentRow {
    std::string config_id;
    int run = 0;
    std::uint64_t seed = 0;
    RunRecord rec;
};

struct MethodSummary {
    std::string config_id;
    std::string method;
    int runs = 0;
    int successes = 0;
    int errors = 0;
    double success_ratio = 0.0;
    double cost_mean = 0.0, cost_std = 0.0;  // actions / SP(start,goal), successful runs
    double err_mean = 0.0, err_std = 0.0;    // SP(final,goal) / SP(start,goal), all runs
    double plan_mean = 0.0, plan_std = 0.0;  // per-task planning seconds
    double init_seconds = 0.0;               // amortized setup phase
};

struct ConfigResult {
    ExperimentConfig config;
    std::vector<ExperimentRow> rows;  // method-major, run order within a method
    std::vector<MethodSummary> summaries;
};

// Task pairs for one environment: one cell drawn from each building, a coin
// flip deciding which one is the start. Identical for every method by
// construction and a pure function of (master_seed, config id, runs).
std::vector<Task> sample_tasks(const NavInstance& inst, int runs, std::uint64_t master_seed,
                               const std::string& config_id);

// Grounds the environment (geometry seeded by master seed and dimensions, so
// sigma and belief-mode rows over the same dims share a world), initializes
// each listed method once, then executes every (method, task) pair. Per-run
// failures become error rows; the batch never aborts.
ConfigResult run_config(const ExperimentConfig& cfg, const ExperimentParams& params);

std::vector<ConfigResult> run_experiment(const std::vector<ExperimentConfig>& table,
                                         const ExperimentParams& params, std::ostream* log);

MethodSummary summarize(const std::string& config_id, const std::string& method,
                        const std::vector<ExperimentRow>& rows, double init_seconds);

// Delimited-text renderings; every double is bit-exact round-trippable.
std::string rows_tsv(const std::vector<ConfigResult>& results);
std::string summary_tsv(const std::vector<ConfigResult>& results);

// Drops wall-clock columns (plan_seconds, init_seconds) from a rows table so
// reruns can be compared byte for byte.
std::string strip_timing_columns(const std::string& tsv);

}  // namespace hpomdp
