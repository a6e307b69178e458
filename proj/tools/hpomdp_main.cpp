// Command-line front end: validate knowledge documents, build and persist a
// hierarchy bundle, execute goal requests against the simulated world, and
// drive the benchmark experiment table.
//
// Exit codes: 0 ok, 1 validation failure, 2 I/O failure, 3 runtime failure.

#include <chrono>
#include <deque>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hpomdp/bundle.hpp"
#include "hpomdp/experiment.hpp"
#include "hpomdp/methods.hpp"
#include "hpomdp/textio.hpp"

namespace {

using namespace hpomdp;

constexpr int kOk = 0, kValidation = 1, kIo = 2, kRuntime = 3;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    try {
        return read_file(path);
    } catch (const TextError& e) {
        throw IoError(e.what());
    }
}

KnowledgeBase parse_documents(const std::string& general_text, const std::string& specific_text) {
    const GeneralKb g = parse_general(general_text);
    const SpecificKb s = parse_specific(specific_text, g);
    return link_kb(g, s);
}

// Hop distance in the ground transition graph (self-loops ignored): on the
// benchmark worlds this is exactly the open-edge grid distance, and it stays
// meaningful for hand-written knowledge bases.
int ground_distance(const Pomdp& p, int from, int to) {
    if (from == to) return 0;
    std::vector<int> dist(static_cast<std::size_t>(p.num_states()), -1);
    std::deque<int> queue{from};
    dist[static_cast<std::size_t>(from)] = 0;
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        for (int a = 0; a < p.num_actions(); ++a)
            for (const auto& [s2, q] : p.T(s, a))
                if (q > 0.0 && s2 != s && dist[static_cast<std::size_t>(s2)] < 0) {
                    dist[static_cast<std::size_t>(s2)] = dist[static_cast<std::size_t>(s)] + 1;
                    if (s2 == to) return dist[static_cast<std::size_t>(s2)];
                    queue.push_back(s2);
                }
    }
    return -1;
}

struct CommonOpts {
    std::uint64_t seed = 1;
    int jobs = 1;
    int runs = 233;
    int sims = 100;
    std::string general, specific, bundle, goal, start, out;
    std::string belief = "known-start";
    double sigma = 0.0;       // 0 = no filter / default per command
    std::string dims;         // "S,R,B"
    bool uniform = false;
    int set = 0;              // experiment: 0 = all sets
};

bool parse_dims(const std::string& text, int out[3]) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',' || c == 'x') c = ' ';
    std::istringstream in(cleaned);
    return static_cast<bool>(in >> out[0] >> out[1] >> out[2]);
}

int cmd_validate(const CommonOpts& o) {
    const std::string general_text = read_input(o.general);
    const std::string specific_text = read_input(o.specific);
    KnowledgeBase kb;
    try {
        kb = parse_documents(general_text, specific_text);
    } catch (const KbError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kValidation;
    }
    const ValidationReport report = validate(kb);
    if (!report.ok()) {
        std::cerr << report.to_string();
        return kValidation;
    }
    std::cout << "ok: " << kb.g.vars.size() << " variable(s), " << kb.s.hpairs.size()
              << " hierarchy pair(s)\n";
    return kOk;
}

int cmd_init(const CommonOpts& o, const SolverParams& solver) {
    const std::string general_text = read_input(o.general);
    const std::string specific_text = read_input(o.specific);
    KnowledgeBase kb;
    try {
        kb = parse_documents(general_text, specific_text);
        const ValidationReport report = validate(kb);
        if (!report.ok()) {
            std::cerr << report.to_string();
            return kValidation;
        }
    } catch (const KbError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kValidation;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const BottomPomdp bp = build_bottom(kb);
    const Sst sst = build_sst(kb, bp);
    const NeighborIndex ni = lift_neighbors(sst, neighbor_pairs_bottom(kb, bp));
    HierarchyParams hpar;
    hpar.sim_count = o.sims;
    hpar.solver = solver;
    hpar.seed = o.seed;
    hpar.jobs = o.jobs;
    Bundle b;
    b.general_text = general_text;
    b.specific_text = specific_text;
    b.hier = build_hierarchy(bp, sst, ni, hpar);
    const double init_seconds = seconds_since(t0);

    save_bundle(o.out, b);
    std::size_t n_actions = 0;
    for (const auto& lvl : b.hier.levels) n_actions += lvl.actions.size();
    std::cout << "init seconds: " << init_seconds << "\n";
    std::cout << "levels: " << b.hier.levels.size() << " abstract actions: " << n_actions << "\n";
    std::cout << "bundle: " << o.out << "\n";
    return kOk;
}

int cmd_solve(const CommonOpts& o) {
    const Bundle b = load_bundle(o.bundle);
    const KnowledgeBase kb = parse_documents(b.general_text, b.specific_text);
    const BottomPomdp bp = build_bottom(kb);
    const Sst sst = build_sst(kb, bp);
    const NeighborIndex ni = lift_neighbors(sst, neighbor_pairs_bottom(kb, bp));

    const int goal_state = bp.find_state(o.goal);
    if (goal_state < 0) {
        for (const auto& node : sst.nodes)
            if (node.hvalue == o.goal && node.leaf_state < 0) {
                std::cerr << "goal is not a leaf state: " << o.goal << "\n";
                return kValidation;
            }
        std::cerr << "unknown goal identifier: " << o.goal << "\n";
        return kValidation;
    }

    int start_state;
    if (!o.start.empty()) {
        start_state = bp.find_state(o.start);
        if (start_state < 0) {
            std::cerr << "unknown start identifier: " << o.start << "\n";
            return kValidation;
        }
    } else {
        Rng rng(derive_seed(o.seed, "start"));
        start_state = static_cast<int>(draw_unit(rng) * bp.pomdp.num_states()) %
                      bp.pomdp.num_states();
    }
    const bool uniform = o.uniform || o.belief == "uniform";

    const Belief b0 = uniform ? uniform_belief(bp.pomdp.num_states())
                              : delta_belief(bp.pomdp.num_states(), start_state);
    const GlobalBelief gb0 = make_global_belief(sst, b0);
    const auto t_plan = std::chrono::steady_clock::now();
    const HierarchicalPolicy hp =
        build_hierarchical_policy(bp, sst, ni, b.hier, goal_state, gb0, b.hier.params.solver,
                                  derive_seed(o.seed, "hp-plan"));
    const double plan_seconds = seconds_since(t_plan);

    SimEnv env(bp.pomdp, start_state, derive_seed(o.seed, "env"));
    ExecutionContext ctx;
    ctx.sst = &sst;
    ctx.bottom = &bp.pomdp;
    ctx.hier = &b.hier;
    ctx.env = &env;
    ctx.gb = gb0;
    ctx.params.max_concrete = 50L * bp.pomdp.num_states();
    const auto t_exec = std::chrono::steady_clock::now();
    const HierarchicalRunResult res = execute_hierarchical_policy(ctx, hp);
    const double exec_seconds = seconds_since(t_exec);

    const bool success = res.completed && !res.budget_exhausted && !res.oscillated &&
                         env.true_state() == goal_state;
    std::ostringstream report;
    report << "task\tseed\tsuccess\tconcrete_actions\tplan_seconds\texec_seconds\tfinal_to_goal\n";
    report << bp.pomdp.states.at(static_cast<std::size_t>(start_state)) << ">" << o.goal << "\t"
           << o.seed << "\t" << (success ? 1 : 0) << "\t" << res.concrete_actions << "\t"
           << fmt_double(plan_seconds) << "\t" << fmt_double(exec_seconds) << "\t"
           << ground_distance(bp.pomdp, env.true_state(), goal_state) << "\n";
    if (o.out.empty())
        std::cout << report.str();
    else
        write_file(o.out, report.str());
    return kOk;
}

int cmd_experiment(const CommonOpts& o, const SolverParams& solver) {
    std::vector<ExperimentConfig> table;
    for (const auto& cfg : benchmark_configs()) {
        if (o.set != 0 && cfg.set != o.set) continue;
        if (o.sigma > 0.0 && std::abs(cfg.env.kernel_sigma - o.sigma) > 1e-9) continue;
        if (!o.dims.empty()) {
            int d[3];
            if (!parse_dims(o.dims, d)) {
                std::cerr << "cannot parse --dims " << o.dims << "\n";
                return kValidation;
            }
            if (cfg.env.section_dim != d[0] || cfg.env.room_dim != d[1] ||
                cfg.env.building_dim != d[2])
                continue;
        }
        table.push_back(cfg);
    }
    if (table.empty()) {
        std::cerr << "no configurations match the filters\n";
        return kValidation;
    }
    ExperimentParams params;
    params.runs = o.runs;
    params.master_seed = o.seed;
    params.jobs = o.jobs;
    params.solver = solver;
    params.sim_count = o.sims;
    params.out_dir = o.out;
    run_experiment(table, params, &std::cout);
    if (!o.out.empty()) std::cout << "tables: " << o.out << "/runs.tsv " << o.out << "/summary.tsv\n";
    return kOk;
}

int cmd_gen_env(const CommonOpts& o) {
    EnvConfig cfg;
    if (!o.dims.empty()) {
        int d[3];
        if (!parse_dims(o.dims, d)) {
            std::cerr << "cannot parse --dims " << o.dims << "\n";
            return kValidation;
        }
        cfg.section_dim = d[0];
        cfg.room_dim = d[1];
        cfg.building_dim = d[2];
    }
    if (o.sigma > 0.0) cfg.kernel_sigma = o.sigma;
    if (o.uniform) cfg.initial_belief_mode = BeliefMode::uniform;
    cfg.seed = o.seed;
    const GeneratedEnv env = generate_environment(cfg);
    std::filesystem::create_directories(o.out);
    write_file(o.out + "/general.kb", env.general_text);
    write_file(o.out + "/specific.kb", env.specific_text);
    std::cout << "world: " << env.world.width << "x" << env.world.height << " cells, "
              << env.world.num_rooms() << " rooms, " << env.world.num_buildings << " buildings\n";
    std::cout << "documents: " << o.out << "/general.kb " << o.out << "/specific.kb\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical task planning over grounded POMDPs"};
    app.require_subcommand(1);
    CommonOpts o;
    SolverParams solver;

    auto add_kb = [&](CLI::App* c) {
        c->add_option("--general", o.general, "general knowledge document")->required();
        c->add_option("--specific", o.specific, "specific knowledge document")->required();
    };
    auto add_solver = [&](CLI::App* c) {
        c->add_option("--points", solver.belief_points, "belief point cap");
        c->add_option("--expansions", solver.expansions, "belief expansion rounds");
        c->add_option("--sweeps", solver.backup_sweeps, "backup sweep budget");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a knowledge document pair");
    add_kb(validate_cmd);

    CLI::App* init_cmd = app.add_subcommand("init", "ground, build and persist the hierarchy");
    add_kb(init_cmd);
    init_cmd->add_option("--out", o.out, "bundle output path")->required();
    init_cmd->add_option("--seed", o.seed, "master seed");
    init_cmd->add_option("--jobs", o.jobs, "worker threads");
    init_cmd->add_option("--sims", o.sims, "outcome-row simulations per abstract action");
    add_solver(init_cmd);

    CLI::App* solve_cmd = app.add_subcommand("solve", "plan and execute one goal request");
    solve_cmd->add_option("--bundle", o.bundle, "hierarchy bundle path")->required();
    solve_cmd->add_option("--goal", o.goal, "goal state identifier")->required();
    solve_cmd->add_option("--start", o.start, "true start state (default: seeded random)");
    solve_cmd->add_option("--belief", o.belief, "initial belief: known-start | uniform");
    solve_cmd->add_flag("--uniform", o.uniform, "shorthand for --belief uniform");
    solve_cmd->add_option("--seed", o.seed, "run seed");
    solve_cmd->add_option("--out", o.out, "report output path (default: stdout)");

    CLI::App* exp_cmd = app.add_subcommand("experiment", "run the benchmark table");
    exp_cmd->add_option("--out", o.out, "results directory");
    exp_cmd->add_option("--runs", o.runs, "runs per configuration");
    exp_cmd->add_option("--seed", o.seed, "master seed");
    exp_cmd->add_option("--jobs", o.jobs, "worker threads");
    exp_cmd->add_option("--sims", o.sims, "outcome-row simulations per abstract action");
    exp_cmd->add_option("--set", o.set, "restrict to one experiment set (1-3)");
    exp_cmd->add_option("--sigma", o.sigma, "restrict to one kernel sigma");
    exp_cmd->add_option("--dims", o.dims, "restrict to one dimension triple, e.g. 3,2,2");
    add_solver(exp_cmd);

    CLI::App* gen_cmd = app.add_subcommand("gen-env", "emit a benchmark environment's documents");
    gen_cmd->add_option("--out", o.out, "output directory")->required();
    gen_cmd->add_option("--dims", o.dims, "dimension triple, e.g. 2,2,2");
    gen_cmd->add_option("--sigma", o.sigma, "observation kernel sigma");
    gen_cmd->add_option("--seed", o.seed, "environment seed");
    gen_cmd->add_flag("--uniform", o.uniform, "mark the uniform initial-belief variant");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(o);
        if (init_cmd->parsed()) return cmd_init(o, solver);
        if (solve_cmd->parsed()) return cmd_solve(o);
        if (exp_cmd->parsed()) return cmd_experiment(o, solver);
        if (gen_cmd->parsed()) return cmd_gen_env(o);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const KbError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const TextError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
