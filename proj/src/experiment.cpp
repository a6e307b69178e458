#include "hpomdp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "hpomdp/rng.hpp"
#include "hpomdp/textio.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hpomdp {

namespace {

std::string sigma_label(int tenths) {
    return "sigma" + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

void mean_std(const std::vector<double>& xs, double& mean, double& std_out) {
    mean = 0.0;
    std_out = 0.0;
    if (xs.empty()) return;
    double sum = 0.0, sq = 0.0;
    for (double x : xs) {
        sum += x;
        sq += x * x;
    }
    mean = sum / static_cast<double>(xs.size());
    const double var = sq / static_cast<double>(xs.size()) - mean * mean;
    std_out = var > 0.0 ? std::sqrt(var) : 0.0;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return s;
}

}  // namespace

std::vector<ExperimentConfig> benchmark_configs() {
    std::vector<ExperimentConfig> table;
    for (int t = 2; t <= 10; ++t) {
        ExperimentConfig c;
        c.id = "set1-" + sigma_label(t);
        c.set = 1;
        c.env.kernel_sigma = static_cast<double>(t) / 10.0;
        c.methods = {"FP", "TLP", "HP"};
        table.push_back(c);
    }
    for (int t = 2; t <= 10; ++t) {
        ExperimentConfig c;
        c.id = "set2-" + sigma_label(t);
        c.set = 2;
        c.env.kernel_sigma = static_cast<double>(t) / 10.0;
        c.env.initial_belief_mode = BeliefMode::uniform;
        c.methods = {"FP", "HP"};
        table.push_back(c);
    }
    const int dims[4][3] = {{2, 2, 2}, {3, 2, 2}, {3, 3, 2}, {3, 3, 3}};
    for (const auto& d : dims) {
        ExperimentConfig c;
        c.id = "set3-dims" + std::to_string(d[0]) + std::to_string(d[1]) + std::to_string(d[2]);
        c.set = 3;
        c.env.section_dim = d[0];
        c.env.room_dim = d[1];
        c.env.building_dim = d[2];
        c.env.kernel_sigma = 0.2;
        c.methods = {"TLP", "HP"};
        table.push_back(c);
    }
    return table;
}

std::vector<Task> sample_tasks(const NavInstance& inst, int runs, std::uint64_t master_seed,
                               const std::string& config_id) {
    Rng rng(derive_seed(master_seed, "task:" + config_id));
    const std::vector<int> a = inst.world.cells_of_building(0);
    const std::vector<int> b = inst.world.cells_of_building(inst.world.num_buildings - 1);
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) {
        Task t;
        do {
            const int ca = a[static_cast<std::size_t>(draw_unit(rng) * static_cast<double>(a.size())) %
                            a.size()];
            const int cb = b[static_cast<std::size_t>(draw_unit(rng) * static_cast<double>(b.size())) %
                            b.size()];
            const bool flip = draw_unit(rng) < 0.5;
            t.start_cell = flip ? ca : cb;
            t.goal_cell = flip ? cb : ca;
        } while (t.start_cell == t.goal_cell);
        tasks.push_back(t);
    }
    return tasks;
}

MethodSummary summarize(const std::string& config_id, const std::string& method,
                        const std::vector<ExperimentRow>& rows, double init_seconds) {
    MethodSummary s;
    s.config_id = config_id;
    s.method = method;
    s.init_seconds = init_seconds;
    std::vector<double> costs, errs, plans;
    for (const auto& row : rows) {
        if (row.rec.method != method) continue;
        ++s.runs;
        if (!row.rec.error.empty()) ++s.errors;
        plans.push_back(row.rec.plan_seconds);
        if (row.rec.success) ++s.successes;
        if (row.rec.sp_start_goal > 0) {
            if (row.rec.success)
                costs.push_back(static_cast<double>(row.rec.concrete_actions) /
                                static_cast<double>(row.rec.sp_start_goal));
            errs.push_back(static_cast<double>(row.rec.sp_final_goal) /
                           static_cast<double>(row.rec.sp_start_goal));
        }
    }
    if (s.runs > 0) s.success_ratio = static_cast<double>(s.successes) / static_cast<double>(s.runs);
    mean_std(costs, s.cost_mean, s.cost_std);
    mean_std(errs, s.err_mean, s.err_std);
    mean_std(plans, s.plan_mean, s.plan_std);
    return s;
}

ConfigResult run_config(const ExperimentConfig& cfg, const ExperimentParams& params) {
    ConfigResult result;
    result.config = cfg;
    result.config.env.seed =
        derive_seed(params.master_seed, "env", static_cast<std::uint64_t>(cfg.env.section_dim),
                    static_cast<std::uint64_t>(cfg.env.room_dim),
                    static_cast<std::uint64_t>(cfg.env.building_dim * 100 + cfg.env.num_buildings));
    const NavInstance inst = ground_environment(result.config.env);
    const std::vector<Task> tasks = sample_tasks(inst, params.runs, params.master_seed, cfg.id);

    bool wants_hp = false, wants_tlp = false;
    for (const auto& m : cfg.methods) {
        wants_hp = wants_hp || m == "HP";
        wants_tlp = wants_tlp || m == "TLP";
    }
    HpInit hp;
    if (wants_hp) {
        HierarchyParams hpar;
        hpar.sim_count = params.sim_count;
        hpar.solver = params.solver;
        hpar.seed = derive_seed(params.master_seed, "hier:" + cfg.id);
        hpar.jobs = params.jobs;
        hp = hp_init(inst, hpar);
    }
    TlpInit tlp;
    if (wants_tlp)
        tlp = tlp_init(inst, params.solver, derive_seed(params.master_seed, "tlp:" + cfg.id));

    for (const auto& method : cfg.methods) {
        std::vector<ExperimentRow> slot(static_cast<std::size_t>(params.runs));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(params.jobs) if (params.jobs > 1)
#endif
        for (int r = 0; r < params.runs; ++r) {
            ExperimentRow row;
            row.config_id = cfg.id;
            row.run = r;
            row.seed = derive_seed(params.master_seed, "run:" + cfg.id + ":" + method,
                                   static_cast<std::uint64_t>(r));
            const Task& task = tasks[static_cast<std::size_t>(r)];
            try {
                if (method == "FP")
                    row.rec = run_fp(inst, task, params.solver, row.seed);
                else if (method == "TLP")
                    row.rec = run_tlp(inst, tlp, task, params.solver, row.seed);
                else if (method == "HP")
                    row.rec = run_hp(inst, hp, task, params.solver, row.seed);
                else
                    throw MethodError("unknown method " + method);
            } catch (const std::exception& e) {
                RunRecord rec;
                rec.method = method;
                rec.start_cell = task.start_cell;
                rec.goal_cell = task.goal_cell;
                rec.sp_start_goal = shortest_path(inst.world, task.start_cell, task.goal_cell);
                rec.sp_final_goal = rec.sp_start_goal;  // no progress on a failed run
                rec.error = e.what();
                row.rec = rec;
            }
            slot[static_cast<std::size_t>(r)] = std::move(row);
        }
        for (auto& row : slot) result.rows.push_back(std::move(row));
        double init_seconds = 0.0;
        if (method == "HP") init_seconds = hp.init_seconds;
        if (method == "TLP") init_seconds = tlp.init_seconds;
        result.summaries.push_back(summarize(cfg.id, method, result.rows, init_seconds));
    }
    return result;
}

std::vector<ConfigResult> run_experiment(const std::vector<ExperimentConfig>& table,
                                         const ExperimentParams& params, std::ostream* log) {
    std::vector<ConfigResult> results;
    for (const auto& cfg : table) {
        if (log) *log << "config " << cfg.id << ": " << params.runs << " runs\n" << std::flush;
        results.push_back(run_config(cfg, params));
        if (log)
            for (const auto& s : results.back().summaries)
                *log << "  " << s.method << " success " << s.success_ratio << " cost " << s.cost_mean
                     << " err " << s.err_mean << " plan " << s.plan_mean << "s init "
                     << s.init_seconds << "s\n"
                     << std::flush;
    }
    if (!params.out_dir.empty()) {
        std::filesystem::create_directories(params.out_dir);
        write_file(params.out_dir + "/runs.tsv", rows_tsv(results));
        write_file(params.out_dir + "/summary.tsv", summary_tsv(results));
    }
    return results;
}

std::string rows_tsv(const std::vector<ConfigResult>& results) {
    std::ostringstream out;
    out << "config\tmethod\trun\tseed\tstart_cell\tgoal_cell\tfinal_cell\tsuccess"
        << "\tconcrete_actions\tsp_start_goal\tsp_final_goal\tplan_seconds\tinit_seconds\terror\n";
    for (const auto& res : results)
        for (const auto& row : res.rows) {
            const RunRecord& r = row.rec;
            out << row.config_id << "\t" << r.method << "\t" << row.run << "\t" << row.seed << "\t"
                << r.start_cell << "\t" << r.goal_cell << "\t" << r.final_cell << "\t"
                << (r.success ? 1 : 0) << "\t" << r.concrete_actions << "\t" << r.sp_start_goal
                << "\t" << r.sp_final_goal << "\t" << fmt_double(r.plan_seconds) << "\t"
                << fmt_double(r.init_seconds) << "\t" << sanitize(r.error) << "\n";
        }
    return out.str();
}

std::string summary_tsv(const std::vector<ConfigResult>& results) {
    std::ostringstream out;
    out << "config\tmethod\truns\tsuccesses\terrors\tsuccess_ratio\tcost_mean\tcost_std"
        << "\terr_mean\terr_std\tplan_mean\tplan_std\tinit_seconds\n";
    for (const auto& res : results)
        for (const auto& s : res.summaries)
            out << s.config_id << "\t" << s.method << "\t" << s.runs << "\t" << s.successes << "\t"
                << s.errors << "\t" << fmt_double(s.success_ratio) << "\t" << fmt_double(s.cost_mean)
                << "\t" << fmt_double(s.cost_std) << "\t" << fmt_double(s.err_mean) << "\t"
                << fmt_double(s.err_std) << "\t" << fmt_double(s.plan_mean) << "\t"
                << fmt_double(s.plan_std) << "\t" << fmt_double(s.init_seconds) << "\n";
    return out.str();
}

std::string strip_timing_columns(const std::string& tsv) {
    std::istringstream in(tsv);
    std::ostringstream out;
    std::string line;
    std::vector<std::size_t> drop;
    bool header = true;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t tab = line.find('\t', pos);
            fields.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (header) {
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (fields[i] == "plan_seconds" || fields[i] == "init_seconds" ||
                    fields[i] == "plan_mean" || fields[i] == "plan_std")
                    drop.push_back(i);
            header = false;
        }
        bool first = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (std::find(drop.begin(), drop.end(), i) != drop.end()) continue;
            if (!first) out << "\t";
            out << fields[i];
            first = false;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace hpomdp
