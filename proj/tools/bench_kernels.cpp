// Times the two parallel kernels against their serial reference paths and
// checks the results are identical: point backups inside the solver, and the
// per-action solve loop inside hierarchy construction. Both are required to
// produce the same bytes at any worker count, so the serial path doubles as
// the correctness oracle for the parallel one.
#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "hpomdp/bundle.hpp"
#include "hpomdp/grounding.hpp"
#include "hpomdp/hierarchy.hpp"
#include "hpomdp/methods.hpp"
#include "hpomdp/pbvi.hpp"

using namespace hpomdp;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool same_policy(const Policy& a, const Policy& b) {
    if (a.alphas.size() != b.alphas.size()) return false;
    for (std::size_t i = 0; i < a.alphas.size(); ++i) {
        if (a.alphas[i].action != b.alphas[i].action) return false;
        if (a.alphas[i].v != b.alphas[i].v) return false;
    }
    return true;
}

std::string hierarchy_bytes(const Hierarchy& h) {
    Bundle b;
    b.hier = h;
    b.hier.params.jobs = 0;  // worker count is bookkeeping, not solved content
    std::ostringstream out;
    write_bundle(out, b);
    return out.str();
}

struct Row {
    std::string name;
    double serial = 0.0;
    double parallel = 0.0;
    bool identical = false;
};

void print_table(const std::vector<Row>& rows, int jobs) {
    std::printf("%-18s %12s %12s %9s %6s\n", "kernel", "serial_s", "parallel_s", "speedup",
                "match");
    for (const Row& r : rows) {
        std::printf("%-18s %12.3f %12.3f %8.2fx %6s\n", r.name.c_str(), r.serial, r.parallel,
                    r.parallel > 0 ? r.serial / r.parallel : 0.0, r.identical ? "yes" : "NO");
    }
    std::printf("(parallel = %d jobs)\n", jobs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernel benchmark"};
    int jobs = 4;
    std::uint64_t seed = 1;
    bool quick = false;
    app.add_option("--jobs", jobs, "worker threads for the parallel runs");
    app.add_option("--seed", seed, "master seed");
    app.add_flag("--quick", quick, "reduced workload for smoke testing");
    CLI11_PARSE(app, argc, argv);
    if (jobs < 2) jobs = 2;

#ifdef _OPENMP
    std::printf("openmp: enabled (max %d hardware threads)\n", omp_get_max_threads());
#else
    std::printf("openmp: not compiled in; parallel runs fall back to the serial path\n");
#endif

    EnvConfig cfg;
    cfg.seed = seed;
    const NavInstance inst = ground_environment(cfg);

    SolverParams sp;
    int sims = 100;
    if (quick) {
        sp.belief_points = 24;
        sp.expansions = 2;
        sp.backup_sweeps = 12;
        sims = 20;
    }
    sp.seed = derive_seed(seed, "bench-solve");

    std::vector<Row> rows;

    {
        // Whole-grid goal model: the largest single solve the toolkit runs.
        LocalModelSpec spec;
        spec.core.resize(static_cast<std::size_t>(inst.bp.pomdp.num_states()));
        for (std::size_t i = 0; i < spec.core.size(); ++i) spec.core[i] = static_cast<int>(i);
        spec.goal = {inst.state_of_cell(inst.world.num_cells() - 1)};
        spec.exempt.insert(spec.core.begin(), spec.core.end());
        spec.goal_only_terminate_reward = true;
        const LocalModel lm = build_local_model(inst.bp.pomdp, nullptr, spec);

        std::vector<Belief> seeds;
        seeds.reserve(static_cast<std::size_t>(lm.num_plain_states()));
        for (int k = 0; k < lm.num_plain_states(); ++k)
            seeds.push_back(delta_belief(lm.pomdp.num_states(), k));

        Row r;
        r.name = "point_backup";
        SolverParams serial = sp;
        serial.jobs = 1;
        double t0 = now_seconds();
        const Policy p1 = pbvi_solve(lm.pomdp, seeds, serial);
        r.serial = now_seconds() - t0;

        SolverParams par = sp;
        par.jobs = jobs;
        t0 = now_seconds();
        const Policy p2 = pbvi_solve(lm.pomdp, seeds, par);
        r.parallel = now_seconds() - t0;
        r.identical = same_policy(p1, p2);
        rows.push_back(r);
    }

    {
        HierarchyParams hp;
        hp.solver = sp;
        hp.sim_count = sims;
        hp.seed = derive_seed(seed, "bench-hier");

        Row r;
        r.name = "hierarchy_build";
        hp.jobs = 1;
        double t0 = now_seconds();
        const Hierarchy h1 = build_hierarchy(inst.bp, inst.sst, inst.ni, hp);
        r.serial = now_seconds() - t0;

        hp.jobs = jobs;
        t0 = now_seconds();
        const Hierarchy h2 = build_hierarchy(inst.bp, inst.sst, inst.ni, hp);
        r.parallel = now_seconds() - t0;
        r.identical = hierarchy_bytes(h1) == hierarchy_bytes(h2);
        rows.push_back(r);
    }

    print_table(rows, jobs);
    for (const Row& r : rows)
        if (!r.identical) {
            std::fprintf(stderr, "kernel %s differs between serial and parallel runs\n",
                         r.name.c_str());
            return 1;
        }
    return 0;
}
