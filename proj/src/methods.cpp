#include "hpomdp/methods.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>

#include "hpomdp/local_model.hpp"
#include "hpomdp/rng.hpp"

namespace hpomdp {

namespace {

class Stopwatch {
  public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

// Shared task seeding: the live belief projected into the model, a delta at
// the goal, and deltas at the goal's in-space grid neighbors.
std::vector<Belief> goal_directed_seeds(const NavInstance& inst, const LocalModel& lm,
                                        const Belief& mapped, int goal_cell) {
    std::vector<Belief> seeds{mapped};
    const int n = lm.pomdp.num_states();
    seeds.push_back(delta_belief(n, lm.to_local.at(inst.state_of_cell(goal_cell))));
    std::vector<int> nbr;
    for (int c : inst.world.open_neighbors(goal_cell)) {
        auto it = lm.to_local.find(inst.state_of_cell(c));
        if (it != lm.to_local.end()) nbr.push_back(it->second);
    }
    std::sort(nbr.begin(), nbr.end());
    for (int s : nbr) seeds.push_back(delta_belief(n, s));
    return seeds;
}

// First-occurrence open neighbors outside the core, in core scan order: the
// same fringe rule the abstract-action builder uses.
std::vector<int> fringe_states(const NavInstance& inst, const std::vector<int>& core_cells) {
    std::set<int> core(core_cells.begin(), core_cells.end());
    std::vector<int> out;
    std::set<int> seen;
    for (int c : core_cells)
        for (int nb : inst.world.open_neighbors(c))
            if (core.find(nb) == core.end() && seen.insert(nb).second)
                out.push_back(inst.state_of_cell(nb));
    return out;
}

bool genuine_terminate(const LocalModel& lm, int ret, const ExecutionContext& ctx,
                       long truncated_before) {
    return ret == lm.terminate && !ctx.out_of_budget &&
           ctx.truncated_invocations == truncated_before;
}

RunRecord base_record(const NavInstance& inst, const Task& task, const char* method) {
    RunRecord rec;
    rec.method = method;
    rec.start_cell = task.start_cell;
    rec.goal_cell = task.goal_cell;
    rec.sp_start_goal = shortest_path(inst.world, task.start_cell, task.goal_cell);
    return rec;
}

void finish_record(const NavInstance& inst, RunRecord& rec, const SimEnv& env,
                   const ExecutionContext& ctx, bool genuine) {
    rec.final_cell = inst.cell_of_state(env.true_state());
    rec.concrete_actions = ctx.concrete_actions;
    rec.sp_final_goal = shortest_path(inst.world, rec.final_cell, rec.goal_cell);
    rec.success = genuine && rec.final_cell == rec.goal_cell;
}

}  // namespace

NavInstance ground_environment(const EnvConfig& cfg) {
    GeneratedEnv env = generate_environment(cfg);
    NavInstance inst;
    inst.world = std::move(env.world);
    GeneralKb g = parse_general(env.general_text);
    SpecificKb s = parse_specific(env.specific_text, g);
    inst.kb = link_kb(g, s);
    inst.bp = build_bottom(inst.kb);
    inst.sst = build_sst(inst.kb, inst.bp);
    inst.ni = lift_neighbors(inst.sst, neighbor_pairs_bottom(inst.kb, inst.bp));
    inst.belief_mode = cfg.initial_belief_mode;
    inst.cell_state.resize(static_cast<std::size_t>(inst.world.num_cells()));
    inst.state_cell.resize(static_cast<std::size_t>(inst.bp.pomdp.num_states()));
    for (int c = 0; c < inst.world.num_cells(); ++c) {
        const int s2 = inst.bp.find_state(cell_name(c));
        if (s2 < 0) throw MethodError("generated cell missing from the ground model: " + cell_name(c));
        inst.cell_state[static_cast<std::size_t>(c)] = s2;
        inst.state_cell[static_cast<std::size_t>(s2)] = c;
    }
    return inst;
}

Belief initial_nav_belief(const NavInstance& inst, const Task& task) {
    const int n = inst.bp.pomdp.num_states();
    if (inst.belief_mode == BeliefMode::known_start)
        return delta_belief(n, inst.state_of_cell(task.start_cell));
    return uniform_belief(n);
}

long concrete_budget(const NavInstance& inst) { return 50L * inst.world.num_cells(); }

RunRecord run_fp(const NavInstance& inst, const Task& task, const SolverParams& solver,
                 std::uint64_t seed) {
    RunRecord rec = base_record(inst, task, "FP");

    Stopwatch plan;
    LocalModelSpec spec;
    spec.core.resize(static_cast<std::size_t>(inst.bp.pomdp.num_states()));
    for (std::size_t i = 0; i < spec.core.size(); ++i) spec.core[i] = static_cast<int>(i);
    spec.goal = {inst.state_of_cell(task.goal_cell)};
    spec.exempt.insert(spec.core.begin(), spec.core.end());
    spec.goal_only_terminate_reward = true;
    const LocalModel lm = build_local_model(inst.bp.pomdp, nullptr, spec);

    const Belief b0 = initial_nav_belief(inst, task);
    Belief mapped;
    mapped.p.assign(static_cast<std::size_t>(lm.pomdp.num_states()), 0.0);
    for (int s2 = 0; s2 < inst.bp.pomdp.num_states(); ++s2)
        mapped.p[static_cast<std::size_t>(lm.to_local.at(s2))] = b0.p[static_cast<std::size_t>(s2)];
    SolverParams sp = solver;
    sp.seed = derive_seed(seed, "fp-solve");
    const Policy pol = pbvi_solve(lm.pomdp, goal_directed_seeds(inst, lm, mapped, task.goal_cell), sp);
    rec.plan_seconds = plan.seconds();

    SimEnv env(inst.bp.pomdp, inst.state_of_cell(task.start_cell), derive_seed(seed, "env"));
    ExecutionContext ctx;
    ctx.sst = &inst.sst;
    ctx.bottom = &inst.bp.pomdp;
    ctx.env = &env;
    ctx.gb = make_global_belief(inst.sst, b0);
    ctx.params.max_concrete = concrete_budget(inst);
    RunnablePolicy rp{&lm, &pol, inst.sst.depth, nullptr};
    const int ret = execute_policy(ctx, rp);
    finish_record(inst, rec, env, ctx, genuine_terminate(lm, ret, ctx, 0));
    return rec;
}

TlpInit tlp_init(const NavInstance& inst, const SolverParams& solver, std::uint64_t seed) {
    Stopwatch sw;
    TlpInit init;
    std::set<std::pair<int, int>> adjacent;
    for (const auto& d : inst.world.doors) {
        const int ba = inst.world.building_of(d.first), bb = inst.world.building_of(d.second);
        if (ba != bb) {
            adjacent.insert({ba, bb});
            adjacent.insert({bb, ba});
        }
    }
    for (const auto& [from, to] : adjacent) {
        LocalModelSpec spec;
        const std::vector<int> cells = inst.world.cells_of_building(from);
        for (int c : cells) spec.core.push_back(inst.state_of_cell(c));
        spec.outside = fringe_states(inst, cells);
        for (int s2 : spec.outside)
            if (inst.world.building_of(inst.cell_of_state(s2)) == to) spec.goal.insert(s2);
        spec.exempt.insert(spec.core.begin(), spec.core.end());
        spec.exempt.insert(spec.goal.begin(), spec.goal.end());
        spec.with_extra = true;
        TlpHop hop;
        hop.lm = build_local_model(inst.bp.pomdp, nullptr, spec);
        std::vector<Belief> seeds;
        for (int s2 = 0; s2 < hop.lm.num_plain_states(); ++s2)
            seeds.push_back(delta_belief(hop.lm.pomdp.num_states(), s2));
        SolverParams sp = solver;
        sp.seed = derive_seed(seed, "tlp-hop", static_cast<std::uint64_t>(from),
                              static_cast<std::uint64_t>(to));
        hop.pol = pbvi_solve(hop.lm.pomdp, seeds, sp);
        init.hops.emplace(std::pair{from, to}, std::move(hop));
    }
    init.init_seconds = sw.seconds();
    return init;
}

RunRecord run_tlp(const NavInstance& inst, const TlpInit& init, const Task& task,
                  const SolverParams& solver, std::uint64_t seed) {
    if (inst.belief_mode != BeliefMode::known_start)
        throw MethodError("two-level planning requires a known start building");
    RunRecord rec = base_record(inst, task, "TLP");
    rec.init_seconds = init.init_seconds;

    Stopwatch path_sw;
    const int from_b = inst.world.building_of(task.start_cell);
    const int goal_b = inst.world.building_of(task.goal_cell);
    std::map<int, int> came;  // building -> predecessor
    std::deque<int> queue{from_b};
    came[from_b] = from_b;
    while (!queue.empty() && came.find(goal_b) == came.end()) {
        const int b = queue.front();
        queue.pop_front();
        for (const auto& [pair, hop] : init.hops)
            if (pair.first == b && came.emplace(pair.second, b).second) queue.push_back(pair.second);
    }
    if (came.find(goal_b) == came.end())
        throw MethodError("no building path from " + building_name(from_b) + " to " +
                          building_name(goal_b));
    std::vector<int> path{goal_b};
    while (path.back() != from_b) path.push_back(came.at(path.back()));
    std::reverse(path.begin(), path.end());
    rec.plan_seconds = path_sw.seconds();

    SimEnv env(inst.bp.pomdp, inst.state_of_cell(task.start_cell), derive_seed(seed, "env"));
    ExecutionContext ctx;
    ctx.sst = &inst.sst;
    ctx.bottom = &inst.bp.pomdp;
    ctx.env = &env;
    ctx.gb = make_global_belief(inst.sst, initial_nav_belief(inst, task));
    ctx.params.max_concrete = concrete_budget(inst);

    bool genuine = true;
    for (std::size_t k = 0; k + 1 < path.size() && !ctx.out_of_budget; ++k) {
        const TlpHop& hop = init.hops.at({path[k], path[k + 1]});
        const long truncated_before = ctx.truncated_invocations;
        RunnablePolicy rp{&hop.lm, &hop.pol, inst.sst.depth, nullptr};
        const int ret = execute_policy(ctx, rp);
        genuine = genuine && genuine_terminate(hop.lm, ret, ctx, truncated_before);
    }

    if (!ctx.out_of_budget) {
        Stopwatch goal_sw;
        LocalModelSpec spec;
        const std::vector<int> cells = inst.world.cells_of_building(goal_b);
        for (int c : cells) spec.core.push_back(inst.state_of_cell(c));
        spec.outside = fringe_states(inst, cells);
        spec.goal = {inst.state_of_cell(task.goal_cell)};
        spec.exempt.insert(spec.core.begin(), spec.core.end());
        spec.with_extra = true;
        spec.goal_only_terminate_reward = true;
        const LocalModel lm = build_local_model(inst.bp.pomdp, nullptr, spec);
        const Belief mapped = map_belief_to_local(ctx.gb, inst.sst, lm, inst.sst.depth, nullptr);
        SolverParams sp = solver;
        sp.seed = derive_seed(seed, "tlp-goal");
        const Policy pol =
            pbvi_solve(lm.pomdp, goal_directed_seeds(inst, lm, mapped, task.goal_cell), sp);
        rec.plan_seconds += goal_sw.seconds();

        const long truncated_before = ctx.truncated_invocations;
        RunnablePolicy rp{&lm, &pol, inst.sst.depth, nullptr};
        const int ret = execute_policy(ctx, rp);
        genuine = genuine && genuine_terminate(lm, ret, ctx, truncated_before);
    } else {
        genuine = false;
    }
    finish_record(inst, rec, env, ctx, genuine);
    return rec;
}

HpInit hp_init(const NavInstance& inst, const HierarchyParams& params) {
    Stopwatch sw;
    HpInit init;
    init.hier = build_hierarchy(inst.bp, inst.sst, inst.ni, params);
    init.init_seconds = sw.seconds();
    return init;
}

RunRecord run_hp(const NavInstance& inst, const HpInit& init, const Task& task,
                 const SolverParams& solver, std::uint64_t seed) {
    RunRecord rec = base_record(inst, task, "HP");
    rec.init_seconds = init.init_seconds;

    const GlobalBelief gb0 = make_global_belief(inst.sst, initial_nav_belief(inst, task));
    Stopwatch plan;
    const HierarchicalPolicy hp =
        build_hierarchical_policy(inst.bp, inst.sst, inst.ni, init.hier,
                                  inst.state_of_cell(task.goal_cell), gb0, solver,
                                  derive_seed(seed, "hp-plan"));
    rec.plan_seconds = plan.seconds();

    SimEnv env(inst.bp.pomdp, inst.state_of_cell(task.start_cell), derive_seed(seed, "env"));
    ExecutionContext ctx;
    ctx.sst = &inst.sst;
    ctx.bottom = &inst.bp.pomdp;
    ctx.hier = &init.hier;
    ctx.env = &env;
    ctx.gb = gb0;
    ctx.params.max_concrete = concrete_budget(inst);
    const HierarchicalRunResult res = execute_hierarchical_policy(ctx, hp);
    finish_record(inst, rec, env, ctx,
                  res.completed && !res.budget_exhausted && !res.oscillated);
    return rec;
}

}  // namespace hpomdp
