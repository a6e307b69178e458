#include "hpomdp/executive.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hpomdp {

GlobalBelief make_global_belief(const Sst& sst, const Belief& bottom) {
    if (bottom.size() != sst.num_leaves())
        throw ExecutiveError("bottom belief has " + std::to_string(bottom.size()) +
                             " entries, the hierarchy has " + std::to_string(sst.num_leaves()) +
                             " leaves");
    GlobalBelief gb(sst.nodes.size(), 0.0);
    std::copy(bottom.p.begin(), bottom.p.end(), gb.begin());
    refresh_upper(sst, gb);
    return gb;
}

void refresh_upper(const Sst& sst, GlobalBelief& gb) {
    for (int h = sst.depth - 1; h >= 0; --h)
        for (int node : sst.by_height[h]) {
            double total = 0.0;
            for (int c : sst.nodes[node].children) total += gb[c];
            gb[node] = total;
        }
}

bool update_global_belief(const Sst& sst, const Pomdp& bottom, GlobalBelief& gb, int a, int o) {
    const int n = sst.num_leaves();
    Belief b;
    b.p.assign(gb.begin(), gb.begin() + n);
    BeliefUpdateResult r = belief_update(bottom, b, a, o);
    std::copy(r.b.p.begin(), r.b.p.end(), gb.begin());
    refresh_upper(sst, gb);
    return r.consistent;
}

Belief map_belief_to_local(const GlobalBelief& gb, const Sst& sst, const LocalModel& lm,
                           int states_height, const HierarchyLevel* level,
                           std::vector<double>* out_probs) {
    if (states_height < 1 || states_height > sst.depth)
        throw ExecutiveError("no states at height " + std::to_string(states_height));
    if ((level == nullptr) != (states_height == sst.depth))
        throw ExecutiveError("level dynamics do not match the requested height");
    Belief b;
    b.p.assign(lm.pomdp.num_states(), 0.0);
    if (out_probs) out_probs->clear();
    double out = 0.0;
    for (int node : sst.by_height[states_height]) {
        const int ls = level ? level->node_state.at(node) : sst.nodes[node].leaf_state;
        const double mass = gb[node];
        auto it = lm.to_local.find(ls);
        if (it != lm.to_local.end()) {
            b.p[it->second] = mass;
        } else {
            out += mass;
            if (out_probs) out_probs->push_back(mass);
        }
    }
    if (lm.extra >= 0)
        b.p[lm.extra] = out;
    else if (out > 1e-9)
        throw ExecutiveError("coverage violation: " + std::to_string(out) +
                             " belief mass outside a local space with no extra state");
    return b;
}

// E/E_max of the escape mass: 0 when there is nothing to measure (one bin or
// no mass), exactly 1 on a bitwise-uniform vector, base-invariant otherwise.
static double escape_entropy_ratio(const std::vector<double>& out_probs) {
    const std::size_t k = out_probs.size();
    if (k <= 1) return 0.0;
    double sum = 0.0;
    for (double q : out_probs) sum += q;
    if (sum < 1e-12) return 0.0;
    bool all_equal = true;
    for (double q : out_probs)
        if (q != out_probs.front()) {
            all_equal = false;
            break;
        }
    if (all_equal) return 1.0;
    auto entropy = [](const std::vector<double>& qs) {
        double e = 0.0;
        for (double q : qs)
            if (q > 0.0) e -= q * std::log(q);
        return e;
    };
    std::vector<double> norm(out_probs);
    for (double& q : norm) q /= sum;
    const std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
    const double emax = entropy(uniform);
    return emax > 0.0 ? entropy(norm) / emax : 0.0;
}

Policy entropy_weight(const Policy& pol, int extra_index, const std::vector<double>& out_probs) {
    if (extra_index < 0) return pol;
    const double ratio = escape_entropy_ratio(out_probs);
    if (ratio == 0.0) return pol;  // trusted escape value, identical policy
    Policy out = pol;
    for (AlphaVector& av : out.alphas) {
        if (extra_index >= static_cast<int>(av.v.size())) continue;
        double& a = av.v[static_cast<std::size_t>(extra_index)];
        a = a / (1.0 + std::fabs(a * ratio));
    }
    return out;
}

int SimEnv::step(int action) {
    StepSample s = sample_step(*p_, state_, action, rng_);
    state_ = s.state;
    return s.obs;
}

int execute_policy(ExecutionContext& ctx, const RunnablePolicy& rp) {
    const LocalModel& lm = *rp.lm;
    if (rp.pol->empty()) throw ExecutiveError("policy has no alpha vectors");
    if (lm.terminate < 0) throw ExecutiveError("local model has no terminate action");
    const long budget =
        static_cast<long>(ctx.params.invocation_budget_factor) * lm.pomdp.num_states();
    long executed = 0;
    std::vector<double> out_probs;
    for (;;) {
        if (ctx.out_of_budget) return lm.terminate;
        const Belief b = map_belief_to_local(ctx.gb, *ctx.sst, lm, rp.states_height, rp.level,
                                             lm.extra >= 0 ? &out_probs : nullptr);
        const Policy* acting = rp.pol;
        Policy weighted;
        if (lm.extra >= 0) {
            weighted = entropy_weight(*rp.pol, lm.extra, out_probs);
            acting = &weighted;
        }
        // The mapped belief mixes states the solve's own dynamics can never
        // mix (upper models observe with certainty), so the stored envelope
        // can sag below the one-step truth there. A point backup at the live
        // belief prices every action through the model instead.
        const int a = lookahead_action(lm.pomdp, *acting, b).action;
        if (lm.is_special_action(a)) return a;
        if (executed >= budget) {
            ++ctx.truncated_invocations;
            return lm.help >= 0 ? lm.help : lm.terminate;
        }
        ++executed;
        const int la = lm.action_lower[a];
        if (rp.level == nullptr) {
            const int o = ctx.env->step(la);
            update_global_belief(*ctx.sst, *ctx.bottom, ctx.gb, la, o);
            ++ctx.concrete_actions;
            if (ctx.params.max_concrete >= 0 && ctx.concrete_actions >= ctx.params.max_concrete)
                ctx.out_of_budget = true;
        } else {
            if (!ctx.hier)
                throw ExecutiveError("abstract actions need the hierarchy in the context");
            const AbstractAction& aa = rp.level->actions.at(static_cast<std::size_t>(la));
            RunnablePolicy sub;
            sub.lm = &aa.local;
            sub.pol = &aa.policy;
            sub.states_height = rp.states_height + 1;
            sub.level = ctx.hier->level_at_height(sub.states_height);
            // The sub-policy's own terminate/help verdict carries no
            // information the refreshed global belief does not already hold.
            const long before = ctx.concrete_actions;
            execute_policy(ctx, sub);
            if (ctx.concrete_actions == before) {
                // The sub-policy went special without acting, so the global
                // belief is unchanged and this loop would repeat the same
                // choice forever. Hand the disagreement upward instead.
                ++ctx.truncated_invocations;
                return lm.help >= 0 ? lm.help : lm.terminate;
            }
        }
    }
}

LocalModel build_stage_model(const BottomPomdp& bp, const Sst& sst, const NeighborIndex& ni,
                             const Hierarchy& hier, const std::vector<int>& goal_path, int height,
                             double reward_magnitude) {
    if (height < 1 || height > sst.depth)
        throw ExecutiveError("stage height " + std::to_string(height) + " outside 1.." +
                             std::to_string(sst.depth));
    if (static_cast<int>(goal_path.size()) != sst.depth + 1)
        throw ExecutiveError("goal path length does not match the hierarchy depth");
    const int parent = goal_path[height - 1];
    const int goal_node = goal_path[height];
    const bool bottom_stage = height == sst.depth;
    const HierarchyLevel* level = bottom_stage ? nullptr : hier.level_at_height(height);
    if (!bottom_stage && !level)
        throw ExecutiveError("hierarchy has no dynamics at height " + std::to_string(height));
    const Pomdp& lower = bottom_stage ? bp.pomdp : level->dyn;
    auto lower_state = [&](int node) {
        return bottom_stage ? sst.nodes[node].leaf_state : level->node_state.at(node);
    };

    LocalModelSpec spec;
    spec.reward_magnitude = reward_magnitude;
    std::set<int> in_core;
    for (int c : sst.nodes[parent].children) {
        spec.core.push_back(lower_state(c));
        spec.exempt.insert(lower_state(c));
        in_core.insert(c);
    }
    std::set<int> added;
    for (int c : sst.nodes[parent].children)
        for (int nb : ni.neighbors_of(c))
            if (!in_core.count(nb) && added.insert(nb).second)
                spec.outside.push_back(lower_state(nb));
    spec.goal.insert(lower_state(goal_node));
    spec.with_extra = height > 1;
    spec.with_help = height > 1;
    spec.goal_only_terminate_reward = true;
    spec.extra_terminate_self_loop = true;

    try {
        return build_local_model(lower, bottom_stage ? nullptr : &level->action_source_state,
                                 spec);
    } catch (const LocalModelError& e) {
        throw ExecutiveError(std::string(e.what()) + " (stage toward " +
                             sst.nodes[goal_node].id + ")");
    }
}

SolverParams stage_solver_profile(const SolverParams& base, bool concrete_stage) {
    SolverParams sp = base;
    sp.belief_points = std::min(sp.belief_points, 32);
    if (!concrete_stage) sp.backup_sweeps = std::min(sp.backup_sweeps, 24);
    return sp;
}

HierarchicalPolicy build_hierarchical_policy(const BottomPomdp& bp, const Sst& sst,
                                             const NeighborIndex& ni, const Hierarchy& hier,
                                             int goal_leaf, const GlobalBelief& gb0,
                                             const SolverParams& base, std::uint64_t seed) {
    HierarchicalPolicy hp;
    hp.goal_path = hierarchical_state(sst, goal_leaf);
    for (int h = 1; h <= sst.depth; ++h) {
        LocalPolicy lp;
        lp.height = h;
        lp.goal_node = hp.goal_path[h];
        lp.lm = build_stage_model(bp, sst, ni, hier, hp.goal_path, h,
                                  hier.params.reward_magnitude);
        const HierarchyLevel* level = h == sst.depth ? nullptr : hier.level_at_height(h);
        auto lower_state = [&](int node) {
            return level ? level->node_state.at(node) : sst.nodes[node].leaf_state;
        };

        const int n = lp.lm.pomdp.num_states();
        std::vector<Belief> seeds;
        seeds.push_back(map_belief_to_local(gb0, sst, lp.lm, h, level));
        seeds.push_back(delta_belief(n, lp.lm.to_local.at(lower_state(lp.goal_node))));
        std::vector<int> near_goal;
        for (int nb : ni.neighbors_of(lp.goal_node)) {
            auto it = lp.lm.to_local.find(lower_state(nb));
            if (it != lp.lm.to_local.end()) near_goal.push_back(it->second);
        }
        std::sort(near_goal.begin(), near_goal.end());
        for (int k : near_goal) seeds.push_back(delta_belief(n, k));

        SolverParams sp = stage_solver_profile(base, h == sst.depth);
        sp.seed = derive_seed(seed, "lp-solve", static_cast<std::uint64_t>(h));
        sp.jobs = 1;
        lp.pol = pbvi_solve(lp.lm.pomdp, seeds, sp);
        hp.lps.push_back(std::move(lp));
    }
    return hp;
}

HierarchicalRunResult execute_hierarchical_policy(ExecutionContext& ctx,
                                                  const HierarchicalPolicy& hp) {
    HierarchicalRunResult res;
    const int len = static_cast<int>(hp.lps.size());
    int stage = 0;
    int idle_switches = 0;
    while (stage < len) {
        const LocalPolicy& lp = hp.lps[stage];
        RunnablePolicy rp;
        rp.lm = &lp.lm;
        rp.pol = &lp.pol;
        rp.states_height = lp.height;
        rp.level = lp.height == ctx.sst->depth ? nullptr
                                               : (ctx.hier ? ctx.hier->level_at_height(lp.height)
                                                           : nullptr);
        const long before = ctx.concrete_actions;
        const int special = execute_policy(ctx, rp);
        const bool asked_help = lp.lm.help >= 0 && special == lp.lm.help;
        res.control_log.push_back({stage, asked_help});
        if (ctx.out_of_budget) {
            res.budget_exhausted = true;
            break;
        }
        if (ctx.concrete_actions > before) {
            idle_switches = 0;
        } else if (++idle_switches > ctx.params.oscillation_limit) {
            res.oscillated = true;
            break;
        }
        if (asked_help)
            stage = std::max(0, stage - 1);
        else
            ++stage;
    }
    res.completed = stage >= len;
    res.concrete_actions = ctx.concrete_actions;
    res.truncated_invocations = ctx.truncated_invocations;
    return res;
}

}  // namespace hpomdp
