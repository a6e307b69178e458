#include "hpomdp/hierarchy.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hpomdp {

const HierarchyLevel* Hierarchy::level_at_height(int h) const {
    for (const auto& lev : levels)
        if (lev.height == h) return &lev;
    return nullptr;
}

LocalModel build_abstract_pomdp(const Sst& sst, const NeighborIndex& ni, int source_node,
                                int target_node, const Pomdp& lower_dyn,
                                const std::vector<int>* lower_action_source,
                                const std::map<int, int>* lower_node_state,
                                double reward_magnitude) {
    auto lower_state = [&](int node) {
        return lower_node_state ? lower_node_state->at(node) : node;
    };

    LocalModelSpec spec;
    spec.with_extra = true;
    spec.reward_magnitude = reward_magnitude;

    const auto& core_children = sst.nodes[source_node].children;
    for (int c : core_children) spec.core.push_back(lower_state(c));

    std::set<int> seen(core_children.begin(), core_children.end());
    for (int c : core_children)
        for (int nb : ni.neighbors_of(c))
            if (seen.insert(nb).second) spec.outside.push_back(lower_state(nb));

    for (int c : sst.nodes[target_node].children)
        if (seen.count(c)) spec.goal.insert(lower_state(c));
    if (spec.goal.empty())
        throw HierarchyError("abstract action " + sst.nodes[source_node].id + ">" +
                             sst.nodes[target_node].id + " has no reachable goal children");

    spec.exempt.insert(spec.core.begin(), spec.core.end());
    spec.exempt.insert(spec.goal.begin(), spec.goal.end());

    try {
        return build_local_model(lower_dyn, lower_action_source, spec);
    } catch (const LocalModelError& e) {
        throw HierarchyError(std::string(e.what()) + " (abstract action " +
                             sst.nodes[source_node].id + ">" + sst.nodes[target_node].id + ")");
    }
}

OutcomeEstimate estimate_outcome_row(const LocalModel& local, const Policy& pol,
                                     const Pomdp& lower_dyn,
                                     const std::vector<int>* lower_state_nodes, const Sst& sst,
                                     const std::vector<int>& counted_nodes, int source_node,
                                     int sim_count, std::uint64_t seed) {
    if (sim_count <= 0) throw HierarchyError("outcome estimation needs a positive simulation count");
    const int n_plain = local.num_plain_states();
    const int max_steps = 20 * local.pomdp.num_states();

    std::map<int, int> slot_of;
    for (int node : counted_nodes) slot_of.emplace(node, static_cast<int>(slot_of.size()));
    std::vector<long> counts(slot_of.size(), 0);

    auto node_of = [&](int ls) { return lower_state_nodes ? (*lower_state_nodes)[ls] : ls; };

    OutcomeEstimate est;
    long discarded = 0;
    for (int m = 0; m < sim_count; ++m) {
        Rng rng(derive_seed(seed, "sim", static_cast<std::uint64_t>(m)));
        int k = std::min(static_cast<int>(draw_unit(rng) * n_plain), n_plain - 1);
        int true_state = local.local_states[k];
        Belief b = delta_belief(local.pomdp.num_states(), k);
        bool truncated = false;
        int steps = 0;
        while (true) {
            const int a = best_action(pol, b).action;
            if (local.is_special_action(a)) break;
            if (steps >= max_steps) {
                truncated = true;
                break;
            }
            StepSample st = sample_step(lower_dyn, true_state, local.action_lower[a], rng);
            b = belief_update(local.pomdp, b, a, local.map_obs(st.obs)).b;
            true_state = st.state;
            ++steps;
        }
        if (truncated) ++est.truncated;
        const int parent = sst.nodes[node_of(true_state)].parent;
        auto it = slot_of.find(parent);
        if (it != slot_of.end())
            ++counts[it->second];
        else
            ++discarded;
    }

    est.discarded_fraction = static_cast<double>(discarded) / sim_count;
    const long kept = sim_count - discarded;
    if (kept == 0) {
        est.fallback = true;
        est.node_prob[source_node] = 1.0;
        return est;
    }
    for (const auto& [node, slot] : slot_of)
        if (counts[slot] > 0)
            est.node_prob[node] = static_cast<double>(counts[slot]) / static_cast<double>(kept);
    return est;
}

Hierarchy build_hierarchy(const BottomPomdp& bp, const Sst& sst, const NeighborIndex& ni,
                          const HierarchyParams& params) {
    Hierarchy hier;
    hier.params = params;

    const Pomdp* lower_dyn = &bp.pomdp;
    const std::vector<int>* lower_src = nullptr;
    const std::map<int, int>* lower_ns = nullptr;
    const std::vector<int>* lower_sn = nullptr;

    for (int d = sst.depth - 1; d >= 1; --d) {
        HierarchyLevel lev;
        lev.height = d;
        lev.state_nodes = sst.by_height[d];
        for (std::size_t i = 0; i < lev.state_nodes.size(); ++i)
            lev.node_state[lev.state_nodes[i]] = static_cast<int>(i);

        std::vector<std::pair<int, int>> pairs;
        for (int node : lev.state_nodes)
            for (int nb : ni.neighbors_of(node)) pairs.emplace_back(node, nb);

        lev.actions.resize(pairs.size());
        lev.action_source_state.resize(pairs.size());
        std::vector<std::string> errors(pairs.size());

        const int np = static_cast<int>(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, params.jobs)) if (params.jobs > 1)
#endif
        for (int pi = 0; pi < np; ++pi) {
            try {
                const auto [src, dst] = pairs[pi];
                AbstractAction aa;
                aa.source_node = src;
                aa.target_node = dst;
                aa.height = d;
                aa.local = build_abstract_pomdp(sst, ni, src, dst, *lower_dyn, lower_src, lower_ns,
                                                params.reward_magnitude);

                std::vector<Belief> seeds;
                seeds.reserve(aa.local.num_plain_states());
                for (int k = 0; k < aa.local.num_plain_states(); ++k)
                    seeds.push_back(delta_belief(aa.local.pomdp.num_states(), k));
                SolverParams sp = params.solver;
                sp.seed = derive_seed(params.seed, "aa-solve", d, src, dst);
                sp.jobs = 1;
                aa.policy = pbvi_solve(aa.local.pomdp, seeds, sp);

                std::vector<int> counted;
                counted.push_back(src);
                for (int nb : ni.neighbors_of(src)) counted.push_back(nb);
                OutcomeEstimate est = estimate_outcome_row(
                    aa.local, aa.policy, *lower_dyn, lower_sn, sst, counted, src, params.sim_count,
                    derive_seed(params.seed, "aa-sim", d, src, dst));
                aa.discarded_fraction = est.discarded_fraction;
                aa.truncated_sims = est.truncated;
                aa.fallback_row = est.fallback;
                for (const auto& [node, prob] : est.node_prob)
                    aa.outcome_row.emplace_back(lev.node_state.at(node), prob);
                std::sort(aa.outcome_row.begin(), aa.outcome_row.end());

                lev.action_source_state[pi] = lev.node_state.at(src);
                lev.actions[pi] = std::move(aa);
            } catch (const std::exception& e) {
                errors[pi] = e.what();
            }
        }
        for (const auto& e : errors)
            if (!e.empty()) throw HierarchyError(e);

        Pomdp& dyn = lev.dyn;
        for (int node : lev.state_nodes) dyn.states.push_back(sst.nodes[node].id);
        for (int node : lev.state_nodes) dyn.observations.push_back(sst.nodes[node].id);
        for (const auto& aa : lev.actions)
            dyn.actions.push_back(sst.nodes[aa.source_node].id + ">" + sst.nodes[aa.target_node].id);
        dyn.alloc_rows();
        const int ns = dyn.num_states();
        for (int a = 0; a < static_cast<int>(lev.actions.size()); ++a) {
            const int src_state = lev.action_source_state[a];
            for (int s = 0; s < ns; ++s) {
                dyn.T(s, a) = s == src_state ? lev.actions[a].outcome_row
                                             : SparseRow{{s, 1.0}};
                dyn.Z(s, a) = {{s, 1.0}};
            }
        }

        hier.levels.push_back(std::move(lev));
        lower_dyn = &hier.levels.back().dyn;
        lower_src = &hier.levels.back().action_source_state;
        lower_ns = &hier.levels.back().node_state;
        lower_sn = &hier.levels.back().state_nodes;
    }
    return hier;
}

}  // namespace hpomdp
