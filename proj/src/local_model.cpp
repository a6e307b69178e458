#include "hpomdp/local_model.hpp"

#include <algorithm>

namespace hpomdp {

int LocalModel::map_obs(int lower_obs) const {
    auto it = obs_to_local.find(lower_obs);
    if (it != obs_to_local.end()) return it->second;
    if (obs_extra < 0) throw LocalModelError("observation not modeled and no extra observation exists");
    return obs_extra;
}

LocalModel build_local_model(const Pomdp& lower, const std::vector<int>* lower_action_source,
                             const LocalModelSpec& spec) {
    if (spec.core.empty()) throw LocalModelError("local model needs a nonempty core");
    if (spec.with_help && !spec.with_extra) throw LocalModelError("help action requires the extra state");
    const double rp = spec.reward_magnitude;
    const double rn = -spec.reward_magnitude;

    LocalModel m;
    for (int s : spec.core) {
        if (m.to_local.count(s)) continue;
        m.to_local[s] = static_cast<int>(m.local_states.size());
        m.local_states.push_back(s);
    }
    m.core_count = static_cast<int>(m.local_states.size());
    for (int s : spec.outside) {
        if (m.to_local.count(s)) continue;
        m.to_local[s] = static_cast<int>(m.local_states.size());
        m.local_states.push_back(s);
    }
    const int n_plain = static_cast<int>(m.local_states.size());

    std::set<int> goal_local, exempt_local;
    for (int s : spec.goal) {
        auto it = m.to_local.find(s);
        if (it == m.to_local.end()) throw LocalModelError("goal state is not in the local space");
        goal_local.insert(it->second);
    }
    for (int s : spec.exempt) {
        auto it = m.to_local.find(s);
        if (it != m.to_local.end()) exempt_local.insert(it->second);
    }

    // Relevant lower actions: those moving between two distinct local states.
    std::vector<int> acts;
    for (int a = 0; a < lower.num_actions(); ++a) {
        bool keep = false;
        if (lower_action_source) {
            int src = (*lower_action_source)[a];
            if (m.to_local.count(src)) {
                for (const auto& [s2, q] : lower.T(src, a)) {
                    (void)q;
                    if (s2 != src && m.to_local.count(s2)) { keep = true; break; }
                }
            }
        } else {
            for (int ls : m.local_states) {
                for (const auto& [s2, q] : lower.T(ls, a)) {
                    (void)q;
                    if (s2 != ls && m.to_local.count(s2)) { keep = true; break; }
                }
                if (keep) break;
            }
        }
        if (keep) acts.push_back(a);
    }
    if (acts.empty()) {
        // A space whose plain states are all goals still supports a
        // terminate-only policy; anything else has nowhere to go.
        if (static_cast<int>(goal_local.size()) != n_plain)
            throw LocalModelError("degenerate abstract action: no lower-level action connects two local states");
    }

    Pomdp& p = m.pomdp;
    for (int ls : m.local_states) p.states.push_back(lower.states[ls]);
    if (spec.with_extra) {
        m.extra = static_cast<int>(p.states.size());
        p.states.push_back("extra");
    }
    m.absb_g = static_cast<int>(p.states.size());
    p.states.push_back("absb_g");
    m.absb_ng = static_cast<int>(p.states.size());
    p.states.push_back("absb_ng");

    for (int a : acts) {
        m.action_lower.push_back(a);
        p.actions.push_back(lower.actions[a]);
    }
    m.terminate = static_cast<int>(p.actions.size());
    m.action_lower.push_back(-1);
    p.actions.push_back("terminate");
    if (spec.with_help) {
        m.help = static_cast<int>(p.actions.size());
        m.action_lower.push_back(-1);
        p.actions.push_back("help");
    }

    // Observations perceivable from the plain states, in lower index order.
    std::set<int> obs_seen;
    for (int ls : m.local_states)
        for (int a : acts)
            for (const auto& [o, q] : lower.Z(ls, a)) {
                (void)q;
                obs_seen.insert(o);
            }
    for (int o : obs_seen) {
        m.obs_to_local[o] = static_cast<int>(p.observations.size());
        p.observations.push_back(lower.observations[o]);
    }
    m.obs_none = static_cast<int>(p.observations.size());
    p.observations.push_back("none");
    if (spec.with_extra) {
        m.obs_extra = static_cast<int>(p.observations.size());
        p.observations.push_back("extra");
    }

    p.discount = lower.discount;
    p.alloc_rows();

    auto in_goal = [&goal_local](int k) { return goal_local.count(k) != 0; };
    auto in_core = [&m](int k) { return k < m.core_count; };

    // Plain-state rows under the lower actions.
    for (int k = 0; k < n_plain; ++k) {
        const int ls = m.local_states[k];
        for (std::size_t ia = 0; ia < acts.size(); ++ia) {
            const int la = acts[ia];
            const int ai = static_cast<int>(ia);
            std::map<int, double> row;
            double leak = 0.0;
            for (const auto& [s2, q] : lower.T(ls, la)) {
                auto it = m.to_local.find(s2);
                if (it != m.to_local.end())
                    row[it->second] += q;
                else
                    leak += q;
            }
            if (leak > 0.0) {
                if (m.extra >= 0)
                    row[m.extra] += leak;
                else if (leak > 1e-9)
                    throw LocalModelError("coverage violation: transitions leave the local space "
                                          "but no extra state is modeled");
                else
                    row[k] += leak;
            }
            SparseRow& out = p.T(k, ai);
            for (const auto& [d, q] : row) {
                out.emplace_back(d, q);
                double r;
                if (d == m.extra)
                    r = rn;
                else if (!exempt_local.count(d))
                    r = rn;
                else if (lower_action_source && ls != (*lower_action_source)[la])
                    r = rn;
                else
                    r = -1.0;
                p.set_reward(k, ai, d, r);
            }
            SparseRow& z = p.Z(k, ai);
            for (const auto& [o, q] : lower.Z(ls, la)) z.emplace_back(m.obs_to_local.at(o), q);
        }
    }

    // Extra and absorbent self-loops under the lower actions.
    for (std::size_t ia = 0; ia < acts.size(); ++ia) {
        const int ai = static_cast<int>(ia);
        if (m.extra >= 0) {
            p.T(m.extra, ai) = {{m.extra, 1.0}};
            p.set_reward(m.extra, ai, m.extra, rn);
            p.Z(m.extra, ai) = {{m.obs_extra, 1.0}};
        }
        for (int ab : {m.absb_g, m.absb_ng}) {
            p.T(ab, ai) = {{ab, 1.0}};
            p.set_reward(ab, ai, ab, -1.0);
            p.Z(ab, ai) = {{m.obs_none, 1.0}};
        }
    }

    // Terminate: goals reach absb_g, everything else falls to absb_ng (the
    // extra state self-loops instead in the single-goal form).
    for (int k = 0; k < n_plain; ++k) {
        const int dest = in_goal(k) ? m.absb_g : m.absb_ng;
        p.T(k, m.terminate) = {{dest, 1.0}};
        double r;
        if (spec.goal_only_terminate_reward)
            r = in_goal(k) ? rp : rn;
        else
            r = in_core(k) ? rn : rp;
        p.set_reward(k, m.terminate, dest, r);
    }
    if (m.extra >= 0) {
        const int dest = spec.extra_terminate_self_loop ? m.extra : m.absb_ng;
        p.T(m.extra, m.terminate) = {{dest, 1.0}};
        p.set_reward(m.extra, m.terminate, dest, spec.goal_only_terminate_reward ? rn : rp);
    }
    p.T(m.absb_g, m.terminate) = {{m.absb_g, 1.0}};
    p.set_reward(m.absb_g, m.terminate, m.absb_g, rp);
    p.T(m.absb_ng, m.terminate) = {{m.absb_ng, 1.0}};
    p.set_reward(m.absb_ng, m.terminate, m.absb_ng, spec.goal_only_terminate_reward ? rn : -1.0);
    for (int s2 = 0; s2 < p.num_states(); ++s2) p.Z(s2, m.terminate) = {{m.obs_none, 1.0}};

    // Help: everything except absb_g drops to absb_ng; worth taking only from
    // the extra state.
    if (m.help >= 0) {
        for (int s = 0; s < p.num_states(); ++s) {
            const int dest = s == m.absb_g ? m.absb_g : m.absb_ng;
            p.T(s, m.help) = {{dest, 1.0}};
            p.set_reward(s, m.help, dest, s == m.extra ? rp : rn);
        }
        for (int s2 = 0; s2 < p.num_states(); ++s2) p.Z(s2, m.help) = {{m.obs_none, 1.0}};
    }

    auto problems = check_pomdp(p, true);
    if (!problems.empty()) throw LocalModelError("local model inconsistent: " + problems.front());
    return m;
}

}  // namespace hpomdp
