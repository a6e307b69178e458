#include "hpomdp/grounding.hpp"

#include <algorithm>

namespace hpomdp {

namespace {

std::string join_tuple(const std::vector<std::string>& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += '&';
        s += t[i];
    }
    return s;
}

bool tuple_forbidden(const KnowledgeBase& kb, const std::map<std::string, int>& var_pos,
                     const std::vector<std::string>& tuple) {
    for (const auto& c : kb.s.constraints) {
        bool all = true;
        for (const auto& [var, val] : c) {
            auto it = var_pos.find(var);
            if (it == var_pos.end() || tuple[it->second] != val) {
                all = false;
                break;
            }
        }
        if (all && !c.empty()) return true;
    }
    return false;
}

}  // namespace

BottomPomdp build_bottom(const KnowledgeBase& kb) {
    BottomPomdp bp;
    const auto& vars = kb.g.vars;
    std::map<std::string, int> var_pos;
    for (int i = 0; i < int(vars.size()); ++i) var_pos[vars[i]] = i;

    // Cross product in mixed-radix order, first variable most significant.
    std::vector<std::string> tuple(vars.size());
    std::vector<int> digit(vars.size(), 0);
    bool more = !vars.empty();
    while (more) {
        for (std::size_t i = 0; i < vars.size(); ++i) tuple[i] = kb.values_of(vars[i])[digit[i]];
        if (!tuple_forbidden(kb, var_pos, tuple)) {
            bp.state_index[join_tuple(tuple)] = int(bp.state_tuples.size());
            bp.state_tuples.push_back(tuple);
            bp.pomdp.states.push_back(join_tuple(tuple));
        }
        int i = int(vars.size()) - 1;
        while (i >= 0) {
            if (++digit[i] < int(kb.values_of(vars[i]).size())) break;
            digit[i] = 0;
            --i;
        }
        if (i < 0) more = false;
    }
    if (bp.pomdp.states.empty()) throw GroundingError("no states: every tuple is forbidden");

    for (const auto& var : vars)
        for (const auto& o : kb.observations_of(var))
            if (!bp.obs_index.count(o)) {
                bp.obs_index[o] = int(bp.pomdp.observations.size());
                bp.pomdp.observations.push_back(o);
            }

    for (const auto& ad : kb.g.actions) bp.pomdp.actions.push_back(ad.name);
    bp.pomdp.alloc_rows();

    const int nS = bp.pomdp.num_states();
    for (int a = 0; a < bp.pomdp.num_actions(); ++a) {
        const ActionDecl& ad = kb.g.actions[a];
        const int vpos = var_pos.at(ad.var);
        auto fb = kb.forbidden_values.find(ad.name);

        for (int s = 0; s < nS; ++s) {
            const std::string& val = bp.state_tuples[s][vpos];

            if (fb != kb.forbidden_values.end() && fb->second.count(val)) {
                bp.pomdp.T(s, a) = {{s, 1.0}};
            } else {
                auto row = expand_trans_row(kb, ad.name, val);
                if (row.empty())
                    throw GroundingError("transition row empty for state " + bp.pomdp.states[s] +
                                         ", action " + ad.name);
                std::map<int, double> out;
                double pruned = 0.0;
                std::vector<std::string> target = bp.state_tuples[s];
                for (const auto& [tv, p] : row) {
                    target[vpos] = tv;
                    int idx = bp.find_state(join_tuple(target));
                    if (idx < 0)
                        pruned += p;  // tuple removed by a constraint
                    else
                        out[idx] += p;
                }
                if (pruned > 0.0) out[s] += pruned;
                for (const auto& [idx, p] : out) bp.pomdp.T(s, a).emplace_back(idx, p);
            }

            // Observation rows condition on the arrival state, which makes
            // them identical for forbidden self-loops and ordinary arrivals.
            auto orow = expand_obs_row(kb, ad.name, val);
            std::map<int, double> oout;
            for (const auto& [oid, p] : orow) {
                auto it = bp.obs_index.find(oid);
                if (it == bp.obs_index.end())
                    throw GroundingError("unknown observation " + oid + " for action " + ad.name);
                oout[it->second] += p;
            }
            if (oout.empty())
                throw GroundingError("observation row empty for state " + bp.pomdp.states[s] +
                                     ", action " + ad.name);
            for (const auto& [idx, p] : oout) bp.pomdp.Z(s, a).emplace_back(idx, p);
        }
    }

    auto bad = check_pomdp(bp.pomdp, false);
    if (!bad.empty()) throw GroundingError("grounded model failed checks: " + bad.front());
    return bp;
}

std::set<std::pair<int, int>> neighbor_pairs_bottom(const KnowledgeBase& kb,
                                                    const BottomPomdp& bp) {
    std::map<std::string, int> var_pos;
    for (int i = 0; i < int(kb.g.vars.size()); ++i) var_pos[kb.g.vars[i]] = i;

    std::set<std::pair<int, int>> out;
    for (const auto& ad : kb.g.actions) {
        std::set<std::string> rel_names;
        for (const auto& e : kb.g.trans_entries)
            if (e.action == ad.name && e.by_rel) rel_names.insert(e.rel);
        if (rel_names.empty()) continue;

        const int vpos = var_pos.at(ad.var);
        std::map<std::string, std::vector<int>> by_value;
        for (int s = 0; s < bp.pomdp.num_states(); ++s)
            by_value[bp.state_tuples[s][vpos]].push_back(s);

        for (const auto& rn : rel_names) {
            const Relation* r = kb.g.find_rel(rn);
            if (!r || r->kind != RelKind::ValueValue) continue;
            for (const auto& [u, v] : r->pairs) {
                if (u == v) continue;
                auto it = by_value.find(u);
                if (it == by_value.end()) continue;
                for (int s : it->second) {
                    std::vector<std::string> target = bp.state_tuples[s];
                    target[vpos] = v;
                    int idx = bp.find_state(join_tuple(target));
                    if (idx >= 0) out.insert({s, idx});
                }
            }
        }
    }
    return out;
}

}  // namespace hpomdp
