#include <algorithm>
#include <cmath>

#include "hpomdp/kb.hpp"

namespace hpomdp {

namespace {

constexpr double kRowTol = 1e-9;

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) out += v.where + ": " + v.what + "\n";
    return out;
}

ValidationReport validate(const KnowledgeBase& kb) {
    ValidationReport rep;
    auto add = [&rep](std::string where, std::string what) {
        rep.violations.push_back({std::move(where), std::move(what)});
    };

    // Every declared variable must be modified by at least one action.
    for (const auto& var : kb.g.vars) {
        bool touched = false;
        for (const auto& a : kb.g.actions)
            if (a.var == var) touched = true;
        if (!touched) add("var " + var, "no action modifies this variable");
    }

    for (const auto& var : kb.g.vars) {
        if (!kb.s.values.count(var) || kb.s.values.at(var).empty())
            add("var " + var, "no values declared");
    }

    // Alphabets used by observation entries must exist.
    for (const auto& a : kb.g.actions) {
        bool has_obs_entry = false;
        for (const auto& e : kb.g.obs_entries)
            if (e.action == a.name) has_obs_entry = true;
        if (has_obs_entry && (!kb.s.observations.count(a.var) || kb.s.observations.at(a.var).empty()))
            add("action " + a.name, "observation entries but no observations declared for " + a.var);
    }

    // Literal probability attachments must reference declared identifiers.
    auto check_literal = [&](const ProbEntry& e, bool is_trans) {
        if (e.by_rel) return;
        const ActionDecl* ad = kb.g.find_action(e.action);
        if (!ad) return;
        auto vit = kb.s.values.find(ad->var);
        if (vit != kb.s.values.end() && !contains(vit->second, e.from))
            add((is_trans ? "trans " : "obs ") + e.action, "unknown source value " + e.from);
        if (is_trans) {
            if (vit != kb.s.values.end() && !contains(vit->second, e.to))
                add("trans " + e.action, "unknown target value " + e.to);
        } else {
            auto oit = kb.s.observations.find(ad->var);
            if (oit != kb.s.observations.end() && !contains(oit->second, e.to))
                add("obs " + e.action, "unknown observation " + e.to);
        }
    };
    for (const auto& e : kb.g.trans_entries) check_literal(e, true);
    for (const auto& e : kb.g.obs_entries) check_literal(e, false);

    // Relation pair members.
    for (const auto& r : kb.g.rels) {
        auto vit = kb.s.values.find(r.var);
        if (vit == kb.s.values.end()) continue;
        for (const auto& [a, b] : r.pairs) {
            if (!contains(vit->second, a))
                add("rel " + r.name, "pair member " + a + " is not a value of " + r.var);
            if (r.kind == RelKind::ValueValue) {
                if (!contains(vit->second, b))
                    add("rel " + r.name, "pair member " + b + " is not a value of " + r.var);
            } else {
                auto oit = kb.s.observations.find(r.var);
                if (oit == kb.s.observations.end() || !contains(oit->second, b))
                    add("rel " + r.name, "pair member " + b + " is not an observation of " + r.var);
            }
        }
    }

    // Row sums. A value is exempt for an action when execution is forbidden
    // there (the grounding turns those into deterministic self loops).
    for (const auto& a : kb.g.actions) {
        auto vit = kb.s.values.find(a.var);
        if (vit == kb.s.values.end()) continue;
        const std::set<std::string>* forb = nullptr;
        if (auto f = kb.forbidden_values.find(a.name); f != kb.forbidden_values.end())
            forb = &f->second;
        bool any_trans = false;
        for (const auto& e : kb.g.trans_entries)
            if (e.action == a.name) any_trans = true;
        for (const auto& val : vit->second) {
            bool forbidden = forb && forb->count(val);
            if (any_trans && !forbidden) {
                auto row = expand_trans_row(kb, a.name, val);
                double sum = 0;
                for (const auto& [k, p] : row) {
                    (void)k;
                    sum += p;
                }
                if (std::fabs(sum - 1.0) > kRowTol)
                    add("trans " + a.name + " @ " + val, "row sums to " + fmt_double(sum));
            }
            // Observation rows are keyed by the value reached, so they are
            // required even where execution is forbidden (self loops still
            // emit an observation).
            bool any_obs = false;
            for (const auto& e : kb.g.obs_entries)
                if (e.action == a.name) any_obs = true;
            if (any_obs) {
                auto row = expand_obs_row(kb, a.name, val);
                double sum = 0;
                for (const auto& [k, p] : row) {
                    (void)k;
                    sum += p;
                }
                if (std::fabs(sum - 1.0) > kRowTol)
                    add("obs " + a.name + " @ " + val, "row sums to " + fmt_double(sum));
            }
        }
        if (!any_trans) add("action " + a.name, "no transition entries");
    }

    // Executability references.
    for (const auto& f : kb.g.exec_forbids) {
        const ActionDecl* ad = kb.g.find_action(f.action);
        if (!ad) continue;
        auto vit = kb.s.values.find(ad->var);
        if (vit == kb.s.values.end()) continue;
        for (const auto& v : f.values)
            if (!contains(vit->second, v))
                add("exec-forbid " + f.action, "unknown value " + v);
    }

    // State constraints.
    for (const auto& c : kb.s.constraints) {
        for (const auto& [var, val] : c) {
            auto vit = kb.s.values.find(var);
            if (vit == kb.s.values.end() || !contains(vit->second, val))
                add("forbid", var + "=" + val + " references an unknown value");
        }
    }

    // Hierarchy: the abstraction must cover exactly the variable's values as
    // leaves, use declared abstract values internally, and stay a tree.
    if (!kb.g.hier_var.empty()) {
        if (kb.s.hpairs.empty()) {
            add("hier", "hierarchy declared over " + kb.g.hier_var + " but no hpair lines");
        } else {
            auto vit = kb.s.values.find(kb.g.hier_var);
            if (vit != kb.s.values.end()) {
                for (const auto& val : vit->second)
                    if (!kb.hier_parent.count(val))
                        add("hier", "value " + val + " is not covered by the hierarchy");
                for (const auto& val : vit->second)
                    for (const auto& [c, p] : kb.hier_parent)
                        if (p == val)
                            add("hier", "value " + val + " used as parent of " + c);
                for (const auto& av : kb.s.abstract_values)
                    if (!kb.hier_parent.count(av) && av != kb.hier_root)
                        add("hier", "abstract value " + av + " is not attached to the tree");
                for (const auto& [c, p] : kb.hier_parent) {
                    (void)c;
                    if (p != kb.hier_root && !contains(kb.s.abstract_values, p))
                        add("hier", "parent " + p + " is not a declared abstract value");
                }
                // Every abstract value must have at least one child.
                for (const auto& av : kb.s.abstract_values) {
                    bool has_child = false;
                    for (const auto& [c, p] : kb.hier_parent) {
                        (void)c;
                        if (p == av) has_child = true;
                    }
                    if (!has_child && contains(kb.s.abstract_values, av))
                        add("hier", "abstract value " + av + " has no children");
                }
            }
        }
    }
    return rep;
}

}  // namespace hpomdp
