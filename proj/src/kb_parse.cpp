#include <algorithm>

#include "hpomdp/kb.hpp"

namespace hpomdp {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw KbError("line " + std::to_string(line) + ": " + msg);
}

void need(bool cond, int line, const std::string& msg) {
    if (!cond) fail(line, msg);
}

}  // namespace

const Relation* GeneralKb::find_rel(const std::string& name) const {
    for (const auto& r : rels)
        if (r.name == name) return &r;
    return nullptr;
}

const ActionDecl* GeneralKb::find_action(const std::string& name) const {
    for (const auto& a : actions)
        if (a.name == name) return &a;
    return nullptr;
}

bool GeneralKb::has_var(const std::string& name) const {
    return std::find(vars.begin(), vars.end(), name) != vars.end();
}

const std::vector<std::string>& KnowledgeBase::values_of(const std::string& var) const {
    auto it = s.values.find(var);
    if (it == s.values.end()) throw KbError("no values declared for variable " + var);
    return it->second;
}

const std::vector<std::string>& KnowledgeBase::observations_of(const std::string& var) const {
    auto it = s.observations.find(var);
    if (it == s.observations.end()) throw KbError("no observations declared for variable " + var);
    return it->second;
}

GeneralKb parse_general(const std::string& text) {
    GeneralKb g;
    TokenLines tl = tokenize_lines(text);
    std::string cur_module;
    for (std::size_t i = 0; i < tl.tokens.size(); ++i) {
        const auto& t = tl.tokens[i];
        int ln = tl.line_no[i];
        const std::string& kw = t[0];
        if (kw == "module") {
            need(t.size() == 2, ln, "usage: module <name>");
            need(std::find(g.modules.begin(), g.modules.end(), t[1]) == g.modules.end(), ln,
                 "duplicate module " + t[1]);
            g.modules.push_back(t[1]);
            cur_module = t[1];
        } else if (kw == "var") {
            need(t.size() == 2, ln, "usage: var <name>");
            need(!g.has_var(t[1]), ln, "duplicate variable " + t[1]);
            g.vars.push_back(t[1]);
        } else if (kw == "action") {
            need(t.size() == 4 && t[2] == "modifies", ln, "usage: action <name> modifies <var>");
            need(!cur_module.empty(), ln, "action declared outside a module");
            need(g.has_var(t[3]), ln, "action " + t[1] + " modifies unknown variable " + t[3]);
            if (const ActionDecl* prev = g.find_action(t[1])) {
                // Re-declaring with the same variable is a duplicate; with a
                // different one the action would modify two variables.
                if (prev->var != t[3])
                    fail(ln, "action " + t[1] + " modifies two variables (" + prev->var + ", " +
                                 t[3] + ")");
                fail(ln, "duplicate action " + t[1]);
            }
            g.actions.push_back({t[1], t[3], cur_module});
        } else if (kw == "rel") {
            need(t.size() == 5 && t[3] == "over", ln, "usage: rel <name> <vv|vo> over <var>");
            need(t[2] == "vv" || t[2] == "vo", ln, "relation kind must be vv or vo");
            need(g.has_var(t[4]), ln, "relation " + t[1] + " over unknown variable " + t[4]);
            need(g.find_rel(t[1]) == nullptr, ln, "duplicate relation " + t[1]);
            g.rels.push_back({t[1], t[2] == "vv" ? RelKind::ValueValue : RelKind::ValueObs, t[4], {}});
        } else if (kw == "trans" || kw == "obs") {
            bool is_trans = kw == "trans";
            ProbEntry e;
            need(t.size() >= 2, ln, "truncated " + kw + " entry");
            e.action = t[1];
            const ActionDecl* ad = g.find_action(e.action);
            need(ad != nullptr, ln, kw + " entry names unknown action " + e.action);
            if (t.size() == 5 && t[2] == "rel") {
                e.by_rel = true;
                e.rel = t[3];
                const Relation* r = g.find_rel(e.rel);
                need(r != nullptr, ln, kw + " entry names unknown relation " + e.rel);
                need(r->var == ad->var, ln,
                     "relation " + e.rel + " is over " + r->var + " but action " + e.action +
                         " modifies " + ad->var);
                RelKind want = is_trans ? RelKind::ValueValue : RelKind::ValueObs;
                need(r->kind == want, ln,
                     std::string(is_trans ? "trans" : "obs") + " entry requires a " +
                         (is_trans ? "vv" : "vo") + " relation");
                e.prob = parse_double(t[4], "line " + std::to_string(ln));
            } else if (t.size() == 5) {
                e.from = t[2];
                e.to = t[3];
                e.prob = parse_double(t[4], "line " + std::to_string(ln));
            } else {
                fail(ln, "usage: " + kw + " <action> rel <rel> <p> | " + kw +
                             " <action> <from> <to> <p>");
            }
            need(e.prob > 0.0 && e.prob <= 1.0, ln, "probability out of (0,1]");
            (is_trans ? g.trans_entries : g.obs_entries).push_back(std::move(e));
        } else if (kw == "hier") {
            need(t.size() == 3 && t[1] == "over", ln, "usage: hier over <var>");
            need(g.has_var(t[2]), ln, "hier over unknown variable " + t[2]);
            need(g.hier_var.empty(), ln, "a hierarchy is already declared over " + g.hier_var);
            g.hier_var = t[2];
        } else if (kw == "exec-forbid") {
            need(t.size() >= 4 && t[2] == "when", ln,
                 "usage: exec-forbid <action> when <value>... | exec-forbid <action> when rel <rel>");
            need(g.find_action(t[1]) != nullptr, ln, "exec-forbid names unknown action " + t[1]);
            ExecForbid f;
            f.action = t[1];
            if (t[3] == "rel") {
                need(t.size() == 5, ln, "usage: exec-forbid <action> when rel <rel>");
                const Relation* r = g.find_rel(t[4]);
                need(r != nullptr, ln, "exec-forbid names unknown relation " + t[4]);
                need(r->kind == RelKind::ValueValue, ln, "exec-forbid requires a vv relation");
                f.by_rel = true;
                f.rel = t[4];
            } else {
                f.values.assign(t.begin() + 3, t.end());
            }
            g.exec_forbids.push_back(std::move(f));
        } else {
            fail(ln, "unknown declaration '" + kw + "'");
        }
    }
    if (g.modules.empty() && g.vars.empty() && g.actions.empty())
        throw KbError("empty general document: no module, variable or action declared");
    return g;
}

SpecificKb parse_specific(const std::string& text, const GeneralKb& g) {
    SpecificKb s;
    TokenLines tl = tokenize_lines(text);
    for (std::size_t i = 0; i < tl.tokens.size(); ++i) {
        const auto& t = tl.tokens[i];
        int ln = tl.line_no[i];
        const std::string& kw = t[0];
        if (kw == "values" || kw == "observations") {
            need(t.size() >= 3, ln, "usage: " + kw + " <var> <id>...");
            need(g.has_var(t[1]), ln, kw + " for unknown variable " + t[1]);
            auto& dst = (kw == "values" ? s.values : s.observations)[t[1]];
            need(dst.empty(), ln, "duplicate " + kw + " declaration for " + t[1]);
            dst.assign(t.begin() + 2, t.end());
            std::set<std::string> seen;
            for (const auto& v : dst)
                need(seen.insert(v).second, ln, "duplicate identifier " + v + " in " + kw);
        } else if (kw == "abstract") {
            need(t.size() >= 2, ln, "usage: abstract <id>...");
            for (auto it = t.begin() + 1; it != t.end(); ++it) {
                need(std::find(s.abstract_values.begin(), s.abstract_values.end(), *it) ==
                         s.abstract_values.end(),
                     ln, "duplicate abstract value " + *it);
                s.abstract_values.push_back(*it);
            }
        } else if (kw == "pair") {
            need(t.size() == 4, ln, "usage: pair <rel> <a> <b>");
            need(g.find_rel(t[1]) != nullptr, ln, "pair for unknown relation " + t[1]);
            s.rel_pairs[t[1]].emplace_back(t[2], t[3]);
        } else if (kw == "hpair") {
            need(t.size() == 3, ln, "usage: hpair <child> <parent>");
            s.hpairs.emplace_back(t[1], t[2]);
        } else if (kw == "forbid") {
            need(t.size() >= 2, ln, "usage: forbid <var>=<value>...");
            std::map<std::string, std::string> asg;
            for (auto it = t.begin() + 1; it != t.end(); ++it) {
                auto eq = it->find('=');
                need(eq != std::string::npos && eq > 0 && eq + 1 < it->size(), ln,
                     "forbid terms must look like var=value");
                std::string var = it->substr(0, eq), val = it->substr(eq + 1);
                need(g.has_var(var), ln, "forbid references unknown variable " + var);
                need(!asg.count(var), ln, "variable " + var + " assigned twice in one constraint");
                asg[var] = val;
            }
            s.constraints.push_back(std::move(asg));
        } else {
            fail(ln, "unknown declaration '" + kw + "'");
        }
    }

    // Resolve relation pairs against the declared alphabets.
    for (const auto& [rname, pairs] : s.rel_pairs) {
        const Relation* r = g.find_rel(rname);
        auto vit = s.values.find(r->var);
        if (vit == s.values.end())
            throw KbError("relation " + rname + " over " + r->var + " but no values declared");
        const auto& vals = vit->second;
        const std::vector<std::string>* seconds = &vals;
        if (r->kind == RelKind::ValueObs) {
            auto oit = s.observations.find(r->var);
            if (oit == s.observations.end())
                throw KbError("vo relation " + rname + " but no observations declared for " +
                              r->var);
            seconds = &oit->second;
        }
        for (const auto& [a, b] : pairs) {
            if (std::find(vals.begin(), vals.end(), a) == vals.end())
                throw KbError("pair " + rname + " " + a + " " + b +
                              " references unknown value " + a);
            if (std::find(seconds->begin(), seconds->end(), b) == seconds->end())
                throw KbError("pair " + rname + " " + a + " " + b + " references unknown " +
                              (r->kind == RelKind::ValueObs ? "observation " : "value ") + b);
        }
    }

    // Hierarchy sanity: one derived root, no cycles, no conflicting parents.
    if (!s.hpairs.empty()) {
        std::map<std::string, std::string> parent;
        for (const auto& [c, p] : s.hpairs) {
            auto it = parent.find(c);
            if (it != parent.end() && it->second != p)
                throw KbError("hierarchy pair gives " + c + " two parents (" + it->second +
                              ", " + p + ")");
            parent[c] = p;
        }
        std::set<std::string> children, parents;
        for (const auto& [c, p] : parent) {
            children.insert(c);
            parents.insert(p);
        }
        std::vector<std::string> roots;
        for (const auto& p : parents)
            if (!children.count(p)) roots.push_back(p);
        if (roots.empty()) throw KbError("hierarchy pairs contain a cycle (no root reachable)");
        if (roots.size() > 1) {
            std::string msg = "hierarchy has a second root:";
            for (const auto& r : roots) msg += " " + r;
            throw KbError(msg);
        }
        for (const auto& [c, p] : parent) {
            (void)p;
            std::set<std::string> seen;
            std::string cur = c;
            while (parent.count(cur)) {
                if (!seen.insert(cur).second)
                    throw KbError("hierarchy pairs contain a cycle through " + cur);
                cur = parent.at(cur);
            }
        }
    }
    return s;
}

KnowledgeBase link_kb(const GeneralKb& g, const SpecificKb& s) {
    KnowledgeBase kb;
    kb.g = g;
    kb.s = s;
    for (auto& r : kb.g.rels) {
        auto it = s.rel_pairs.find(r.name);
        if (it != s.rel_pairs.end()) r.pairs = it->second;
    }
    if (!g.hier_var.empty() && !s.hpairs.empty()) {
        for (const auto& [c, p] : s.hpairs) kb.hier_parent[c] = p;
        std::set<std::string> children;
        for (const auto& [c, p] : kb.hier_parent) {
            (void)p;
            children.insert(c);
        }
        for (const auto& [c, p] : kb.hier_parent)
            if (!children.count(p)) kb.hier_root = p;
    }
    for (const auto& f : g.exec_forbids) {
        auto& dst = kb.forbidden_values[f.action];
        if (f.by_rel) {
            const Relation* r = kb.g.find_rel(f.rel);
            for (const auto& [a, b] : r->pairs) {
                (void)b;
                dst.insert(a);
            }
        } else {
            dst.insert(f.values.begin(), f.values.end());
        }
    }
    return kb;
}

std::map<std::string, double> expand_row(const KnowledgeBase& kb, const ProbEntry* begin,
                                         const ProbEntry* end, const std::string& action,
                                         const std::string& value) {
    std::map<std::string, double> row;
    for (const ProbEntry* e = begin; e != end; ++e) {
        if (e->action != action) continue;
        if (e->by_rel) {
            const Relation* r = kb.g.find_rel(e->rel);
            for (const auto& [a, b] : r->pairs)
                if (a == value) row[b] += e->prob;
        } else if (e->from == value) {
            row[e->to] += e->prob;
        }
    }
    return row;
}

std::map<std::string, double> expand_trans_row(const KnowledgeBase& kb, const std::string& action,
                                               const std::string& value) {
    const auto& v = kb.g.trans_entries;
    return expand_row(kb, v.data(), v.data() + v.size(), action, value);
}

std::map<std::string, double> expand_obs_row(const KnowledgeBase& kb, const std::string& action,
                                             const std::string& value) {
    const auto& v = kb.g.obs_entries;
    return expand_row(kb, v.data(), v.data() + v.size(), action, value);
}

}  // namespace hpomdp
