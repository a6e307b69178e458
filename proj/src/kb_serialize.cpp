#include <sstream>

#include "hpomdp/kb.hpp"

namespace hpomdp {

// Canonical text emission. parse(serialize(x)) reproduces x structurally,
// including declaration order.

std::string serialize_general(const GeneralKb& g) {
    std::ostringstream out;
    // Actions are grouped under their owning module; emit module headers in
    // declaration order and the variables first so references resolve.
    for (const auto& v : g.vars) out << "var " << v << "\n";
    for (const auto& r : g.rels)
        out << "rel " << r.name << " " << (r.kind == RelKind::ValueValue ? "vv" : "vo")
            << " over " << r.var << "\n";
    for (const auto& m : g.modules) {
        out << "module " << m << "\n";
        for (const auto& a : g.actions)
            if (a.module == m) out << "action " << a.name << " modifies " << a.var << "\n";
    }
    auto emit_entry = [&out](const char* kw, const ProbEntry& e) {
        out << kw << " " << e.action << " ";
        if (e.by_rel)
            out << "rel " << e.rel;
        else
            out << e.from << " " << e.to;
        out << " " << fmt_double(e.prob) << "\n";
    };
    for (const auto& e : g.trans_entries) emit_entry("trans", e);
    for (const auto& e : g.obs_entries) emit_entry("obs", e);
    if (!g.hier_var.empty()) out << "hier over " << g.hier_var << "\n";
    for (const auto& f : g.exec_forbids) {
        out << "exec-forbid " << f.action << " when";
        if (f.by_rel) {
            out << " rel " << f.rel;
        } else {
            for (const auto& v : f.values) out << " " << v;
        }
        out << "\n";
    }
    return out.str();
}

std::string serialize_specific(const SpecificKb& s) {
    std::ostringstream out;
    for (const auto& [var, vals] : s.values) {
        out << "values " << var;
        for (const auto& v : vals) out << " " << v;
        out << "\n";
    }
    for (const auto& [var, obs] : s.observations) {
        out << "observations " << var;
        for (const auto& o : obs) out << " " << o;
        out << "\n";
    }
    if (!s.abstract_values.empty()) {
        out << "abstract";
        for (const auto& a : s.abstract_values) out << " " << a;
        out << "\n";
    }
    for (const auto& [rel, pairs] : s.rel_pairs)
        for (const auto& [a, b] : pairs) out << "pair " << rel << " " << a << " " << b << "\n";
    for (const auto& [c, p] : s.hpairs) out << "hpair " << c << " " << p << "\n";
    for (const auto& cons : s.constraints) {
        out << "forbid";
        for (const auto& [var, val] : cons) out << " " << var << "=" << val;
        out << "\n";
    }
    return out.str();
}

}  // namespace hpomdp
