#include "hpomdp/bundle.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hpomdp/pomdp_io.hpp"
#include "hpomdp/textio.hpp"

namespace hpomdp {

namespace {

std::vector<std::string> header_line(std::istream& in, const char* kw) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks[0] != kw) throw TextError(std::string("bundle: expected '") + kw + "' line");
        return toks;
    }
    throw TextError(std::string("bundle: missing '") + kw + "' line");
}

void write_blob(std::ostream& out, const char* kw, const std::string& bytes) {
    out << kw << " " << bytes.size() << "\n" << bytes << "\n";
}

std::string read_blob(std::istream& in, const char* kw) {
    const auto toks = header_line(in, kw);
    const long n = parse_long(toks.at(1), kw);
    std::string bytes(static_cast<std::size_t>(n), '\0');
    in.read(bytes.data(), n);
    if (in.gcount() != n) throw TextError(std::string("bundle: truncated '") + kw + "' block");
    if (in.get() != '\n') throw TextError(std::string("bundle: unterminated '") + kw + "' block");
    return bytes;
}

void write_ints(std::ostream& out, const char* kw, const std::vector<int>& v) {
    out << kw << " " << v.size();
    for (int x : v) out << " " << x;
    out << "\n";
}

std::vector<int> read_ints(std::istream& in, const char* kw) {
    const auto toks = header_line(in, kw);
    const long n = parse_long(toks.at(1), kw);
    if (static_cast<long>(toks.size()) != 2 + n)
        throw TextError(std::string("bundle: '") + kw + "' arity mismatch");
    std::vector<int> v;
    v.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) v.push_back(static_cast<int>(parse_long(toks.at(2 + i), kw)));
    return v;
}

void write_local_model(std::ostream& out, const LocalModel& lm) {
    out << "localmodel " << lm.core_count << " " << lm.extra << " " << lm.absb_g << " "
        << lm.absb_ng << " " << lm.terminate << " " << lm.help << " " << lm.obs_none << " "
        << lm.obs_extra << "\n";
    write_ints(out, "lstates", lm.local_states);
    write_ints(out, "alower", lm.action_lower);
    out << "obsmap " << lm.obs_to_local.size();
    for (const auto& [k, v] : lm.obs_to_local) out << " " << k << " " << v;
    out << "\n";
    write_pomdp(out, lm.pomdp);
}

LocalModel read_local_model(std::istream& in) {
    const auto toks = header_line(in, "localmodel");
    LocalModel lm;
    lm.core_count = static_cast<int>(parse_long(toks.at(1), "localmodel"));
    lm.extra = static_cast<int>(parse_long(toks.at(2), "localmodel"));
    lm.absb_g = static_cast<int>(parse_long(toks.at(3), "localmodel"));
    lm.absb_ng = static_cast<int>(parse_long(toks.at(4), "localmodel"));
    lm.terminate = static_cast<int>(parse_long(toks.at(5), "localmodel"));
    lm.help = static_cast<int>(parse_long(toks.at(6), "localmodel"));
    lm.obs_none = static_cast<int>(parse_long(toks.at(7), "localmodel"));
    lm.obs_extra = static_cast<int>(parse_long(toks.at(8), "localmodel"));
    lm.local_states = read_ints(in, "lstates");
    lm.action_lower = read_ints(in, "alower");
    const auto om = header_line(in, "obsmap");
    const long n = parse_long(om.at(1), "obsmap");
    for (long i = 0; i < n; ++i)
        lm.obs_to_local[static_cast<int>(parse_long(om.at(2 + 2 * i), "obsmap"))] =
            static_cast<int>(parse_long(om.at(3 + 2 * i), "obsmap"));
    for (std::size_t i = 0; i < lm.local_states.size(); ++i)
        lm.to_local[lm.local_states[i]] = static_cast<int>(i);
    lm.pomdp = read_pomdp(in);
    return lm;
}

}  // namespace

void write_bundle(std::ostream& out, const Bundle& b) {
    out << "hpomdp-bundle 1\n";
    write_blob(out, "general", b.general_text);
    write_blob(out, "specific", b.specific_text);
    const HierarchyParams& hp = b.hier.params;
    out << "params " << hp.sim_count << " " << fmt_double(hp.reward_magnitude) << " " << hp.seed
        << " " << hp.jobs << "\n";
    const SolverParams& sp = hp.solver;
    out << "solver " << sp.belief_points << " " << sp.expansions << " " << sp.backup_sweeps << " "
        << fmt_double(sp.epsilon) << " " << sp.seed << " " << sp.jobs << "\n";
    out << "levels " << b.hier.levels.size() << "\n";
    for (const auto& lvl : b.hier.levels) {
        out << "level " << lvl.height << " " << lvl.state_nodes.size() << " " << lvl.actions.size()
            << "\n";
        write_ints(out, "nodes", lvl.state_nodes);
        write_ints(out, "asrc", lvl.action_source_state);
        write_pomdp(out, lvl.dyn);
        for (const auto& aa : lvl.actions) {
            out << "action " << aa.source_node << " " << aa.target_node << " " << aa.height << " "
                << fmt_double(aa.discarded_fraction) << " " << aa.truncated_sims << " "
                << (aa.fallback_row ? 1 : 0) << "\n";
            out << "outcome " << aa.outcome_row.size();
            for (const auto& [i, q] : aa.outcome_row) out << " " << i << " " << fmt_double(q);
            out << "\n";
            write_local_model(out, aa.local);
            write_policy(out, aa.policy);
        }
        out << "end level\n";
    }
    out << "end bundle\n";
}

Bundle read_bundle(std::istream& in) {
    header_line(in, "hpomdp-bundle");
    Bundle b;
    b.general_text = read_blob(in, "general");
    b.specific_text = read_blob(in, "specific");
    const auto pt = header_line(in, "params");
    b.hier.params.sim_count = static_cast<int>(parse_long(pt.at(1), "params"));
    b.hier.params.reward_magnitude = parse_double(pt.at(2), "params");
    b.hier.params.seed = static_cast<std::uint64_t>(std::stoull(pt.at(3)));
    b.hier.params.jobs = static_cast<int>(parse_long(pt.at(4), "params"));
    const auto st = header_line(in, "solver");
    b.hier.params.solver.belief_points = static_cast<int>(parse_long(st.at(1), "solver"));
    b.hier.params.solver.expansions = static_cast<int>(parse_long(st.at(2), "solver"));
    b.hier.params.solver.backup_sweeps = static_cast<int>(parse_long(st.at(3), "solver"));
    b.hier.params.solver.epsilon = parse_double(st.at(4), "solver");
    b.hier.params.solver.seed = static_cast<std::uint64_t>(std::stoull(st.at(5)));
    b.hier.params.solver.jobs = static_cast<int>(parse_long(st.at(6), "solver"));
    const auto lt = header_line(in, "levels");
    const long n_levels = parse_long(lt.at(1), "levels");
    for (long i = 0; i < n_levels; ++i) {
        const auto lh = header_line(in, "level");
        HierarchyLevel lvl;
        lvl.height = static_cast<int>(parse_long(lh.at(1), "level"));
        const long n_states = parse_long(lh.at(2), "level");
        const long n_actions = parse_long(lh.at(3), "level");
        lvl.state_nodes = read_ints(in, "nodes");
        lvl.action_source_state = read_ints(in, "asrc");
        if (static_cast<long>(lvl.state_nodes.size()) != n_states ||
            static_cast<long>(lvl.action_source_state.size()) != n_actions)
            throw TextError("bundle: level size mismatch");
        for (std::size_t k = 0; k < lvl.state_nodes.size(); ++k)
            lvl.node_state[lvl.state_nodes[k]] = static_cast<int>(k);
        lvl.dyn = read_pomdp(in);
        for (long a = 0; a < n_actions; ++a) {
            const auto at = header_line(in, "action");
            AbstractAction aa;
            aa.source_node = static_cast<int>(parse_long(at.at(1), "action"));
            aa.target_node = static_cast<int>(parse_long(at.at(2), "action"));
            aa.height = static_cast<int>(parse_long(at.at(3), "action"));
            aa.discarded_fraction = parse_double(at.at(4), "action");
            aa.truncated_sims = static_cast<int>(parse_long(at.at(5), "action"));
            aa.fallback_row = parse_long(at.at(6), "action") != 0;
            const auto ot = header_line(in, "outcome");
            const long n_out = parse_long(ot.at(1), "outcome");
            for (long j = 0; j < n_out; ++j)
                aa.outcome_row.emplace_back(
                    static_cast<int>(parse_long(ot.at(2 + 2 * j), "outcome")),
                    parse_double(ot.at(3 + 2 * j), "outcome"));
            aa.local = read_local_model(in);
            aa.policy = read_policy(in);
            lvl.actions.push_back(std::move(aa));
        }
        header_line(in, "end");
        b.hier.levels.push_back(std::move(lvl));
    }
    header_line(in, "end");
    return b;
}

void save_bundle(const std::string& path, const Bundle& b) {
    std::ostringstream out;
    write_bundle(out, b);
    write_file(path, out.str());
}

Bundle load_bundle(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_bundle(in);
}

}  // namespace hpomdp
