#include "hpomdp/sst.hpp"

#include <algorithm>

namespace hpomdp {

namespace {

std::string join_label(const std::vector<std::string>& tuple) {
    std::string out;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out += '&';
        out += tuple[i];
    }
    return out;
}

int var_position(const GeneralKb& g, const std::string& var) {
    for (std::size_t i = 0; i < g.vars.size(); ++i)
        if (g.vars[i] == var) return static_cast<int>(i);
    return -1;
}

}  // namespace

int Sst::ancestor_at(int node, int height) const {
    int n = node;
    while (n >= 0 && nodes[n].height > height) n = nodes[n].parent;
    if (n < 0 || nodes[n].height != height)
        throw SstError("no ancestor of node " + nodes[node].id + " at height " + std::to_string(height));
    return n;
}

Sst build_sst(const KnowledgeBase& kb, const BottomPomdp& bp) {
    if (kb.g.hier_var.empty()) throw SstError("knowledge base declares no hierarchy");
    const int vpos = var_position(kb.g, kb.g.hier_var);
    if (vpos < 0) throw SstError("hierarchical variable not declared");

    // The tree abstracts only the hierarchical variable, so the remaining
    // components must be constant across states or the chains never meet.
    const int n_states = bp.pomdp.num_states();
    for (int s = 0; s < n_states; ++s)
        for (std::size_t v = 0; v < bp.state_tuples[s].size(); ++v)
            if (static_cast<int>(v) != vpos && bp.state_tuples[s][v] != bp.state_tuples[0][v])
                throw SstError("hierarchy requires all non-hierarchical variables to be single-valued");

    auto parent_value = [&kb](const std::string& v) -> const std::string& {
        auto it = kb.hier_parent.find(v);
        if (it == kb.hier_parent.end())
            throw SstError("value " + v + " has no parent in the hierarchy");
        return it->second;
    };

    // Chain length from each leaf value to the root; all must agree.
    int depth = -1;
    for (int s = 0; s < n_states; ++s) {
        std::string v = bp.state_tuples[s][vpos];
        int steps = 0;
        const int cap = static_cast<int>(kb.hier_parent.size()) + 1;
        while (v != kb.hier_root) {
            v = parent_value(v);
            if (++steps > cap) throw SstError("hierarchy chain does not reach the root");
        }
        if (depth < 0) depth = steps;
        if (steps != depth)
            throw SstError("ragged hierarchy: leaf " + bp.pomdp.states[s] + " sits at depth " +
                           std::to_string(steps) + ", expected " + std::to_string(depth));
    }
    if (depth <= 0) throw SstError("hierarchy has no abstraction levels");

    Sst sst;
    sst.depth = depth;
    sst.by_height.assign(depth + 1, {});

    for (int s = 0; s < n_states; ++s) {
        SstNode n;
        n.id = bp.pomdp.states[s];
        n.hvalue = bp.state_tuples[s][vpos];
        n.height = depth;
        n.leaf_state = s;
        sst.by_height[depth].push_back(static_cast<int>(sst.nodes.size()));
        sst.nodes.push_back(std::move(n));
    }

    std::vector<int> cur = sst.by_height[depth];
    for (int h = depth - 1; h >= 0; --h) {
        std::map<std::string, int> made;  // hvalue -> node index at this height
        for (int child : cur) {
            const std::string& pv = parent_value(sst.nodes[child].hvalue);
            auto it = made.find(pv);
            if (it == made.end()) {
                SstNode n;
                n.hvalue = pv;
                auto tuple = bp.state_tuples[0];
                tuple[vpos] = pv;
                n.id = join_label(tuple);
                n.height = h;
                int idx = static_cast<int>(sst.nodes.size());
                sst.nodes.push_back(std::move(n));
                sst.by_height[h].push_back(idx);
                it = made.emplace(pv, idx).first;
            }
            sst.nodes[child].parent = it->second;
            sst.nodes[it->second].children.push_back(child);
        }
        cur = sst.by_height[h];
    }

    if (sst.by_height[0].size() != 1)
        throw SstError("hierarchy does not converge to a single root");
    sst.root = sst.by_height[0][0];
    return sst;
}

std::vector<int> hierarchical_state(const Sst& sst, int bp_state) {
    if (bp_state < 0 || bp_state >= sst.num_leaves())
        throw SstError("state index " + std::to_string(bp_state) + " is not a leaf");
    std::vector<int> path;
    for (int n = bp_state; n >= 0; n = sst.nodes[n].parent) path.push_back(n);
    std::reverse(path.begin(), path.end());
    return path;
}

const std::vector<int>& NeighborIndex::neighbors_of(int node) const {
    static const std::vector<int> none;
    auto it = adj.find(node);
    return it == adj.end() ? none : it->second;
}

NeighborIndex lift_neighbors(const Sst& sst, const std::set<std::pair<int, int>>& bottom_pairs) {
    NeighborIndex ni;
    ni.pairs[sst.depth] = bottom_pairs;
    for (int h = sst.depth - 1; h >= 0; --h) {
        auto& up = ni.pairs[h];
        for (const auto& [a, b] : ni.pairs[h + 1]) {
            int pa = sst.nodes[a].parent;
            int pb = sst.nodes[b].parent;
            if (pa != pb) up.emplace(pa, pb);
        }
    }
    for (const auto& [h, ps] : ni.pairs)
        for (const auto& [a, b] : ps) ni.adj[a].push_back(b);
    for (auto& [node, vec] : ni.adj) {
        std::sort(vec.begin(), vec.end());
        vec.erase(std::unique(vec.begin(), vec.end()), vec.end());
    }
    return ni;
}

}  // namespace hpomdp
