#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpomdp/grounding.hpp"

namespace hpomdp {

// State-space tree over the bottom POMDP. Leaves are the BP states and share
// their indices (node i == BP state i for i < num BP states); upper levels are
// appended in first-occurrence order, the root last. The root has height 0 and
// the leaves sit at `depth`.

struct SstError : std::runtime_error {
    explicit SstError(const std::string& m) : std::runtime_error(m) {}
};

struct SstNode {
    std::string id;      // full state label (hierarchical component substituted)
    std::string hvalue;  // value of the hierarchical variable at this node
    int parent = -1;
    std::vector<int> children;  // ascending node indices
    int height = 0;
    int leaf_state = -1;  // BP state index for leaves, -1 above
};

struct Sst {
    std::vector<SstNode> nodes;
    int root = -1;
    int depth = 0;
    std::vector<std::vector<int>> by_height;  // height -> nodes in creation order

    int num_leaves() const { return static_cast<int>(by_height.empty() ? 0 : by_height[depth].size()); }
    // Ancestor of `node` at `height` (walk toward the root).
    int ancestor_at(int node, int height) const;
};

Sst build_sst(const KnowledgeBase& kb, const BottomPomdp& bp);

// Node path [root, ..., leaf] for a BP state; length depth+1.
std::vector<int> hierarchical_state(const Sst& sst, int bp_state);

struct NeighborIndex {
    // Ordered neighbor node pairs grouped by height; height `depth` equals the
    // bottom pairs, each upper level is the distinct-parent lift of the one
    // below.
    std::map<int, std::set<std::pair<int, int>>> pairs;
    std::map<int, std::vector<int>> adj;  // node -> neighbors, ascending

    const std::vector<int>& neighbors_of(int node) const;
};

NeighborIndex lift_neighbors(const Sst& sst, const std::set<std::pair<int, int>>& bottom_pairs);

}  // namespace hpomdp
