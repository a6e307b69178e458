#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpomdp/kb.hpp"
#include "hpomdp/pomdp.hpp"

namespace hpomdp {

struct GroundingError : std::runtime_error {
    explicit GroundingError(const std::string& m) : std::runtime_error(m) {}
};

// Fully concrete POMDP grounded from a validated knowledge base. Reward and
// initial belief are deliberately absent; they are attached per task.
struct BottomPomdp {
    Pomdp pomdp;
    std::vector<std::vector<std::string>> state_tuples;  // state -> value per variable
    std::map<std::string, int> state_index;              // joined label -> state
    std::map<std::string, int> obs_index;                // observation id -> index

    int find_state(const std::string& label) const {
        auto it = state_index.find(label);
        return it == state_index.end() ? -1 : it->second;
    }
    int find_obs(const std::string& id) const {
        auto it = obs_index.find(id);
        return it == obs_index.end() ? -1 : it->second;
    }
};

// States are the cross product of the variable alphabets (declaration order,
// first variable most significant) minus constraint-forbidden tuples; mass
// that pointed at a pruned tuple moves to the self-transition. Execution-
// forbidden (state, action) pairs become observed deterministic self-loops.
BottomPomdp build_bottom(const KnowledgeBase& kb);

// Ordered state pairs related by a value-value relation appearing in some
// action's transition entries: the ground truth for lifted adjacency.
std::set<std::pair<int, int>> neighbor_pairs_bottom(const KnowledgeBase& kb,
                                                    const BottomPomdp& bp);

}  // namespace hpomdp
