#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpomdp/grounding.hpp"
#include "hpomdp/local_model.hpp"
#include "hpomdp/pbvi.hpp"
#include "hpomdp/sst.hpp"

namespace hpomdp {

struct HierarchyError : std::runtime_error {
    explicit HierarchyError(const std::string& m) : std::runtime_error(m) {}
};

// One abstract action: a solved local POMDP that tries to move the agent from
// every child of `source_node` into a child of `target_node`, plus the
// simulated outcome distribution used as its transition row one level up.
struct AbstractAction {
    int source_node = -1;
    int target_node = -1;
    int height = 0;  // the action moves between states at this height
    LocalModel local;
    Policy policy;
    SparseRow outcome_row;  // over the owning level's state indices
    double discarded_fraction = 0.0;
    int truncated_sims = 0;
    bool fallback_row = false;  // every simulation left the neighborhood
};

// Dynamics at one height: states are the SST nodes at `height`, actions the
// abstract actions between them, observations one per state (certainty).
struct HierarchyLevel {
    int height = 0;
    Pomdp dyn;
    std::vector<int> state_nodes;  // level state index -> sst node
    std::map<int, int> node_state;
    std::vector<AbstractAction> actions;        // parallel to dyn.actions
    std::vector<int> action_source_state;       // level state index per action
};

struct HierarchyParams {
    int sim_count = 100;
    double reward_magnitude = 100.0;
    SolverParams solver;  // per-action seeds derive from `seed`, not solver.seed
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct Hierarchy {
    std::vector<HierarchyLevel> levels;  // heights depth-1 down through 1
    HierarchyParams params;

    const HierarchyLevel* level_at_height(int h) const;
};

// Local POMDP over the lower-level states around source_node. `lower_node_state`
// maps SST nodes to lower dynamic state indices (null when the lower level is
// the bottom POMDP, where leaves share indices with states).
LocalModel build_abstract_pomdp(const Sst& sst, const NeighborIndex& ni, int source_node,
                                int target_node, const Pomdp& lower_dyn,
                                const std::vector<int>* lower_action_source,
                                const std::map<int, int>* lower_node_state,
                                double reward_magnitude);

struct OutcomeEstimate {
    std::map<int, double> node_prob;  // sst node at the action's height -> probability
    double discarded_fraction = 0.0;
    int truncated = 0;
    bool fallback = false;
};

// Monte-Carlo estimate of where executing the policy leaves the agent, as a
// distribution over `counted_nodes` (the source and its neighbors). Each of
// the sim_count runs starts at a uniformly drawn plain local state with a
// delta belief and steps the true state through the lower dynamics until the
// policy terminates or 20*|local states| steps pass.
OutcomeEstimate estimate_outcome_row(const LocalModel& local, const Policy& pol,
                                     const Pomdp& lower_dyn,
                                     const std::vector<int>* lower_state_nodes, const Sst& sst,
                                     const std::vector<int>& counted_nodes, int source_node,
                                     int sim_count, std::uint64_t seed);

Hierarchy build_hierarchy(const BottomPomdp& bp, const Sst& sst, const NeighborIndex& ni,
                          const HierarchyParams& params);

}  // namespace hpomdp
