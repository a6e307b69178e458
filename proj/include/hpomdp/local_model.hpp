#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpomdp/pomdp.hpp"

namespace hpomdp {

// Local POMDP carved out of a lower-level model. The same construction backs
// abstract actions, per-level local policies and the flat baselines; the spec
// below selects which special states/actions exist and which reward shape the
// terminate action takes.

struct LocalModelError : std::runtime_error {
    explicit LocalModelError(const std::string& m) : std::runtime_error(m) {}
};

struct LocalModelSpec {
    std::vector<int> core;     // lower-level state indices the policy lives in
    std::vector<int> outside;  // neighboring lower-level states kept in the model
    std::set<int> goal;        // terminate goes to absb_g from these
    std::set<int> exempt;      // destinations that do not draw the big penalty
    bool with_extra = false;
    bool with_help = false;
    // Terminate reward shape: true rewards only the goal states (single-goal
    // form), false rewards leaving the core (transit form).
    bool goal_only_terminate_reward = false;
    // Terminate from extra self-loops instead of falling to absb_ng.
    bool extra_terminate_self_loop = false;
    double reward_magnitude = 100.0;
};

struct LocalModel {
    Pomdp pomdp;
    std::vector<int> local_states;  // local non-special index -> lower state
    std::map<int, int> to_local;    // lower state -> local non-special index
    int core_count = 0;             // local_states[0..core_count) are core
    int extra = -1;                 // local state indices; -1 when absent
    int absb_g = -1;
    int absb_ng = -1;
    int terminate = -1;             // local action indices; -1 when absent
    int help = -1;
    int obs_none = -1;              // local observation indices
    int obs_extra = -1;
    std::vector<int> action_lower;  // local action -> lower action; -1 specials
    std::map<int, int> obs_to_local;

    int num_plain_states() const { return static_cast<int>(local_states.size()); }
    bool is_special_action(int a) const { return a == terminate || a == help; }
    // Observation produced by a lower-level observation during local
    // filtering; unmodeled observations collapse onto the extra observation.
    int map_obs(int lower_obs) const;
};

// `lower_action_source` gives, per lower action, the lower state the action is
// designed to leave (abstract actions only); null when lower actions are
// concrete. Rewards then add the wrong-source penalty and action relevance
// checks the designed source instead of scanning every row.
LocalModel build_local_model(const Pomdp& lower, const std::vector<int>* lower_action_source,
                             const LocalModelSpec& spec);

}  // namespace hpomdp
