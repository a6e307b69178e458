#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hpomdp/rng.hpp"

namespace hpomdp {

// Probability row stored sparse: (index, prob) entries sorted by index, all
// probs strictly positive.
using SparseRow = std::vector<std::pair<int, double>>;

double row_sum(const SparseRow& r);
double row_get(const SparseRow& r, int idx);
// Draws from a categorical row with one rng draw.
int sample_row(const SparseRow& r, Rng& rng);
// Same contract for a dense probability vector.
int sample_dense(const std::vector<double>& p, Rng& rng);

// Discrete POMDP <S, A, Phi, R, O, Omega> with the observation function
// conditioned on the arrival state: Omega(s', a, o) = P(o | s', a).
// A bottom-level model simply carries an empty reward map.
struct Pomdp {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> observations;
    std::vector<SparseRow> trans;    // index s * |A| + a, row over arrival states
    std::vector<SparseRow> obs;      // index s' * |A| + a, row over observations
    std::unordered_map<std::uint64_t, double> reward;  // (s,a,s') -> r
    double discount = 0.95;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_actions() const { return static_cast<int>(actions.size()); }
    int num_observations() const { return static_cast<int>(observations.size()); }

    const SparseRow& T(int s, int a) const { return trans[std::size_t(s) * actions.size() + a]; }
    SparseRow& T(int s, int a) { return trans[std::size_t(s) * actions.size() + a]; }
    const SparseRow& Z(int s2, int a) const { return obs[std::size_t(s2) * actions.size() + a]; }
    SparseRow& Z(int s2, int a) { return obs[std::size_t(s2) * actions.size() + a]; }

    std::uint64_t rkey(int s, int a, int s2) const {
        return (std::uint64_t(s) * actions.size() + a) * states.size() + s2;
    }
    void set_reward(int s, int a, int s2, double r) { reward[rkey(s, a, s2)] = r; }
    double reward_at(int s, int a, int s2) const {
        auto it = reward.find(rkey(s, a, s2));
        return it == reward.end() ? 0.0 : it->second;
    }
    bool has_reward(int s, int a, int s2) const { return reward.count(rkey(s, a, s2)) != 0; }

    void alloc_rows() {
        trans.assign(states.size() * actions.size(), {});
        obs.assign(states.size() * actions.size(), {});
    }
};

// Structural checks: every row sums to 1 within 1e-9, entries sorted and
// positive, and (when require_rewards) a reward defined wherever Phi > 0.
std::vector<std::string> check_pomdp(const Pomdp& p, bool require_rewards);

struct Belief {
    std::vector<double> p;
    int size() const { return static_cast<int>(p.size()); }
};

Belief delta_belief(int n, int s);
Belief uniform_belief(int n);

struct BeliefUpdateResult {
    Belief b;
    // False when the observation had zero predicted likelihood; b then holds
    // the prediction-only belief.
    bool consistent = true;
};
BeliefUpdateResult belief_update(const Pomdp& p, const Belief& b, int a, int o);

struct AlphaVector {
    int action = 0;
    std::vector<double> v;
};

struct Policy {
    std::vector<AlphaVector> alphas;
    bool empty() const { return alphas.empty(); }
};

struct ActionChoice {
    int action = -1;
    double value = 0.0;
    int alpha_index = -1;
};
// Argmax over alpha vectors; exact ties resolve to the lowest vector index.
ActionChoice best_action(const Policy& pol, const Belief& b);
double policy_value(const Policy& pol, const Belief& b);

struct StepSample {
    int state = -1;
    int obs = -1;
};
// Consumes exactly two rng draws: arrival state, then observation.
StepSample sample_step(const Pomdp& p, int s, int a, Rng& rng);

struct TraceStep {
    int state = -1;  // arrival state
    int action = -1;
    int obs = -1;
    Belief belief;  // belief after the update for this step
};
struct Trace {
    std::vector<TraceStep> steps;
    int final_state = -1;
    bool truncated = false;
    bool obs_inconsistent = false;  // any update hit a zero-likelihood observation
};
// Runs the policy from true state s0 and belief b0 until the chosen action
// satisfies stop_action (checked before executing it) or max_steps is hit.
Trace simulate_policy(const Pomdp& p, const Policy& pol, int s0, const Belief& b0,
                      const std::function<bool(int)>& stop_action, int max_steps, Rng& rng);

}  // namespace hpomdp
