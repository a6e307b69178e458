#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpomdp/grounding.hpp"
#include "hpomdp/hierarchy.hpp"
#include "hpomdp/local_model.hpp"
#include "hpomdp/pomdp.hpp"
#include "hpomdp/rng.hpp"
#include "hpomdp/sst.hpp"

namespace hpomdp {

struct ExecutiveError : std::runtime_error {
    explicit ExecutiveError(const std::string& m) : std::runtime_error(m) {}
};

// Belief over every SST node, indexed by node id. The leaf entries are the
// bottom-level belief; every upper node carries the sum over its children, so
// any height slice reads off as a marginal without recomputation.
using GlobalBelief = std::vector<double>;

GlobalBelief make_global_belief(const Sst& sst, const Belief& bottom);

// Recompute every non-leaf entry bottom-up from the leaf layer.
void refresh_upper(const Sst& sst, GlobalBelief& gb);

// Bayes step on the leaf layer for a concrete action and observation, then an
// upward resum. Returns false when the observation had zero predicted
// likelihood; the leaf layer then holds the prediction-only belief.
bool update_global_belief(const Sst& sst, const Pomdp& bottom, GlobalBelief& gb, int a, int o);

// Project the height slice of the global belief into a local model's space:
// in-space states copy their node's mass, everything else pools into extra,
// absorbing states stay at zero. `level` supplies the node-to-state map for
// abstract slices and must be null when states_height == sst.depth. When
// out_probs is non-null it receives the mass of every out-of-space node at
// that height, zeros included, in level order. Out-of-space mass without an
// extra state is a coverage violation.
Belief map_belief_to_local(const GlobalBelief& gb, const Sst& sst, const LocalModel& lm,
                           int states_height, const HierarchyLevel* level,
                           std::vector<double>* out_probs = nullptr);

// Confidence discount on the escape value before action selection. With E the
// entropy of the out-of-space masses (normalized) and E_max the entropy of
// the uniform distribution over the same count, the extra coordinate a of
// every alpha vector becomes a / (1 + |a * E/E_max|); no other coordinate
// changes. A concentrated escape (E = 0) leaves the value function untouched,
// a fully uniform one applies the largest discount. The extra state stands
// for many states at once, so the more dispersed the escape mass is, the less
// its trained value can be trusted.
Policy entropy_weight(const Policy& pol, int extra_index, const std::vector<double>& out_probs);

// Where concrete actions go. step() executes one bottom-level action and
// returns the observation index it produced.
struct EnvironmentPort {
    virtual ~EnvironmentPort() = default;
    virtual int step(int action) = 0;
};

// Samples a POMDP as the world: hidden true state, observation drawn from the
// arrival state's kernel.
class SimEnv final : public EnvironmentPort {
  public:
    SimEnv(const Pomdp& p, int start, std::uint64_t seed) : p_(&p), state_(start), rng_(seed) {}
    int step(int action) override;
    int true_state() const { return state_; }

  private:
    const Pomdp* p_;
    int state_;
    Rng rng_;
};

// One executable policy layer: a solved local model whose plain states live
// at states_height. `level` points at the dynamics those states belong to and
// resolves non-special actions to the abstract actions they stand for; null
// means the actions are concrete.
struct RunnablePolicy {
    const LocalModel* lm = nullptr;
    const Policy* pol = nullptr;
    int states_height = 0;
    const HierarchyLevel* level = nullptr;
};

struct ExecParams {
    int invocation_budget_factor = 20;  // times the local state count
    long max_concrete = -1;             // total concrete actions; -1 unbounded
    int oscillation_limit = 20;         // consecutive stage switches without a concrete step
};

struct ExecutionContext {
    const Sst* sst = nullptr;
    const Pomdp* bottom = nullptr;
    const Hierarchy* hier = nullptr;  // required only when abstract actions run
    EnvironmentPort* env = nullptr;
    GlobalBelief gb;
    ExecParams params;
    long concrete_actions = 0;
    long truncated_invocations = 0;
    bool out_of_budget = false;
};

// Runs one policy to its special action: project the global belief, discount
// the escape mass, execute the best action (stepping the environment or
// recursing into the chosen abstract action, whose own special return is
// dropped), repeat. A run that spends invocation_budget_factor * |local
// states| executions without going special is truncated and ends with help
// when the model has it, terminate otherwise. Returns the local index of the
// ending special action.
int execute_policy(ExecutionContext& ctx, const RunnablePolicy& rp);

// One stage of a hierarchical policy: drive the height slice of the belief
// into goal_node.
struct LocalPolicy {
    int height = 0;
    int goal_node = -1;
    LocalModel lm;
    Policy pol;
};

struct HierarchicalPolicy {
    std::vector<int> goal_path;    // root .. goal leaf, one node per height
    std::vector<LocalPolicy> lps;  // stages at heights 1 .. depth
};

// Local POMDP for the stage at `height` of the goal path: the siblings of the
// stage goal form the core, their neighbors the surroundings, and terminate
// pays off only at the goal. Stages below the first carry an extra state and
// a help action so the policy can hand control back when the belief escapes.
LocalModel build_stage_model(const BottomPomdp& bp, const Sst& sst, const NeighborIndex& ni,
                             const Hierarchy& hier, const std::vector<int>& goal_path, int height,
                             double reward_magnitude);

// Stage models plus their solved policies for a goal leaf. Each stage is
// seeded with the task belief projected into its space and with deltas at its
// goal and the goal's in-space neighbors.
HierarchicalPolicy build_hierarchical_policy(const BottomPomdp& bp, const Sst& sst,
                                             const NeighborIndex& ni, const Hierarchy& hier,
                                             int goal_leaf, const GlobalBelief& gb0,
                                             const SolverParams& base, std::uint64_t seed);

// Solver profile for one per-task stage solve. Stage models are sequencing
// problems of at most a few dozen states, so every stage runs on a compact
// point budget; abstract stages, whose dynamics are the near-deterministic
// outcome rows of solved actions, also get a short sweep budget. Their
// greedy structure settles within a few value sweeps, and the cheap upper
// stages keep per-task planning cost tied to stage fan-out, not world size.
SolverParams stage_solver_profile(const SolverParams& base, bool concrete_stage);

struct ControlTransfer {
    int stage = 0;      // stage index that ran
    bool help = false;  // ended asking for help (else it terminated)
};

struct HierarchicalRunResult {
    bool completed = false;         // walked off the last stage
    bool budget_exhausted = false;  // hit params.max_concrete
    bool oscillated = false;        // stages kept bouncing without acting
    long concrete_actions = 0;
    long truncated_invocations = 0;
    std::vector<ControlTransfer> control_log;  // every stage run, in order
};

// Runs the stages in order, starting from the most abstract: terminate moves
// one stage down toward the goal, help moves one back up.
HierarchicalRunResult execute_hierarchical_policy(ExecutionContext& ctx,
                                                  const HierarchicalPolicy& hp);

}  // namespace hpomdp
