#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpomdp/envgen.hpp"
#include "hpomdp/executive.hpp"
#include "hpomdp/gridworld.hpp"
#include "hpomdp/grounding.hpp"
#include "hpomdp/hierarchy.hpp"
#include "hpomdp/kb.hpp"
#include "hpomdp/pbvi.hpp"
#include "hpomdp/sst.hpp"

namespace hpomdp {

struct MethodError : std::runtime_error {
    explicit MethodError(const std::string& m) : std::runtime_error(m) {}
};

struct Task {
    int start_cell = -1;
    int goal_cell = -1;
};

struct RunRecord {
    std::string method;  // FP | TLP | HP
    int start_cell = -1;
    int goal_cell = -1;
    int final_cell = -1;
    bool success = false;
    long concrete_actions = 0;
    int sp_start_goal = 0;
    int sp_final_goal = 0;
    double plan_seconds = 0.0;  // per-task planning
    double init_seconds = 0.0;  // amortized phase of the method's setup
    std::string error;          // empty on a clean run
};

// One grounded benchmark environment, shared by all methods and runs.
struct NavInstance {
    GridWorld world;
    KnowledgeBase kb;
    BottomPomdp bp;
    Sst sst;
    NeighborIndex ni;
    BeliefMode belief_mode = BeliefMode::known_start;
    std::vector<int> cell_state;  // world cell -> bottom state
    std::vector<int> state_cell;  // bottom state -> world cell

    int state_of_cell(int c) const { return cell_state.at(static_cast<std::size_t>(c)); }
    int cell_of_state(int s) const { return state_cell.at(static_cast<std::size_t>(s)); }
};

NavInstance ground_environment(const EnvConfig& cfg);

// Bottom belief the run starts from: a delta at the start cell or uniform
// over every cell, per the instance's mode. The simulated world always starts
// at the true start cell.
Belief initial_nav_belief(const NavInstance& inst, const Task& task);

long concrete_budget(const NavInstance& inst);  // 50 actions per cell

// Flat baseline: one POMDP over every cell with terminate paying off only at
// the goal, solved per task, executed with the shared termination rule.
RunRecord run_fp(const NavInstance& inst, const Task& task, const SolverParams& solver,
                 std::uint64_t seed);

// Two-level baseline. The init phase solves one transit policy per ordered
// adjacent building pair; per task it searches a building path, executes the
// transit policies in sequence, then solves a POMDP over the goal building's
// cells for the final leg. Needs to know the start building, so it refuses a
// uniform initial belief.
struct TlpHop {
    LocalModel lm;
    Policy pol;
};
struct TlpInit {
    std::map<std::pair<int, int>, TlpHop> hops;  // (from building, to building)
    double init_seconds = 0.0;
};
TlpInit tlp_init(const NavInstance& inst, const SolverParams& solver, std::uint64_t seed);
RunRecord run_tlp(const NavInstance& inst, const TlpInit& init, const Task& task,
                  const SolverParams& solver, std::uint64_t seed);

// Hierarchical method: the hierarchy is built once per environment; per task
// a hierarchical policy is assembled and executed.
struct HpInit {
    Hierarchy hier;
    double init_seconds = 0.0;
};
HpInit hp_init(const NavInstance& inst, const HierarchyParams& params);
RunRecord run_hp(const NavInstance& inst, const HpInit& init, const Task& task,
                 const SolverParams& solver, std::uint64_t seed);

}  // namespace hpomdp
