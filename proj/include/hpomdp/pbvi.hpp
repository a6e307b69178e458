#pragma once

#include <cstdint>
#include <vector>

#include "hpomdp/pomdp.hpp"

namespace hpomdp {

struct SolverParams {
    int belief_points = 128;  // cap on the belief set size
    int expansions = 4;       // belief-expansion rounds between sweep phases
    int backup_sweeps = 60;   // total sweep budget, split across phases
    double epsilon = 1e-3;    // per-phase stop: max point improvement below this
    std::uint64_t seed = 0;   // drives belief expansion sampling only
    int jobs = 1;             // >1 backs up points in parallel; results identical
};

struct SolveStats {
    int sweeps_run = 0;
    int points = 0;
    int alphas = 0;
    double last_delta = 0.0;
};

// Point-based value iteration. Seeds are the initial belief set (deduplicated,
// stride-downsampled to the point cap when larger); the expansion rounds grow
// the set toward reachable beliefs. Backups are synchronous and keep-best, so
// the value at every retained point is non-decreasing sweep over sweep, and
// the result is bitwise independent of `jobs`.
Policy pbvi_solve(const Pomdp& p, const std::vector<Belief>& seeds, const SolverParams& params,
                  SolveStats* stats = nullptr);

// One point backup at `b` with the policy's alpha set as the continuation
// value: picks argmax_a of the through-model Q instead of argmax over stored
// vectors. Never worse than best_action, and materially better at beliefs off
// the solve's point set, whose alpha envelope can sag below the value an
// explicit one-step branch already guarantees. The policy must be nonempty.
ActionChoice lookahead_action(const Pomdp& p, const Policy& pol, const Belief& b);

}  // namespace hpomdp
