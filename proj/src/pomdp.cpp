#include "hpomdp/pomdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hpomdp {

namespace {
constexpr double kRowTol = 1e-9;
constexpr double kLikelihoodFloor = 1e-12;
}  // namespace

double row_sum(const SparseRow& r) {
    double s = 0;
    for (const auto& [i, p] : r) {
        (void)i;
        s += p;
    }
    return s;
}

double row_get(const SparseRow& r, int idx) {
    auto it = std::lower_bound(r.begin(), r.end(), idx,
                               [](const auto& e, int k) { return e.first < k; });
    return (it != r.end() && it->first == idx) ? it->second : 0.0;
}

int sample_row(const SparseRow& r, Rng& rng) {
    if (r.empty()) throw std::runtime_error("sample_row on empty row");
    double u = draw_unit(rng);
    double cum = 0;
    for (const auto& [i, p] : r) {
        cum += p;
        if (u < cum) return i;
    }
    return r.back().first;  // numeric tail
}

int sample_dense(const std::vector<double>& p, Rng& rng) {
    double u = draw_unit(rng);
    double cum = 0;
    int last_pos = -1;
    for (int i = 0; i < int(p.size()); ++i) {
        if (p[i] <= 0) continue;
        last_pos = i;
        cum += p[i];
        if (u < cum) return i;
    }
    if (last_pos < 0) throw std::runtime_error("sample_dense on zero vector");
    return last_pos;  // numeric tail
}

std::vector<std::string> check_pomdp(const Pomdp& p, bool require_rewards) {
    std::vector<std::string> bad;
    auto check_rows = [&](const std::vector<SparseRow>& rows, int dim, const char* what) {
        for (int s = 0; s < p.num_states(); ++s) {
            for (int a = 0; a < p.num_actions(); ++a) {
                const SparseRow& r = rows[std::size_t(s) * p.actions.size() + a];
                if (r.empty()) {
                    bad.push_back(std::string(what) + " row empty: " + p.states[s] + " / " +
                                  p.actions[a]);
                    continue;
                }
                double sum = 0;
                int prev = -1;
                for (const auto& [i, q] : r) {
                    if (i <= prev || i >= dim)
                        bad.push_back(std::string(what) + " row unsorted or out of range: " +
                                      p.states[s] + " / " + p.actions[a]);
                    if (q <= 0)
                        bad.push_back(std::string(what) + " nonpositive prob: " + p.states[s] +
                                      " / " + p.actions[a]);
                    prev = i;
                    sum += q;
                }
                if (std::fabs(sum - 1.0) > kRowTol)
                    bad.push_back(std::string(what) + " row sum " + std::to_string(sum) + ": " +
                                  p.states[s] + " / " + p.actions[a]);
            }
        }
    };
    check_rows(p.trans, p.num_states(), "trans");
    check_rows(p.obs, p.num_observations(), "obs");
    if (require_rewards) {
        for (int s = 0; s < p.num_states(); ++s)
            for (int a = 0; a < p.num_actions(); ++a)
                for (const auto& [s2, q] : p.T(s, a)) {
                    (void)q;
                    if (!p.has_reward(s, a, s2))
                        bad.push_back("no reward for " + p.states[s] + " / " + p.actions[a] +
                                      " / " + p.states[s2]);
                }
    }
    return bad;
}

Belief delta_belief(int n, int s) {
    Belief b;
    b.p.assign(n, 0.0);
    b.p[s] = 1.0;
    return b;
}

Belief uniform_belief(int n) {
    Belief b;
    b.p.assign(n, 1.0 / n);
    return b;
}

BeliefUpdateResult belief_update(const Pomdp& p, const Belief& b, int a, int o) {
    const int n = p.num_states();
    Belief pred;
    pred.p.assign(n, 0.0);
    for (int s = 0; s < n; ++s) {
        double bs = b.p[s];
        if (bs == 0.0) continue;
        for (const auto& [s2, q] : p.T(s, a)) pred.p[s2] += bs * q;
    }
    BeliefUpdateResult out;
    out.b.p.assign(n, 0.0);
    double norm = 0;
    for (int s2 = 0; s2 < n; ++s2) {
        if (pred.p[s2] == 0.0) continue;
        double w = row_get(p.Z(s2, a), o);
        if (w > 0) {
            out.b.p[s2] = pred.p[s2] * w;
            norm += out.b.p[s2];
        }
    }
    if (norm < kLikelihoodFloor) {
        out.b = std::move(pred);
        out.consistent = false;
        return out;
    }
    for (double& x : out.b.p) x /= norm;
    return out;
}

ActionChoice best_action(const Policy& pol, const Belief& b) {
    if (pol.empty()) throw std::runtime_error("best_action on empty policy");
    ActionChoice best;
    for (std::size_t i = 0; i < pol.alphas.size(); ++i) {
        const auto& al = pol.alphas[i];
        double v = 0;
        for (std::size_t s = 0; s < al.v.size(); ++s) {
            double bs = b.p[s];
            if (bs != 0.0) v += bs * al.v[s];
        }
        if (best.alpha_index < 0 || v > best.value) {
            best.value = v;
            best.alpha_index = static_cast<int>(i);
            best.action = al.action;
        }
    }
    return best;
}

double policy_value(const Policy& pol, const Belief& b) { return best_action(pol, b).value; }

StepSample sample_step(const Pomdp& p, int s, int a, Rng& rng) {
    StepSample out;
    out.state = sample_row(p.T(s, a), rng);
    out.obs = sample_row(p.Z(out.state, a), rng);
    return out;
}

Trace simulate_policy(const Pomdp& p, const Policy& pol, int s0, const Belief& b0,
                      const std::function<bool(int)>& stop_action, int max_steps, Rng& rng) {
    Trace tr;
    int s = s0;
    Belief b = b0;
    for (int t = 0; t < max_steps; ++t) {
        ActionChoice c = best_action(pol, b);
        if (stop_action(c.action)) {
            tr.final_state = s;
            return tr;
        }
        StepSample st = sample_step(p, s, c.action, rng);
        BeliefUpdateResult up = belief_update(p, b, c.action, st.obs);
        if (!up.consistent) tr.obs_inconsistent = true;
        b = std::move(up.b);
        s = st.state;
        tr.steps.push_back({s, c.action, st.obs, b});
    }
    tr.final_state = s;
    tr.truncated = true;
    return tr;
}

}  // namespace hpomdp
