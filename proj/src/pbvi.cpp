#include "hpomdp/pbvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hpomdp {

namespace {

// Dot restricted to the support of b, iterated in ascending state order.
double sparse_dot(const std::vector<double>& alpha, const std::vector<int>& sup,
                  const std::vector<double>& b) {
    double acc = 0.0;
    for (int s : sup) acc += alpha[s] * b[s];
    return acc;
}

struct PointBackup {
    AlphaVector alpha;
    double value = 0.0;      // constructed alpha . b
    double old_value = 0.0;  // best existing alpha . b
    int old_index = 0;
};

// Workspace reused across backups on one thread.
struct Scratch {
    std::vector<double> pred;
    std::vector<char> touched;
    std::vector<int> pred_sup;
    std::vector<std::vector<std::pair<int, double>>> buckets;  // obs -> (s', mass)
    std::vector<int> pos_obs;
    std::vector<int> gidx;    // winning alpha per obs for the current action
    std::vector<int> best_g;  // same for the best action so far
    std::vector<double> w;    // sum_o Omega(s',a,o) * gamma[g(o)](s')
    std::vector<int> sup;
};

// One synchronous point backup of `b` against `gamma`. The candidate alpha for
// the best action is built densely; everything else touches only the belief
// support, its one-step image, and the observation buckets over that image.
PointBackup backup_point(const Pomdp& p, const std::vector<AlphaVector>& gamma, const Belief& b,
                         Scratch& sc) {
    const int nS = p.num_states();
    const int nA = p.num_actions();
    const int nO = p.num_observations();
    sc.pred.assign(nS, 0.0);
    sc.touched.assign(nS, 0);
    if (int(sc.buckets.size()) < nO) sc.buckets.resize(nO);
    sc.gidx.assign(nO, 0);

    sc.sup.clear();
    for (int s = 0; s < nS; ++s)
        if (b.p[s] > 0.0) sc.sup.push_back(s);

    double best_val = -std::numeric_limits<double>::infinity();
    int best_a = 0;
    sc.best_g.assign(nO, 0);

    for (int a = 0; a < nA; ++a) {
        sc.pred_sup.clear();
        double rimm = 0.0;
        for (int s : sc.sup) {
            const double ps = b.p[s];
            for (const auto& [s2, q] : p.T(s, a)) {
                if (!sc.touched[s2]) {
                    sc.touched[s2] = 1;
                    sc.pred_sup.push_back(s2);
                }
                sc.pred[s2] += ps * q;
                rimm += ps * q * p.reward_at(s, a, s2);
            }
        }
        std::sort(sc.pred_sup.begin(), sc.pred_sup.end());

        for (int o : sc.pos_obs) sc.buckets[o].clear();
        sc.pos_obs.clear();
        for (int s2 : sc.pred_sup) {
            const double m = sc.pred[s2];
            for (const auto& [o, q] : p.Z(s2, a)) {
                if (sc.buckets[o].empty()) sc.pos_obs.push_back(o);
                sc.buckets[o].push_back({s2, m * q});
            }
        }
        std::sort(sc.pos_obs.begin(), sc.pos_obs.end());

        std::fill(sc.gidx.begin(), sc.gidx.end(), 0);
        double future = 0.0;
        for (int o : sc.pos_obs) {
            const auto& bk = sc.buckets[o];
            int best_i = 0;
            double best_d = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < int(gamma.size()); ++i) {
                const auto& av = gamma[i].v;
                double d = 0.0;
                for (const auto& [s2, m] : bk) d += av[s2] * m;
                if (d > best_d) {
                    best_d = d;
                    best_i = i;
                }
            }
            sc.gidx[o] = best_i;
            future += best_d;
        }

        const double val = rimm + p.discount * future;
        if (val > best_val) {
            best_val = val;
            best_a = a;
            sc.best_g = sc.gidx;
        }

        for (int s2 : sc.pred_sup) {
            sc.pred[s2] = 0.0;
            sc.touched[s2] = 0;
        }
    }

    // alpha(s) = sum_{s'} Phi(s,a*,s') (R(s,a*,s') + g * w(s'))
    sc.w.assign(nS, 0.0);
    for (int s2 = 0; s2 < nS; ++s2) {
        double acc = 0.0;
        for (const auto& [o, q] : p.Z(s2, best_a)) acc += q * gamma[sc.best_g[o]].v[s2];
        sc.w[s2] = acc;
    }
    PointBackup out;
    out.alpha.action = best_a;
    out.alpha.v.assign(nS, 0.0);
    for (int s = 0; s < nS; ++s) {
        double acc = 0.0;
        for (const auto& [s2, q] : p.T(s, best_a))
            acc += q * (p.reward_at(s, best_a, s2) + p.discount * sc.w[s2]);
        out.alpha.v[s] = acc;
    }
    out.value = sparse_dot(out.alpha.v, sc.sup, b.p);

    out.old_index = 0;
    out.old_value = sparse_dot(gamma[0].v, sc.sup, b.p);
    for (int i = 1; i < int(gamma.size()); ++i) {
        double v = sparse_dot(gamma[i].v, sc.sup, b.p);
        if (v > out.old_value) {
            out.old_value = v;
            out.old_index = i;
        }
    }
    return out;
}

// Drops exact duplicates (first occurrence wins) and any vector another kept
// vector dominates componentwise.
void prune_alphas(std::vector<AlphaVector>& g) {
    std::vector<AlphaVector> uniq;
    for (auto& a : g) {
        bool dup = false;
        for (const auto& u : uniq)
            if (u.v == a.v) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(std::move(a));
    }
    std::vector<char> drop(uniq.size(), 0);
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        for (std::size_t j = 0; j < uniq.size(); ++j) {
            if (i == j) continue;
            bool dom = true;
            for (std::size_t s = 0; s < uniq[i].v.size(); ++s)
                if (uniq[j].v[s] < uniq[i].v[s]) {
                    dom = false;
                    break;
                }
            if (dom) {
                drop[i] = 1;
                break;
            }
        }
    }
    g.clear();
    for (std::size_t i = 0; i < uniq.size(); ++i)
        if (!drop[i]) g.push_back(std::move(uniq[i]));
}

double l1_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
    return d;
}

// Grows B toward beliefs reachable in one step, picking for each point the
// sampled successor farthest (L1) from the current set. At most one new point
// per existing point, capped at `cap`.
void expand_beliefs(const Pomdp& p, std::vector<Belief>& B, int cap, Rng& rng) {
    const int base = int(B.size());
    for (int i = 0; i < base && int(B.size()) < cap; ++i) {
        Belief best_b;
        double best_d = 0.0;
        for (int a = 0; a < p.num_actions(); ++a) {
            int s = sample_dense(B[i].p, rng);
            StepSample st = sample_step(p, s, a, rng);
            Belief cand = belief_update(p, B[i], a, st.obs).b;
            double d = std::numeric_limits<double>::infinity();
            for (const auto& bb : B) d = std::min(d, l1_dist(cand.p, bb.p));
            if (d > best_d) {
                best_d = d;
                best_b = std::move(cand);
            }
        }
        if (best_d > 0.0) B.push_back(std::move(best_b));
    }
}

}  // namespace

Policy pbvi_solve(const Pomdp& p, const std::vector<Belief>& seeds, const SolverParams& prm,
                  SolveStats* stats) {
    const int nS = p.num_states();
    if (seeds.empty()) throw std::invalid_argument("pbvi_solve: no seed beliefs");
    for (const auto& b : seeds)
        if (b.size() != nS) throw std::invalid_argument("pbvi_solve: seed belief size mismatch");
    if (p.reward.empty()) throw std::invalid_argument("pbvi_solve: model has no rewards");
    if (prm.belief_points < 1 || prm.backup_sweeps < 1)
        throw std::invalid_argument("pbvi_solve: nonpositive budget");

    std::vector<Belief> B;
    for (const auto& b : seeds) {
        bool dup = false;
        for (const auto& e : B)
            if (e.p == b.p) {
                dup = true;
                break;
            }
        if (!dup) B.push_back(b);
    }
    if (int(B.size()) > prm.belief_points) {
        std::vector<Belief> picked;
        picked.reserve(prm.belief_points);
        for (int i = 0; i < prm.belief_points; ++i)
            picked.push_back(B[std::size_t(i) * B.size() / prm.belief_points]);
        B = std::move(picked);
    }

    double rmin = std::numeric_limits<double>::infinity();
    for (const auto& [k, r] : p.reward) {
        (void)k;
        rmin = std::min(rmin, r);
    }

    // Blind lower bounds: the exact value of each stationary one-action
    // policy, iterated to its fixed point from the reward floor. Absorbing
    // payoffs enter the set at full strength before the first backup instead
    // of climbing one discount rung per sweep, so actions that route through
    // an absorbing state stay priced correctly on short sweep budgets.
    const double floor_v = rmin / (1.0 - p.discount);
    std::vector<AlphaVector> gamma;
    for (int a = 0; a < p.num_actions(); ++a) {
        std::vector<double> v(nS, floor_v), nv(nS, 0.0);
        for (int it = 0; it < 100000; ++it) {
            double delta = 0.0;
            for (int s = 0; s < nS; ++s) {
                double q = 0.0;
                for (const auto& [s2, tp] : p.T(s, a))
                    q += tp * (p.reward_at(s, a, s2) + p.discount * v[s2]);
                nv[s] = q;
                delta = std::max(delta, std::fabs(q - v[s]));
            }
            v.swap(nv);
            if (delta <= 1e-10 * (1.0 + std::fabs(floor_v))) break;
        }
        gamma.push_back({a, std::move(v)});
    }
    prune_alphas(gamma);

    const int phases = prm.expansions + 1;
    const int per_phase = prm.backup_sweeps / phases;
    const int last_extra = prm.backup_sweeps - per_phase * phases;

    SolveStats st;
    std::vector<PointBackup> results;
    for (int phase = 0; phase < phases; ++phase) {
        int sweeps = per_phase + (phase == phases - 1 ? last_extra : 0);
        if (phase == phases - 1 && sweeps == 0) sweeps = 1;
        for (int k = 0; k < sweeps; ++k) {
            const int n = int(B.size());
            results.resize(n);
#ifdef _OPENMP
            if (prm.jobs > 1) {
#pragma omp parallel num_threads(prm.jobs)
                {
                    Scratch sc;
#pragma omp for schedule(static)
                    for (int i = 0; i < n; ++i) results[i] = backup_point(p, gamma, B[i], sc);
                }
            } else
#endif
            {
                Scratch sc;
                for (int i = 0; i < n; ++i) results[i] = backup_point(p, gamma, B[i], sc);
            }

            // Keep-best combine in point order, then prune.
            std::vector<AlphaVector> next;
            next.reserve(n);
            double delta = 0.0;
            for (int i = 0; i < n; ++i) {
                if (results[i].value > results[i].old_value) {
                    delta = std::max(delta, results[i].value - results[i].old_value);
                    next.push_back(std::move(results[i].alpha));
                } else {
                    next.push_back(gamma[results[i].old_index]);
                }
            }
            prune_alphas(next);
            gamma = std::move(next);
            ++st.sweeps_run;
            st.last_delta = delta;
            if (delta < prm.epsilon) break;
        }
        if (phase < phases - 1 && int(B.size()) < prm.belief_points) {
            Rng erng(derive_seed(prm.seed, "pbvi-expand", std::uint64_t(phase)));
            expand_beliefs(p, B, prm.belief_points, erng);
        }
    }

    st.points = int(B.size());
    st.alphas = int(gamma.size());
    if (stats) *stats = st;
    Policy pol;
    pol.alphas = std::move(gamma);
    return pol;
}

ActionChoice lookahead_action(const Pomdp& p, const Policy& pol, const Belief& b) {
    if (pol.empty()) throw std::invalid_argument("lookahead_action: policy has no alpha vectors");
    if (b.size() != p.num_states())
        throw std::invalid_argument("lookahead_action: belief size does not match the model");
    Scratch sc;
    const PointBackup r = backup_point(p, pol.alphas, b, sc);
    ActionChoice c;
    c.action = r.alpha.action;
    c.value = r.value;
    return c;
}

}  // namespace hpomdp
