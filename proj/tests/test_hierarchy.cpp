#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "hpomdp/grounding.hpp"
#include "hpomdp/hierarchy.hpp"
#include "hpomdp/kb.hpp"
#include "hpomdp/local_model.hpp"
#include "hpomdp/pbvi.hpp"
#include "hpomdp/sst.hpp"
#include "oracles.hpp"
#include "toy_corridor.hpp"

using namespace hpomdp;

namespace {

KnowledgeBase load_kb(const std::string& g_text, const std::string& s_text) {
    GeneralKb g = parse_general(g_text);
    SpecificKb s = parse_specific(s_text, g);
    return link_kb(g, s);
}

int node_by_id(const Sst& sst, const std::string& id) {
    for (std::size_t i = 0; i < sst.nodes.size(); ++i)
        if (sst.nodes[i].id == id) return static_cast<int>(i);
    return -1;
}

struct World {
    KnowledgeBase kb;
    BottomPomdp bp;
    Sst sst;
    NeighborIndex ni;
};

World fixture_world() {
    World w;
    w.kb = load_kb(fixture::general_doc(), fixture::specific_doc());
    w.bp = build_bottom(w.kb);
    w.sst = build_sst(w.kb, w.bp);
    w.ni = lift_neighbors(w.sst, neighbor_pairs_bottom(w.kb, w.bp));
    return w;
}

World corridor_world(int n, int per, double move_p, double side_p) {
    World w;
    w.kb = load_kb(toy::corridor_general(move_p, side_p), toy::corridor_specific(n, per));
    w.bp = build_bottom(w.kb);
    w.sst = build_sst(w.kb, w.bp);
    w.ni = lift_neighbors(w.sst, neighbor_pairs_bottom(w.kb, w.bp));
    return w;
}

bool same_policy(const Policy& x, const Policy& y) {
    if (x.alphas.size() != y.alphas.size()) return false;
    for (std::size_t i = 0; i < x.alphas.size(); ++i)
        if (x.alphas[i].action != y.alphas[i].action || x.alphas[i].v != y.alphas[i].v)
            return false;
    return true;
}

}  // namespace

TEST_CASE("sst shape on the twelve cell world") {
    World w = fixture_world();
    const Sst& sst = w.sst;

    REQUIRE(sst.depth == 4);
    REQUIRE(sst.by_height.size() == 5);
    CHECK(sst.by_height[4].size() == 12);
    CHECK(sst.by_height[3].size() == 6);
    CHECK(sst.by_height[2].size() == 3);
    CHECK(sst.by_height[1].size() == 2);
    CHECK(sst.by_height[0].size() == 1);
    CHECK(sst.nodes[sst.root].id == "root");
    CHECK(sst.nodes[sst.root].height == 0);

    // Leaves share indices with BP states.
    for (int s = 0; s < w.bp.pomdp.num_states(); ++s) {
        CHECK(sst.nodes[s].leaf_state == s);
        CHECK(sst.nodes[s].id == w.bp.pomdp.states[s]);
        CHECK(sst.nodes[s].height == 4);
    }

    auto path = hierarchical_state(sst, w.bp.find_state("c12"));
    REQUIRE(path.size() == 5);
    const char* want[5] = {"root", "b2", "r3", "s6", "c12"};
    for (int i = 0; i < 5; ++i) CHECK(sst.nodes[path[i]].id == want[i]);

    // Every parent id agrees with the declared child->parent map.
    for (const auto& n : sst.nodes)
        if (n.parent >= 0) CHECK(sst.nodes[n.parent].hvalue == w.kb.hier_parent.at(n.hvalue));

    // Children of each node are exactly the nodes claiming it as parent.
    for (std::size_t i = 0; i < sst.nodes.size(); ++i)
        for (int c : sst.nodes[i].children) CHECK(sst.nodes[c].parent == static_cast<int>(i));

    int c12 = w.bp.find_state("c12");
    CHECK(sst.nodes[sst.ancestor_at(c12, 1)].id == "b2");
    CHECK(sst.nodes[sst.ancestor_at(c12, 3)].id == "s6");
    CHECK(sst.ancestor_at(c12, 4) == c12);
    CHECK_THROWS_AS(hierarchical_state(sst, 99), SstError);
}

TEST_CASE("ragged hierarchy is rejected") {
    GeneralKb g = parse_general(fixture::general_doc());
    SpecificKb s = parse_specific(fixture::specific_doc(), g);
    for (auto& [child, parent] : s.hpairs)
        if (child == "c1") parent = "r1";  // skips the section level for one leaf
    KnowledgeBase kb = link_kb(g, s);
    BottomPomdp bp = build_bottom(kb);
    bool threw = false;
    try {
        build_sst(kb, bp);
    } catch (const SstError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("ragged") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("single chain world collapses to empty levels") {
    World w = corridor_world(3, 3, 0.9, 0.1);  // one section holds every cell
    CHECK(w.sst.depth == 2);
    CHECK(w.sst.by_height[1].size() == 1);
    CHECK(hierarchical_state(w.sst, 0).size() == 3);
    CHECK(w.ni.pairs.at(1).empty());

    HierarchyParams hp;
    hp.seed = 3;
    Hierarchy hier = build_hierarchy(w.bp, w.sst, w.ni, hp);
    REQUIRE(hier.levels.size() == 1);
    CHECK(hier.levels[0].height == 1);
    CHECK(hier.levels[0].actions.empty());
    CHECK(hier.levels[0].dyn.num_states() == 1);
}

TEST_CASE("neighbor lifting on the twelve cell world") {
    World w = fixture_world();
    auto bottom = neighbor_pairs_bottom(w.kb, w.bp);
    CHECK(w.ni.pairs.at(4) == bottom);

    // Independent recomputation: lift each bottom pair by walking ancestors.
    for (int h = 3; h >= 0; --h) {
        std::set<std::pair<int, int>> want;
        for (const auto& [a, b] : bottom) {
            int pa = w.sst.ancestor_at(a, h);
            int pb = w.sst.ancestor_at(b, h);
            if (pa != pb) want.emplace(pa, pb);
        }
        CHECK(w.ni.pairs.at(h) == want);
    }

    auto has = [&](int h, const char* x, const char* y) {
        return w.ni.pairs.at(h).count({node_by_id(w.sst, x), node_by_id(w.sst, y)}) != 0;
    };
    CHECK(has(3, "s1", "s3"));  // via (c2, c5)
    CHECK(has(3, "s3", "s1"));
    CHECK(has(3, "s1", "s2"));
    CHECK_FALSE(has(3, "s1", "s4"));
    CHECK(has(2, "r1", "r2"));
    CHECK(has(2, "r2", "r3"));
    CHECK_FALSE(has(2, "r1", "r3"));
    CHECK(has(1, "b1", "b2"));
    CHECK(has(1, "b2", "b1"));

    // Bottom adjacency is symmetric, so every lifted level is closed under
    // reversal; no level contains a self pair.
    for (const auto& [h, ps] : w.ni.pairs)
        for (const auto& [a, b] : ps) {
            CHECK(a != b);
            CHECK(ps.count({b, a}) == 1);
        }

    // neighbors_of lists are sorted and match the pair sets.
    for (const auto& [h, ps] : w.ni.pairs)
        for (const auto& [a, b] : ps) {
            const auto& nb = w.ni.neighbors_of(a);
            CHECK(std::is_sorted(nb.begin(), nb.end()));
            CHECK(std::find(nb.begin(), nb.end(), b) != nb.end());
        }
}

TEST_CASE("abstract action local space on the twelve cell world") {
    World w = fixture_world();
    const int s1 = node_by_id(w.sst, "s1"), s3 = node_by_id(w.sst, "s3");
    REQUIRE(w.ni.pairs.at(3).count({s1, s3}) == 1);

    LocalModel lm = build_abstract_pomdp(w.sst, w.ni, s1, s3, w.bp.pomdp, nullptr, nullptr, 100.0);
    const Pomdp& p = lm.pomdp;

    const std::vector<std::string> want_states = {"c1", "c2", "c4", "c3",
                                                  "c5", "extra", "absb_g", "absb_ng"};
    CHECK(p.states == want_states);
    CHECK(lm.core_count == 2);
    CHECK(lm.extra == 5);
    CHECK(lm.absb_g == 6);
    CHECK(lm.absb_ng == 7);

    const std::vector<std::string> want_actions = {"up", "down", "left", "right", "terminate"};
    CHECK(p.actions == want_actions);
    CHECK(lm.terminate == 4);
    CHECK(lm.help == -1);
    CHECK(lm.action_lower == std::vector<int>{0, 1, 2, 3, -1});

    // Observations: anything perceivable from the five plain cells (c1..c9),
    // then none and extra.
    REQUIRE(p.num_observations() == 11);
    for (int i = 0; i < 9; ++i) CHECK(p.observations[i] == "c" + std::to_string(i + 1));
    CHECK(p.observations[9] == "none");
    CHECK(p.observations[10] == "extra");
    CHECK(lm.map_obs(w.bp.find_obs("c3")) == 2);
    CHECK(lm.map_obs(w.bp.find_obs("c10")) == 10);  // unmodeled -> extra

    // Transition rows: copies of the lower rows with leaks folded into extra.
    CHECK(p.T(0, 0) == SparseRow{{0, 1.0}});  // up at c1 is blocked: self loop
    CHECK(p.T(0, 1) == SparseRow{{0, 0.2}, {2, 0.8}});
    CHECK(p.T(1, 1) == SparseRow{{1, 0.2}, {4, 0.8}});
    CHECK(p.T(4, 1) == SparseRow{{4, 0.2}, {5, 0.8}});  // c5 south leaks out
    CHECK(p.T(2, 1) == SparseRow{{2, 0.2}, {5, 0.8}});  // c4 south leaks out

    // Leak complement against the full lower rows.
    for (int k = 0; k < lm.num_plain_states(); ++k) {
        const int ls = lm.local_states[k];
        for (int ai = 0; ai < 4; ++ai) {
            double inside = 0.0;
            for (const auto& [s2, q] : w.bp.pomdp.T(ls, lm.action_lower[ai]))
                if (lm.to_local.count(s2)) inside += q;
            CHECK(row_get(p.T(k, ai), lm.extra) == doctest::Approx(1.0 - inside).epsilon(1e-12));
            CHECK(row_sum(p.T(k, ai)) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    // Reward shape: step cost inside the kept region, big penalty for leaving
    // it or terminating inside the core, big reward for terminating outside.
    CHECK(p.reward_at(0, 1, 2) == -100.0);  // c1 south to c4: outside the exempt set
    CHECK(p.reward_at(1, 1, 4) == -1.0);    // c2 south to c5: goal cell
    CHECK(p.reward_at(4, 1, 5) == -100.0);  // leak to extra
    CHECK(p.reward_at(1, 3, 3) == -100.0);  // c2 east to c3
    CHECK(p.reward_at(0, 0, 0) == -1.0);    // blocked self loop stays cheap
    CHECK(p.T(4, lm.terminate) == SparseRow{{lm.absb_g, 1.0}});
    CHECK(p.reward_at(4, lm.terminate, lm.absb_g) == 100.0);
    CHECK(p.T(0, lm.terminate) == SparseRow{{lm.absb_ng, 1.0}});
    CHECK(p.reward_at(0, lm.terminate, lm.absb_ng) == -100.0);
    CHECK(p.reward_at(3, lm.terminate, lm.absb_ng) == 100.0);  // c3 is outside the core
    CHECK(p.T(lm.extra, lm.terminate) == SparseRow{{lm.absb_ng, 1.0}});
    CHECK(p.reward_at(lm.extra, lm.terminate, lm.absb_ng) == 100.0);
    CHECK(p.reward_at(lm.absb_g, lm.terminate, lm.absb_g) == 100.0);
    CHECK(p.reward_at(lm.absb_ng, lm.terminate, lm.absb_ng) == -1.0);
    for (int ai = 0; ai < 4; ++ai) {
        CHECK(p.T(lm.extra, ai) == SparseRow{{lm.extra, 1.0}});
        CHECK(p.reward_at(lm.extra, ai, lm.extra) == -100.0);
        CHECK(p.reward_at(lm.absb_g, ai, lm.absb_g) == -1.0);
        CHECK(p.reward_at(lm.absb_ng, ai, lm.absb_ng) == -1.0);
    }

    // Observation rows: kernel copy at plain arrivals, certainty elsewhere.
    CHECK(p.Z(0, 1) == SparseRow{{0, 0.85}, {1, 0.05}, {3, 0.05}, {4, 0.05}});
    for (int ai = 0; ai < 4; ++ai) {
        CHECK(p.Z(lm.extra, ai) == SparseRow{{lm.obs_extra, 1.0}});
        CHECK(p.Z(lm.absb_g, ai) == SparseRow{{lm.obs_none, 1.0}});
    }
    for (int s2 = 0; s2 < p.num_states(); ++s2)
        CHECK(p.Z(s2, lm.terminate) == SparseRow{{lm.obs_none, 1.0}});

    CHECK(check_pomdp(p, true).empty());
}

TEST_CASE("degenerate and terminate-only local spaces") {
    Pomdp lower;
    lower.states = {"u", "v"};
    lower.actions = {"noop"};
    lower.observations = {"u", "v"};
    lower.alloc_rows();
    for (int s = 0; s < 2; ++s) {
        lower.T(s, 0) = {{s, 1.0}};
        lower.Z(s, 0) = {{s, 1.0}};
    }

    LocalModelSpec spec;
    spec.core = {0, 1};
    spec.goal = {1};
    spec.exempt = {0, 1};
    spec.with_extra = true;
    bool threw = false;
    try {
        build_local_model(lower, nullptr, spec);
    } catch (const LocalModelError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("degenerate abstract action") != std::string::npos);
    }
    CHECK(threw);

    // When every plain state is a goal a terminate-only model is legitimate.
    spec.goal = {0, 1};
    LocalModel lm = build_local_model(lower, nullptr, spec);
    CHECK(lm.pomdp.actions == std::vector<std::string>{"terminate"});
    CHECK(check_pomdp(lm.pomdp, true).empty());

    // Help requires extra.
    spec.with_extra = false;
    spec.with_help = true;
    CHECK_THROWS_AS(build_local_model(lower, nullptr, spec), LocalModelError);
}

TEST_CASE("outcome row on a deterministic corridor is a delta") {
    World w = corridor_world(4, 2, 1.0, 0.0);
    const int g1 = node_by_id(w.sst, "g1"), g2 = node_by_id(w.sst, "g2");

    LocalModel lm = build_abstract_pomdp(w.sst, w.ni, g1, g2, w.bp.pomdp, nullptr, nullptr, 100.0);
    CHECK(lm.pomdp.states ==
          std::vector<std::string>{"c1", "c2", "c3", "extra", "absb_g", "absb_ng"});

    std::vector<Belief> seeds;
    for (int k = 0; k < lm.num_plain_states(); ++k)
        seeds.push_back(delta_belief(lm.pomdp.num_states(), k));
    SolverParams sp;
    sp.seed = 11;
    Policy pol = pbvi_solve(lm.pomdp, seeds, sp);

    OutcomeEstimate est = estimate_outcome_row(lm, pol, w.bp.pomdp, nullptr, w.sst, {g1, g2}, g1,
                                               100, 42);
    CHECK_FALSE(est.fallback);
    CHECK(est.truncated == 0);
    CHECK(est.discarded_fraction == 0.0);
    REQUIRE(est.node_prob.size() == 1);
    CHECK(est.node_prob.at(g2) == 1.0);
}

TEST_CASE("outcome row is reproducible under a fixed seed") {
    World w = corridor_world(4, 2, 0.9, 0.1);
    const int g1 = node_by_id(w.sst, "g1"), g2 = node_by_id(w.sst, "g2");
    LocalModel lm = build_abstract_pomdp(w.sst, w.ni, g1, g2, w.bp.pomdp, nullptr, nullptr, 100.0);
    std::vector<Belief> seeds;
    for (int k = 0; k < lm.num_plain_states(); ++k)
        seeds.push_back(delta_belief(lm.pomdp.num_states(), k));
    SolverParams sp;
    sp.seed = 5;
    Policy pol = pbvi_solve(lm.pomdp, seeds, sp);

    auto a = estimate_outcome_row(lm, pol, w.bp.pomdp, nullptr, w.sst, {g1, g2}, g1, 100, 7);
    auto b = estimate_outcome_row(lm, pol, w.bp.pomdp, nullptr, w.sst, {g1, g2}, g1, 100, 7);
    CHECK(a.node_prob == b.node_prob);
    CHECK(a.truncated == b.truncated);
    CHECK(a.discarded_fraction == b.discarded_fraction);
    double total = 0.0;
    for (const auto& [node, pr] : a.node_prob) total += pr;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("outcome row matches exhaustive enumeration on the two section world") {
    World w = corridor_world(4, 2, 0.9, 0.1);
    const int g1 = node_by_id(w.sst, "g1"), g2 = node_by_id(w.sst, "g2");
    LocalModel lm = build_abstract_pomdp(w.sst, w.ni, g1, g2, w.bp.pomdp, nullptr, nullptr, 100.0);
    std::vector<Belief> seeds;
    for (int k = 0; k < lm.num_plain_states(); ++k)
        seeds.push_back(delta_belief(lm.pomdp.num_states(), k));
    SolverParams sp;
    sp.seed = 5;
    Policy pol = pbvi_solve(lm.pomdp, seeds, sp);

    std::vector<int> counted = {g1, g2};
    oracle::OutcomeEnum exact =
        oracle::enumerate_outcome(lm, pol, w.bp.pomdp, nullptr, w.sst, counted, 40, 1e-10);
    CHECK(exact.residual < 1e-6);
    CHECK(exact.discarded == 0.0);

    OutcomeEstimate est =
        estimate_outcome_row(lm, pol, w.bp.pomdp, nullptr, w.sst, counted, g1, 10000, 20260819);
    CHECK(est.discarded_fraction == 0.0);
    for (int node : counted) {
        double sim_p = est.node_prob.count(node) ? est.node_prob.at(node) : 0.0;
        double ex_p = exact.node_prob.count(node) ? exact.node_prob.at(node) : 0.0;
        CHECK(std::fabs(sim_p - ex_p) <= 0.03);
    }
    // The policy should mostly succeed in this easy world.
    CHECK(exact.node_prob.at(g2) > 0.8);
}

TEST_CASE("estimation falls back to the source when every run leaves the neighborhood") {
    World w = corridor_world(2, 1, 1.0, 0.0);  // two one-cell sections
    const int g1 = node_by_id(w.sst, "g1"), g2 = node_by_id(w.sst, "g2");
    LocalModel lm = build_abstract_pomdp(w.sst, w.ni, g1, g2, w.bp.pomdp, nullptr, nullptr, 100.0);
    REQUIRE(lm.num_plain_states() == 2);

    // Handmade policy: march right from c1, terminate at c2. Counting only g1
    // discards every simulation.
    int right = -1;
    for (std::size_t a = 0; a < lm.pomdp.actions.size(); ++a)
        if (lm.pomdp.actions[a] == "right") right = static_cast<int>(a);
    REQUIRE(right >= 0);
    Policy pol;
    AlphaVector go;
    go.action = right;
    go.v = {1000.0, -1000.0, -1000.0, -1000.0, -1000.0};
    AlphaVector stop;
    stop.action = lm.terminate;
    stop.v = {-1000.0, 1000.0, 1000.0, 1000.0, 1000.0};
    REQUIRE(lm.pomdp.num_states() == 5);
    pol.alphas = {go, stop};

    OutcomeEstimate est =
        estimate_outcome_row(lm, pol, w.bp.pomdp, nullptr, w.sst, {g1}, g1, 50, 9);
    CHECK(est.fallback);
    CHECK(est.discarded_fraction == 1.0);
    REQUIRE(est.node_prob.size() == 1);
    CHECK(est.node_prob.at(g1) == 1.0);
}

TEST_CASE("hierarchy build on the twelve cell world") {
    World w = fixture_world();
    HierarchyParams hp;
    hp.seed = 17;
    Hierarchy hier = build_hierarchy(w.bp, w.sst, w.ni, hp);

    REQUIRE(hier.levels.size() == 3);
    CHECK(hier.levels[0].height == 3);
    CHECK(hier.levels[1].height == 2);
    CHECK(hier.levels[2].height == 1);
    CHECK(hier.level_at_height(2) == &hier.levels[1]);
    CHECK(hier.level_at_height(4) == nullptr);

    for (const auto& lev : hier.levels) {
        CHECK(lev.dyn.num_states() == static_cast<int>(w.sst.by_height[lev.height].size()));
        CHECK(lev.actions.size() == w.ni.pairs.at(lev.height).size());
        CHECK(lev.dyn.num_actions() == static_cast<int>(lev.actions.size()));
        CHECK(check_pomdp(lev.dyn, false).empty());

        for (std::size_t ai = 0; ai < lev.actions.size(); ++ai) {
            const AbstractAction& aa = lev.actions[ai];
            CHECK(aa.height == lev.height);
            CHECK(w.ni.pairs.at(lev.height).count({aa.source_node, aa.target_node}) == 1);
            CHECK(lev.dyn.actions[ai] ==
                  w.sst.nodes[aa.source_node].id + ">" + w.sst.nodes[aa.target_node].id);
            CHECK(row_sum(aa.outcome_row) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK_FALSE(aa.policy.empty());

            // Identity off the source, outcome row at the source.
            const int src = lev.action_source_state[ai];
            CHECK(src == lev.node_state.at(aa.source_node));
            for (int s = 0; s < lev.dyn.num_states(); ++s) {
                if (s == src)
                    CHECK(lev.dyn.T(s, static_cast<int>(ai)) == aa.outcome_row);
                else
                    CHECK(lev.dyn.T(s, static_cast<int>(ai)) == SparseRow{{s, 1.0}});
                CHECK(lev.dyn.Z(s, static_cast<int>(ai)) == SparseRow{{s, 1.0}});
            }

            // Outcome support stays inside the source plus its neighbors.
            std::set<int> allowed = {aa.source_node};
            for (int nb : w.ni.neighbors_of(aa.source_node)) allowed.insert(nb);
            for (const auto& [st, pr] : aa.outcome_row) {
                (void)pr;
                CHECK(allowed.count(lev.state_nodes[st]) == 1);
            }
        }
    }

    // The room level sees section-level abstract actions: invoking one from a
    // state it was not designed for keeps the big penalty even on a self loop.
    const HierarchyLevel& rooms = hier.levels[1];
    const AbstractAction* r1r2 = nullptr;
    for (const auto& aa : rooms.actions)
        if (w.sst.nodes[aa.source_node].id == "r1" && w.sst.nodes[aa.target_node].id == "r2")
            r1r2 = &aa;
    REQUIRE(r1r2 != nullptr);
    const Pomdp& lp = r1r2->local.pomdp;
    int a13 = -1;
    for (int a = 0; a < lp.num_actions(); ++a)
        if (lp.actions[a] == "s1>s3") a13 = a;
    REQUIRE(a13 >= 0);
    const int s2_local = r1r2->local.to_local.at(
        hier.levels[0].node_state.at(node_by_id(w.sst, "s2")));
    CHECK(lp.T(s2_local, a13) == SparseRow{{s2_local, 1.0}});
    CHECK(lp.reward_at(s2_local, a13, s2_local) == -100.0);

    // Same seed, same hierarchy, serial or parallel.
    Hierarchy again = build_hierarchy(w.bp, w.sst, w.ni, hp);
    HierarchyParams hp4 = hp;
    hp4.jobs = 4;
    Hierarchy par = build_hierarchy(w.bp, w.sst, w.ni, hp4);
    for (const Hierarchy* other : {&again, &par}) {
        REQUIRE(other->levels.size() == hier.levels.size());
        for (std::size_t li = 0; li < hier.levels.size(); ++li) {
            const auto& x = hier.levels[li];
            const auto& y = other->levels[li];
            CHECK(x.dyn.states == y.dyn.states);
            CHECK(x.dyn.actions == y.dyn.actions);
            CHECK(x.dyn.trans == y.dyn.trans);
            CHECK(x.dyn.obs == y.dyn.obs);
            REQUIRE(x.actions.size() == y.actions.size());
            for (std::size_t ai = 0; ai < x.actions.size(); ++ai) {
                CHECK(x.actions[ai].outcome_row == y.actions[ai].outcome_row);
                CHECK(same_policy(x.actions[ai].policy, y.actions[ai].policy));
            }
        }
    }
}
