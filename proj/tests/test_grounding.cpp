#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hpomdp/grounding.hpp"

using namespace hpomdp;

namespace {

KnowledgeBase cells12() {
    GeneralKb g = parse_general(fixture::general_doc());
    SpecificKb s = parse_specific(fixture::specific_doc(), g);
    return link_kb(g, s);
}

int idx(const BottomPomdp& bp, const std::string& name) {
    int i = bp.find_state(name);
    REQUIRE(i >= 0);
    return i;
}

}  // namespace

TEST_CASE("12-cell world grounds to the expected shape") {
    KnowledgeBase kb = cells12();
    REQUIRE(validate(kb).ok());
    BottomPomdp bp = build_bottom(kb);
    CHECK(bp.pomdp.num_states() == 12);
    CHECK(bp.pomdp.num_actions() == 4);
    CHECK(bp.pomdp.num_observations() == 12);
    CHECK(bp.pomdp.states[0] == "c1");
    CHECK(bp.state_tuples[0] == std::vector<std::string>{"c1"});
    CHECK(check_pomdp(bp.pomdp, false).empty());
    CHECK(bp.pomdp.reward.empty());
}

TEST_CASE("movement rows take 0.2 stay / 0.8 move probabilities") {
    KnowledgeBase kb = cells12();
    BottomPomdp bp = build_bottom(kb);
    int c5 = idx(bp, "c5"), c2 = idx(bp, "c2");
    int up = 0;  // declaration order: up, down, left, right
    REQUIRE(bp.pomdp.actions[up] == "up");
    CHECK(row_get(bp.pomdp.T(c5, up), c2) == doctest::Approx(0.8));
    CHECK(row_get(bp.pomdp.T(c5, up), c5) == doctest::Approx(0.2));
    CHECK(bp.pomdp.T(c5, up).size() == 2);
}

TEST_CASE("execution-forbidden pairs become deterministic self-loops") {
    KnowledgeBase kb = cells12();
    BottomPomdp bp = build_bottom(kb);
    int up = 0, left = 2;
    REQUIRE(bp.pomdp.actions[left] == "left");
    for (const char* cell : {"c1", "c2", "c3"}) {
        const SparseRow& r = bp.pomdp.T(idx(bp, cell), up);
        REQUIRE(r.size() == 1);
        CHECK(r[0].first == idx(bp, cell));
        CHECK(r[0].second == 1.0);
    }
    for (const char* cell : {"c1", "c4", "c7", "c10"}) {
        const SparseRow& r = bp.pomdp.T(idx(bp, cell), left);
        REQUIRE(r.size() == 1);
        CHECK(r[0].first == idx(bp, cell));
    }
    // The observation row still reflects the (unchanged) arrival cell.
    CHECK(row_get(bp.pomdp.Z(idx(bp, "c1"), up), bp.find_obs("c1")) == doctest::Approx(0.85));
}

TEST_CASE("observation kernels are centered with boundary mass folded in") {
    KnowledgeBase kb = cells12();
    BottomPomdp bp = build_bottom(kb);
    int a = 3;  // any action; kernels are shared per arrival cell
    const SparseRow& interior = bp.pomdp.Z(idx(bp, "c5"), a);
    CHECK(interior.size() == 9);
    CHECK(row_get(interior, bp.find_obs("c5")) == doctest::Approx(0.6));
    CHECK(row_get(interior, bp.find_obs("c1")) == doctest::Approx(0.05));
    const SparseRow& corner = bp.pomdp.Z(idx(bp, "c1"), a);
    CHECK(corner.size() == 4);
    CHECK(row_get(corner, bp.find_obs("c1")) == doctest::Approx(0.85));
    CHECK(std::fabs(row_sum(corner) - 1.0) < 1e-12);
}

TEST_CASE("neighbor pairs cover exactly the open grid adjacencies") {
    KnowledgeBase kb = cells12();
    BottomPomdp bp = build_bottom(kb);
    auto pairs = neighbor_pairs_bottom(kb, bp);
    // 3x4 grid: 9 vertical + 8 horizontal edges, ordered both ways.
    CHECK(pairs.size() == 34);
    CHECK(pairs.count({idx(bp, "c2"), idx(bp, "c5")}) == 1);
    CHECK(pairs.count({idx(bp, "c5"), idx(bp, "c2")}) == 1);
    CHECK(pairs.count({idx(bp, "c1"), idx(bp, "c3")}) == 0);
    for (const auto& [s, s2] : pairs) {
        CHECK(pairs.count({s2, s}) == 1);  // grid adjacency is symmetric
        bool in_phi = false;
        for (int a = 0; a < bp.pomdp.num_actions(); ++a)
            if (row_get(bp.pomdp.T(s, a), s2) > 0) in_phi = true;
        CHECK(in_phi);
    }
}

TEST_CASE("constraint pruning reroutes transition mass to the self-loop") {
    GeneralKb g = parse_general(fixture::general_doc());
    SpecificKb s = parse_specific(fixture::specific_doc(), g);
    s.constraints.push_back({{"robot_loc", "c12"}});
    // Drop c12 from the hierarchy to keep linking happy about coverage.
    KnowledgeBase kb = link_kb(g, s);
    BottomPomdp bp = build_bottom(kb);
    CHECK(bp.pomdp.num_states() == 11);
    CHECK(bp.find_state("c12") == -1);
    int c9 = idx(bp, "c9");
    int down = 1;
    REQUIRE(bp.pomdp.actions[down] == "down");
    const SparseRow& r = bp.pomdp.T(c9, down);
    REQUIRE(r.size() == 1);
    CHECK(r[0].first == c9);
    CHECK(r[0].second == doctest::Approx(1.0));
    auto pairs = neighbor_pairs_bottom(kb, bp);
    for (const auto& [a, b] : pairs) {
        CHECK(a >= 0);
        CHECK(b >= 0);
        CHECK(a < 11);
        CHECK(b < 11);
    }
}

TEST_CASE("multi-variable KBs ground to the pruned cross product") {
    GeneralKb g;
    g.modules = {"nav", "power"};
    g.vars = {"loc", "battery"};
    g.actions.push_back({"go", "loc", "nav"});
    g.actions.push_back({"drain", "battery", "power"});
    Relation hop{"hop", RelKind::ValueValue, "loc", {}};
    Relation see{"see", RelKind::ValueObs, "loc", {}};
    Relation level{"level", RelKind::ValueObs, "battery", {}};
    g.rels = {hop, see, level};
    g.trans_entries.push_back({"go", true, "hop", "", "", 1.0});
    g.trans_entries.push_back({"drain", false, "", "hi", "lo", 1.0});
    g.trans_entries.push_back({"drain", false, "", "lo", "lo", 1.0});
    g.obs_entries.push_back({"go", true, "see", "", "", 1.0});
    g.obs_entries.push_back({"drain", true, "level", "", "", 1.0});

    SpecificKb s;
    s.values["loc"] = {"l1", "l2"};
    s.values["battery"] = {"hi", "lo"};
    s.observations["loc"] = {"ol1", "ol2"};
    s.observations["battery"] = {"ohi", "olo"};
    s.rel_pairs["hop"] = {{"l1", "l2"}, {"l2", "l1"}};
    s.rel_pairs["see"] = {{"l1", "ol1"}, {"l2", "ol2"}};
    s.rel_pairs["level"] = {{"hi", "ohi"}, {"lo", "olo"}};
    s.constraints.push_back({{"loc", "l2"}, {"battery", "lo"}});

    KnowledgeBase kb = link_kb(g, s);
    BottomPomdp bp = build_bottom(kb);
    CHECK(bp.pomdp.num_states() == 3);
    CHECK(bp.pomdp.states == std::vector<std::string>{"l1&hi", "l1&lo", "l2&hi"});
    CHECK(bp.pomdp.num_observations() == 4);

    // go from l1&lo targets l2&lo, which is pruned: mass returns to self.
    int s_l1lo = idx(bp, "l1&lo");
    const SparseRow& r = bp.pomdp.T(s_l1lo, 0);
    REQUIRE(r.size() == 1);
    CHECK(r[0].first == s_l1lo);
    CHECK(r[0].second == doctest::Approx(1.0));
    // drain from l2&hi targets l2&lo, also pruned.
    int s_l2hi = idx(bp, "l2&hi");
    const SparseRow& rd = bp.pomdp.T(s_l2hi, 1);
    REQUIRE(rd.size() == 1);
    CHECK(rd[0].first == s_l2hi);

    auto pairs = neighbor_pairs_bottom(kb, bp);
    CHECK(pairs.count({idx(bp, "l1&hi"), idx(bp, "l2&hi")}) == 1);
    CHECK(pairs.count({idx(bp, "l1&lo"), s_l2hi}) == 0);  // differs in both slots
    CHECK(check_pomdp(bp.pomdp, false).empty());
}

TEST_CASE("rows that expand to nothing raise a construction error naming the pair") {
    GeneralKb g;
    g.modules = {"nav"};
    g.vars = {"loc"};
    g.actions.push_back({"go", "loc", "nav"});
    Relation fwd{"fwd", RelKind::ValueValue, "loc", {}};
    Relation see{"see", RelKind::ValueObs, "loc", {}};
    g.rels = {fwd, see};
    g.trans_entries.push_back({"go", true, "fwd", "", "", 1.0});
    g.obs_entries.push_back({"go", true, "see", "", "", 1.0});
    SpecificKb s;
    s.values["loc"] = {"v1", "v2"};
    s.observations["loc"] = {"o1", "o2"};
    s.rel_pairs["fwd"] = {{"v1", "v2"}};  // nothing leaves v2
    s.rel_pairs["see"] = {{"v1", "o1"}, {"v2", "o2"}};
    KnowledgeBase kb = link_kb(g, s);
    CHECK_THROWS_WITH_AS(build_bottom(kb),
                         doctest::Contains("transition row empty for state v2"), GroundingError);
}

TEST_CASE("grounding is deterministic across rebuilds and serialization") {
    KnowledgeBase kb = cells12();
    BottomPomdp a = build_bottom(kb);
    BottomPomdp b = build_bottom(kb);
    GeneralKb g2 = parse_general(serialize_general(kb.g));
    SpecificKb s2 = parse_specific(serialize_specific(kb.s), g2);
    BottomPomdp c = build_bottom(link_kb(g2, s2));
    for (const BottomPomdp* other : {&b, &c}) {
        CHECK(a.pomdp.states == other->pomdp.states);
        CHECK(a.pomdp.actions == other->pomdp.actions);
        CHECK(a.pomdp.observations == other->pomdp.observations);
        CHECK(a.pomdp.trans == other->pomdp.trans);
        CHECK(a.pomdp.obs == other->pomdp.obs);
    }
}
