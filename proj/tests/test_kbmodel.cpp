#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hpomdp/kb.hpp"

using namespace hpomdp;

TEST_CASE("general document with a four-action module parses") {
    const std::string doc =
        "var robot_loc\n"
        "rel stay vv over robot_loc\n"
        "module navigation\n"
        "action up modifies robot_loc\n"
        "action down modifies robot_loc\n"
        "action left modifies robot_loc\n"
        "action right modifies robot_loc\n"
        "trans up rel stay 0.2\n";
    GeneralKb g = parse_general(doc);
    REQUIRE(g.actions.size() == 4);
    CHECK(g.actions[0].name == "up");
    CHECK(g.actions[3].name == "right");
    for (const auto& a : g.actions) {
        CHECK(a.var == "robot_loc");
        CHECK(a.module == "navigation");
    }
    CHECK(g.trans_entries.size() == 1);
    CHECK(g.trans_entries[0].by_rel);
}

TEST_CASE("empty general document is rejected") {
    CHECK_THROWS_AS(parse_general("# nothing here\n"), KbError);
}

TEST_CASE("an action cannot modify two variables") {
    const std::string doc =
        "var a\nvar b\nmodule m\n"
        "action go modifies a\n"
        "action go modifies b\n";
    CHECK_THROWS_WITH_AS(parse_general(doc), doctest::Contains("two variables"), KbError);
    const std::string dup =
        "var a\nmodule m\n"
        "action go modifies a\n"
        "action go modifies a\n";
    CHECK_THROWS_WITH_AS(parse_general(dup), doctest::Contains("duplicate action"), KbError);
}

TEST_CASE("trans entries must reference a vv relation over the action's variable") {
    CHECK_THROWS_AS(parse_general("var a\nmodule m\naction go modifies a\n"
                                  "trans go rel missing 0.5\n"),
                    KbError);
    CHECK_THROWS_AS(parse_general("var a\nvar b\nmodule m\naction go modifies a\n"
                                  "rel r vv over b\ntrans go rel r 0.5\n"),
                    KbError);
    CHECK_THROWS_AS(parse_general("var a\nmodule m\naction go modifies a\n"
                                  "rel r vo over a\ntrans go rel r 0.5\n"),
                    KbError);
}

TEST_CASE("12-cell world links and validates cleanly") {
    GeneralKb g = parse_general(fixture::general_doc());
    SpecificKb s = parse_specific(fixture::specific_doc(), g);
    REQUIRE(s.values.at("robot_loc").size() == 12);
    REQUIRE(s.observations.at("robot_loc").size() == 12);
    CHECK(s.abstract_values.size() == 11);
    KnowledgeBase kb = link_kb(g, s);
    CHECK(kb.hier_root == "root");
    ValidationReport rep = validate(kb);
    INFO(rep.to_string());
    CHECK(rep.ok());

    // Parent chains all reach the derived root within the tree depth.
    for (const auto& [c, p] : kb.hier_parent) {
        (void)p;
        std::string cur = c;
        int hops = 0;
        while (cur != kb.hier_root) {
            REQUIRE(kb.hier_parent.count(cur));
            cur = kb.hier_parent.at(cur);
            REQUIRE(++hops <= 4);
        }
    }
}

TEST_CASE("hierarchy pair cycles and second roots are parse errors") {
    GeneralKb g = parse_general(
        "var v\nmodule m\naction go modifies v\nrel stay vv over v\n"
        "trans go rel stay 1.0\nhier over v\n");
    CHECK_THROWS_WITH_AS(
        parse_specific("values v a b\nobservations v a b\nhpair a b\nhpair b a\n", g),
        doctest::Contains("cycle"), KbError);
    CHECK_THROWS_WITH_AS(parse_specific("values v a b\nobservations v a b\n"
                                        "abstract p q\nhpair a p\nhpair b q\n",
                                        g),
                         doctest::Contains("second root"), KbError);
    CHECK_THROWS_WITH_AS(parse_specific("values v a\nobservations v a\n"
                                        "abstract p\nhpair a p\nhpair a q\n",
                                        g),
                         doctest::Contains("two parents"), KbError);
}

TEST_CASE("relation pairs must reference declared identifiers") {
    GeneralKb g = parse_general(
        "var v\nmodule m\naction go modifies v\nrel r vv over v\ntrans go rel r 1.0\n");
    CHECK_THROWS_WITH_AS(parse_specific("values v a b\nobservations v a b\npair r a zz\n", g),
                         doctest::Contains("unknown value zz"), KbError);
}

TEST_CASE("expanded rows merge relation and literal contributions") {
    GeneralKb g = parse_general(fixture::general_doc());
    KnowledgeBase kb = link_kb(g, parse_specific(fixture::specific_doc(), g));
    // c5 is interior; moving up from c5 lands on c2.
    auto row = expand_trans_row(kb, "up", "c5");
    REQUIRE(row.size() == 2);
    CHECK(row.at("c5") == doctest::Approx(0.2));
    CHECK(row.at("c2") == doctest::Approx(0.8));
    auto orow = expand_obs_row(kb, "up", "c5");
    REQUIRE(orow.size() == 9);
    CHECK(orow.at("c5") == doctest::Approx(0.6));
    CHECK(orow.at("c1") == doctest::Approx(0.05));
    double sum = 0;
    for (auto& [k, p] : orow) {
        (void)k;
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("executability by relation resolves to the relation's source values") {
    GeneralKb g = parse_general(fixture::general_doc());
    KnowledgeBase kb = link_kb(g, parse_specific(fixture::specific_doc(), g));
    const auto& forb = kb.forbidden_values.at("up");
    CHECK(forb == std::set<std::string>{"c1", "c2", "c3"});
    CHECK(kb.forbidden_values.at("left") == std::set<std::string>{"c1", "c4", "c7", "c10"});
}

TEST_CASE("validation reports a transition row that does not sum to one") {
    // Drop the executability exclusions: boundary cells now have rows that
    // only carry the stay mass.
    std::string g_doc = fixture::general_doc();
    std::string cleaned;
    std::istringstream in(g_doc);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("exec-forbid", 0) != 0) cleaned += line + "\n";
    GeneralKb g = parse_general(cleaned);
    KnowledgeBase kb = link_kb(g, parse_specific(fixture::specific_doc(), g));
    ValidationReport rep = validate(kb);
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.where == "trans up @ c1" && v.what.find("0.2") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validation flags a variable no action modifies") {
    GeneralKb g = parse_general(
        "var v\nvar unused\nmodule m\naction go modifies v\nrel stay vv over v\n"
        "trans go rel stay 1.0\n");
    SpecificKb s = parse_specific(
        "values v a\nobservations v a\nvalues unused x\nobservations unused x\npair stay a a\n", g);
    ValidationReport rep = validate(link_kb(g, s));
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.where == "var unused" && v.what.find("no action") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("serialization round-trips to a fixed point") {
    GeneralKb g1 = parse_general(fixture::general_doc());
    SpecificKb s1 = parse_specific(fixture::specific_doc(), g1);
    std::string gt = serialize_general(g1);
    std::string st = serialize_specific(s1);
    GeneralKb g2 = parse_general(gt);
    SpecificKb s2 = parse_specific(st, g2);
    CHECK(serialize_general(g2) == gt);
    CHECK(serialize_specific(s2) == st);
    // And the reparsed model still validates.
    CHECK(validate(link_kb(g2, s2)).ok());
}
