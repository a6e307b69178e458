#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hpomdp/textio.hpp"

namespace hpomdp {

// Two-document knowledge model. The general document declares modules,
// variables, actions, relations and probability attachments; the specific
// document fills in value/observation alphabets, relation pairs, the
// hierarchy tree and state constraints for one concrete environment.

struct KbError : TextError {
    using TextError::TextError;
};

enum class RelKind { ValueValue, ValueObs };

struct Relation {
    std::string name;
    RelKind kind = RelKind::ValueValue;
    std::string var;
    // Filled from the specific document. For vv relations both members are
    // values of `var`; for vo relations the second member is an observation.
    std::vector<std::pair<std::string, std::string>> pairs;
};

struct ActionDecl {
    std::string name;
    std::string var;     // the single variable this action modifies
    std::string module;  // owning basic module
};

// One transition or observation attachment. Either a relation reference
// (all of the relation's pairs receive `prob`) or a literal pair.
struct ProbEntry {
    std::string action;
    bool by_rel = false;
    std::string rel;
    std::string from;  // literal form: source value
    std::string to;    // literal form: target value (trans) or observation (obs)
    double prob = 0.0;
};

struct ExecForbid {
    std::string action;
    bool by_rel = false;
    std::string rel;                  // forbidden at the sources of this relation's pairs
    std::vector<std::string> values;  // or at these listed values
};

struct GeneralKb {
    std::vector<std::string> modules;
    std::vector<std::string> vars;
    std::vector<ActionDecl> actions;
    std::vector<Relation> rels;  // pairs empty until linked
    std::vector<ProbEntry> trans_entries;
    std::vector<ProbEntry> obs_entries;
    std::string hier_var;  // empty when no hierarchy is declared
    std::vector<ExecForbid> exec_forbids;

    const Relation* find_rel(const std::string& name) const;
    const ActionDecl* find_action(const std::string& name) const;
    bool has_var(const std::string& name) const;
};

struct SpecificKb {
    // Ordered alphabets per variable; declaration order defines state order.
    std::map<std::string, std::vector<std::string>> values;
    std::map<std::string, std::vector<std::string>> observations;
    std::vector<std::string> abstract_values;
    std::vector<std::pair<std::string, std::string>> hpairs;  // (child, parent)
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> rel_pairs;
    std::vector<std::map<std::string, std::string>> constraints;  // forbidden partial assignments
};

// The linked model: general + specific with every cross reference resolved.
struct KnowledgeBase {
    GeneralKb g;
    SpecificKb s;

    // Hierarchy resolution (empty when g.hier_var is empty).
    std::map<std::string, std::string> hier_parent;  // child id -> parent id
    std::string hier_root;                           // derived root identifier

    // Per action: resolved set of values where execution is forbidden.
    std::map<std::string, std::set<std::string>> forbidden_values;

    const std::vector<std::string>& values_of(const std::string& var) const;
    const std::vector<std::string>& observations_of(const std::string& var) const;
};

struct Violation {
    std::string where;
    std::string what;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

GeneralKb parse_general(const std::string& text);
SpecificKb parse_specific(const std::string& text, const GeneralKb& g);
KnowledgeBase link_kb(const GeneralKb& g, const SpecificKb& s);

// Structural checks beyond grammar: row sums of expanded distributions,
// unreferenced variables, hierarchy coverage, constraint references.
ValidationReport validate(const KnowledgeBase& kb);

std::string serialize_general(const GeneralKb& g);
std::string serialize_specific(const SpecificKb& s);

// Expanded probability row of one action at one source value. For trans
// entries the keys are target values, for obs entries observation ids.
// Duplicate contributions to the same key sum.
std::map<std::string, double> expand_row(const KnowledgeBase& kb, const ProbEntry* entries_begin,
                                         const ProbEntry* entries_end, const std::string& action,
                                         const std::string& value);
std::map<std::string, double> expand_trans_row(const KnowledgeBase& kb, const std::string& action,
                                               const std::string& value);
std::map<std::string, double> expand_obs_row(const KnowledgeBase& kb, const std::string& action,
                                             const std::string& value);

}  // namespace hpomdp
