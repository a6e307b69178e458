#pragma once

#include <iosfwd>
#include <string>

#include "hpomdp/hierarchy.hpp"

namespace hpomdp {

// Everything the init stage produces: the knowledge documents the hierarchy
// was grounded from, plus the hierarchy itself with its solved abstract
// actions. Loading re-grounds the bottom model from the documents (cheap) and
// restores the solved pieces verbatim (the expensive part).
struct Bundle {
    std::string general_text;
    std::string specific_text;
    Hierarchy hier;
};

// Canonical text serialization: identical bundles produce identical bytes.
void write_bundle(std::ostream& out, const Bundle& b);
Bundle read_bundle(std::istream& in);  // throws TextError on malformed input

void save_bundle(const std::string& path, const Bundle& b);
Bundle load_bundle(const std::string& path);

}  // namespace hpomdp
