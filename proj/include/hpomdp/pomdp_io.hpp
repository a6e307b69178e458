#pragma once

#include <iosfwd>

#include "hpomdp/pomdp.hpp"

namespace hpomdp {

// Structured-text serialization. Doubles are written with enough digits to
// reparse bit for bit, and map-backed fields are emitted in sorted order, so
// writing the same model twice yields identical bytes.

void write_pomdp(std::ostream& out, const Pomdp& p);
Pomdp read_pomdp(std::istream& in);  // throws TextError on malformed input

void write_policy(std::ostream& out, const Policy& pol);
Policy read_policy(std::istream& in);

}  // namespace hpomdp
