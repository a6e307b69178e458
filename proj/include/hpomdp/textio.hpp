#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpomdp {

// Shared helpers for the line-oriented text formats used by the knowledge
// documents and the model/policy/bundle files.

struct TextError : std::runtime_error {
    explicit TextError(const std::string& what) : std::runtime_error(what) {}
};

// Splits a document into token lines. '#' starts a comment that runs to the
// end of the line; blank lines are dropped. line_no[i] holds the 1-based
// source line of tokens[i] for error reporting.
struct TokenLines {
    std::vector<std::vector<std::string>> tokens;
    std::vector<int> line_no;
};
TokenLines tokenize_lines(const std::string& text);

// Formats a double so that parsing it back yields the identical bit pattern.
std::string fmt_double(double v);

double parse_double(const std::string& tok, const std::string& where);
long parse_long(const std::string& tok, const std::string& where);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hpomdp
