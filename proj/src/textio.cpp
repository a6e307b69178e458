#include "hpomdp/textio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hpomdp {

TokenLines tokenize_lines(const std::string& text) {
    TokenLines out;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        out.tokens.push_back(std::move(toks));
        out.line_no.push_back(no);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    // 17 significant digits round-trip IEEE doubles exactly.
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& tok, const std::string& where) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw TextError(where + ": expected a number, got '" + tok + "'");
    return v;
}

long parse_long(const std::string& tok, const std::string& where) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        throw TextError(where + ": expected an integer, got '" + tok + "'");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TextError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TextError("cannot write file: " + path);
    out << content;
    if (!out) throw TextError("short write: " + path);
}

}  // namespace hpomdp
