// Minimal s-expression reader/writer for the model and quasimodel formats.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qistk {

struct SExpr {
    bool is_list = false;
    bool quoted = false;  // atom came from a "string"
    std::string atom;
    std::vector<SExpr> items;
    std::size_t line = 0;

    bool is_atom() const { return !is_list; }
    const std::string& head() const;                  // first atom of a list
    const SExpr* find(const std::string& key) const;  // first child list with that head
    std::vector<const SExpr*> find_all(const std::string& key) const;
};

class SExprError : public std::runtime_error {
public:
    SExprError(const std::string& msg, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};

// Parses a single top-level expression. ';' starts a comment to end of line.
SExpr parse_sexpr(const std::string& text);

std::string quote(const std::string& s);

}  // namespace qistk
