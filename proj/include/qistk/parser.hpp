#pragma once

#include <string>

#include "qistk/formula.hpp"

namespace qistk {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// Strict: every predicate must be declared in sig with the matching arity.
Formula parse_formula(const std::string& text, const Signature& sig);

// Lenient: undeclared predicates are added to sig with the arity of first use.
Formula parse_formula_infer(const std::string& text, Signature& sig);

}  // namespace qistk
