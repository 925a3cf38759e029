// First-order realisation of a set of types over a finite domain: ground the
// types with modal subformulas replaced by their (fixed) surrogate values and
// hand the result to a small CDCL solver.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qistk/formula.hpp"
#include "qistk/model.hpp"
#include "qistk/syntax.hpp"

namespace qistk {

// Propositional CNF with a small CDCL solver (watched literals, first-UIP
// learning, activity-based branching, restarts). Literals are +/-var.
class Cnf {
public:
    int new_var();
    int vars() const { return nvars_; }
    void add(std::vector<int> clause);
    // Model over variables, or nullopt when unsatisfiable or the conflict
    // budget ran out (then `exhausted` is set).
    std::optional<std::vector<bool>> solve(long long max_conflicts = 2000000);
    bool exhausted() const { return exhausted_; }

private:
    int nvars_ = 0;
    std::vector<std::vector<int>> clauses_;
    bool exhausted_ = false;
    bool trivially_unsat_ = false;
};

struct Realization {
    // predicate -> tuples (element indices) where it holds
    std::map<std::string, std::set<Tuple>> interp;
};

struct RealizeProblem {
    const Closure* cl = nullptr;
    std::map<std::string, int> predicates;      // non-surrogate predicates and arities
    std::vector<const FormulaSet*> elements;    // type of each domain element
    std::map<std::string, int> constants;       // constant -> element
};

class RealizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::optional<Realization> realize(const RealizeProblem& p, bool* exhausted = nullptr);

}  // namespace qistk
