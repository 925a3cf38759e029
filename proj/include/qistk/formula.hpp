// Formula AST for first-order temporal-epistemic logic.
//
// Nodes are immutable and shared. Ordering and equality are structural, so
// formulas can live in std::set / std::map directly.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qistk {

struct Signature {
    int agents = 1;
    std::map<std::string, int> predicates;  // name -> arity
    std::set<std::string> constants;

    bool is_constant(const std::string& n) const { return constants.count(n) != 0; }
    void declare_predicate(const std::string& name, int arity);
    void declare_constant(const std::string& name);
};

struct Term {
    std::string name;
    bool constant = false;

    static Term var(std::string n) { return {std::move(n), false}; }
    static Term cst(std::string n) { return {std::move(n), true}; }
    bool operator==(const Term& o) const { return constant == o.constant && name == o.name; }
    bool operator<(const Term& o) const {
        return constant != o.constant ? constant < o.constant : name < o.name;
    }
};

enum class Op { Atom, Not, Implies, And, Or, Iff, Forall, Exists, Next, Until, Know, Common };

class Node;
using Formula = std::shared_ptr<const Node>;

class Node {
public:
    Op op;
    std::string name;         // predicate name (Atom) or bound variable (Forall/Exists)
    std::vector<Term> terms;  // Atom arguments
    int agent = 0;            // Know
    Formula a, b;             // children
    std::size_t hash = 0;
    std::size_t size = 1;

    Node(Op o, std::string n, std::vector<Term> ts, int ag, Formula x, Formula y);
};

int compare(const Formula& x, const Formula& y);
bool equal(const Formula& x, const Formula& y);

struct FormulaLess {
    bool operator()(const Formula& x, const Formula& y) const { return compare(x, y) < 0; }
};
struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f->hash; }
};
struct FormulaEq {
    bool operator()(const Formula& x, const Formula& y) const { return equal(x, y); }
};

using FormulaSet = std::set<Formula, FormulaLess>;

// constructors
Formula atom(const std::string& pred, std::vector<Term> terms = {});
Formula neg(Formula f);  // raw negation node
Formula implies(Formula x, Formula y);
Formula conj(Formula x, Formula y);
Formula disj(Formula x, Formula y);
Formula iff(Formula x, Formula y);
Formula forall(const std::string& v, Formula f);
Formula exists(const std::string& v, Formula f);
Formula next(Formula f);
Formula until(Formula x, Formula y);
Formula know(int agent, Formula f);
Formula common(Formula f);

// derived shapes produced by parser sugar
Formula top_of(Formula f);                  // f -> f
Formula eventually(Formula f);              // (f -> f) U f
Formula always(Formula f);                  // ~F ~f
Formula everybody(int agents, Formula f);   // K1 f & ... & Km f
Formula know_dual(int agent, Formula f);    // ~K i ~f
Formula conj_all(const std::vector<Formula>& fs);  // left-nested; fs non-empty
Formula disj_all(const std::vector<Formula>& fs);

// Normal form of a formula modulo double negation and ~X f == X ~f, applied to
// the outermost chain of ~ and X operators.
Formula negate(Formula f);

std::string to_string(const Formula& f);
std::string to_string(const Term& t);

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qistk
