// Syntactic operations: variables, substitution, the monodic test, agent
// indexes and the closure sets used by the quasimodel machinery.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qistk/formula.hpp"

namespace qistk {

std::set<std::string> free_variables(const Formula& f);
std::set<std::string> all_variables(const Formula& f);  // free or bound
std::set<std::string> constants_of(const Formula& f);
bool is_sentence(const Formula& f);

// Simultaneous capture-avoiding substitution. Bound variables are renamed to
// base+k (smallest unused k >= 0) only when capture would occur.
Formula substitute(const Formula& f, const std::map<std::string, Term>& bindings);
Formula substitute(const Formula& f, const std::string& var, const Term& t);
// Throws if a bound term names a constant missing from sig.
Formula substitute_checked(const Formula& f, const std::map<std::string, Term>& bindings,
                           const Signature& sig);

bool is_monodic(const Formula& f);
// First offending modal subformula, or null when monodic.
Formula monodic_violation(const Formula& f);

int alternation_depth(const Formula& f);

bool uses_common(const Formula& f);
int max_agent(const Formula& f);

using Index = std::vector<int>;
Index absorptive_concat(const Index& idx, int agent);
bool valid_index(const Index& idx, int agents);
std::string to_string(const Index& idx);

FormulaSet subformulas(const Formula& f);
FormulaSet closure_subC(const Formula& f, int agents);
FormulaSet closure_subCON(const Formula& f, int agents);
// Members of sub_{C X ~} with at most n free variables (n in {0,1}).
FormulaSet closure_sub_n(const Formula& f, int agents, int n);
// sub_x: single free variable renamed to x. x must not be free in f.
FormulaSet closure_sub_x(const Formula& f, int agents, const std::string& x);

// Picks a variable name that does not occur in f ("x", "x0", ...).
std::string fresh_variable(const Formula& f, const std::string& base = "x");

// Flattened, sorted, duplicate-free disjuncts of a (possibly nested) disjunction.
std::vector<Formula> disjuncts(const Formula& f);
Formula canonical_disjunction(const std::vector<Formula>& parts);

// Lazy membership in cl_iota(phi). Holds cl_0 explicitly.
class Closure {
public:
    Closure(Formula phi, int agents, std::string var);

    const Formula& phi() const { return phi_; }
    const std::string& var() const { return var_; }
    int agents() const { return agents_; }
    int depth() const { return ad_; }
    const FormulaSet& cl0() const { return cl0_; }
    const FormulaSet& sentences() const { return sub0_; }

    bool member_level(const Formula& psi, int k) const;                 // cl_k
    bool member_level_agent(const Formula& psi, int k, int agent) const; // cl_{k,i}
    bool member(const Formula& psi, const Index& iota) const;           // cl_iota
    int level_of(const Index& iota) const;

    // cl_{k,i} restricted to disjunctions of at most `width` members of cl_k
    // drawn from `pool` (streaming helper for on-demand layers).
    std::vector<Formula> knowledge_layer(int agent, const std::vector<Formula>& pool,
                                         std::size_t width) const;

private:
    Formula phi_;
    int agents_;
    std::string var_;
    int ad_;
    FormulaSet cl0_;
    FormulaSet sub0_;
};

}  // namespace qistk
