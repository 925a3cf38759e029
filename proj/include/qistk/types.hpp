// Types (maximal coherent subsets of a closure), state candidates, points and
// the structural suitability relations between them.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qistk/formula.hpp"
#include "qistk/syntax.hpp"

namespace qistk {

struct TypeSet {
    Index index;
    FormulaSet members;

    bool contains(const Formula& f) const { return members.count(f) != 0; }
    bool operator<(const TypeSet& o) const;
    bool operator==(const TypeSet& o) const;
};

// Truth of a closure formula in a type: direct membership, membership of its
// normalised negation, or a raw negation of something decidable.
std::optional<bool> holds_in(const FormulaSet& t, const Formula& f);

struct Violation {
    std::string rule;
    Formula formula;
    std::string describe() const;
};

// Local coherence of the propositional/temporal/epistemic connectives.
class TypeSpace {
public:
    TypeSpace(const Closure& cl);

    const Closure& closure() const { return cl_; }
    // Representatives: one formula per {psi, negate(psi)} pair of cl_0.
    const std::vector<Formula>& reps() const { return reps_; }
    // (rep index, flipped) for a closure formula, if it is one.
    std::optional<std::pair<int, bool>> literal(const Formula& f) const;
    bool is_next_rep(int r) const { return reps_[r]->op == Op::Next; }
    // X-representatives whose formula does not occur as a subformula of sub_C.
    bool is_pure_next(int r) const { return pure_next_[r]; }

    using Accessor = std::function<std::optional<bool>(const Formula&)>;
    std::optional<Violation> check(const Accessor& value, bool weak_until = false) const;

    // Assignment over reps -> member set (all cl_0 formulas that hold).
    FormulaSet to_set(const std::vector<char>& assign) const;
    std::optional<bool> value(const std::vector<char>& assign, const Formula& f) const;

    // All coherent assignments. With `skip_pure_next` the pure X-reps are
    // left 0 and the until rule is checked in its local (weak) form.
    std::vector<std::vector<char>> enumerate(bool skip_pure_next, std::size_t limit, bool& complete,
                                             const std::vector<std::pair<int, bool>>& forced = {}) const;

private:
    struct Constraint {
        enum Kind { Bool, Until, Common, KnowT, KnowDisj, ForallInst, ExistsInst } kind;
        std::vector<Formula> f;  // f[0] = the formula, rest as the rule needs
        int maxrep = -1;
        bool uses_pure = false;
    };
    std::optional<bool> eval(const Constraint& c, const Accessor& v, bool weak_until) const;

    const Closure& cl_;
    std::vector<Formula> reps_;
    std::vector<char> pure_next_;
    std::map<Formula, std::pair<int, bool>, FormulaLess> lit_;
    std::vector<Constraint> cons_;
};

// Coherence of an explicit set of formulas over cl_iota. Members outside the
// closure are reported as rule "closure".
std::optional<Violation> coherence_check(const FormulaSet& t, const Closure& cl, const Index& iota);

struct EnumResult {
    std::vector<TypeSet> types;
    bool complete = true;
};
EnumResult enumerate_types(const Closure& cl, const Index& iota, std::size_t limit = 1u << 20);

// Structural suitability (the primary criterion for types).
bool next_suitable(const TypeSet& a, const TypeSet& b, const Closure& cl);
bool epi_suitable(const TypeSet& a, const TypeSet& b, int agent, const Closure& cl);

struct StateCandidate {
    Index index;
    std::vector<TypeSet> types;          // sorted, distinct
    std::map<std::string, int> con;      // constant -> position in types

    void normalise();  // sort types, remap con
    int find(const TypeSet& t) const;    // -1 if absent
};

struct QPoint {
    StateCandidate candidate;
    int type = 0;
    const TypeSet& distinguished() const { return candidate.types.at(type); }
};

// Candidate checks: sentence agreement and total constant map.
std::optional<std::string> candidate_violation(const StateCandidate& c, const Closure& cl);

bool candidate_next_suitable(const StateCandidate& a, const StateCandidate& b, const Closure& cl);
bool candidate_epi_suitable(const StateCandidate& a, const StateCandidate& b, int agent, const Closure& cl);
bool point_next_suitable(const QPoint& a, const QPoint& b, const Closure& cl, const std::string* constant = nullptr);
bool point_epi_suitable(const QPoint& a, const QPoint& b, int agent, const Closure& cl,
                        const std::string* constant = nullptr);

// A type as the conjunction of its members (member order), with the closure
// variable renamed to `v` (a variable or constant).
Formula type_formula(const TypeSet& t, const std::string& var, const Term& v);
Formula alpha_of(const StateCandidate& c, const std::string& var);
Formula beta_of(const QPoint& p, const std::string& var);

// Conjunction of all types of `universe` i-suitable for t.
Formula phi_conjunction(const TypeSet& t, int agent, const std::vector<TypeSet>& universe, const Closure& cl);
std::vector<int> phi_points(const QPoint& p, int agent, const std::vector<QPoint>& universe, const Closure& cl);

bool concordant(const std::vector<TypeSet>& a, const std::vector<TypeSet>& b, int agent, const Closure& cl);

template <typename T>
std::vector<T> fuse(const std::vector<T>& lambda, const std::vector<T>& mu) {
    if (lambda.empty() || mu.empty() || !(lambda.back() == mu.front()))
        throw std::invalid_argument("fuse: last element of the first sequence must equal the first of the second");
    std::vector<T> out(lambda.begin(), lambda.end() - 1);
    out.insert(out.end(), mu.begin(), mu.end());
    return out;
}

}  // namespace qistk
