// Shared helpers for the test programs: corpus access, formula generation
// and small reference implementations used as oracles.
#pragma once

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qistk/formula.hpp"
#include "qistk/parser.hpp"
#include "qistk/syntax.hpp"

namespace support {

using namespace qistk;

inline std::string corpus(const std::string& name) { return std::string(QISTK_CORPUS_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Non-comment, non-blank lines.
inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        auto a = l.find_first_not_of(" \t\r");
        if (a == std::string::npos || l[a] == ';' || l[a] == '#') continue;
        out.push_back(l.substr(a, l.find_last_not_of(" \t\r") - a + 1));
    }
    return out;
}

inline Formula fml(const std::string& text, int agents = 1, std::set<std::string> constants = {}) {
    Signature sig;
    sig.agents = agents;
    for (auto& c : constants) sig.declare_constant(c);
    return parse_formula_infer(text, sig);
}

struct GenOpts {
    int agents = 2;
    bool common = true;
    bool quantifiers = true;
    bool constants = true;
    bool sugar = true;  // And/Or/Iff/Exists nodes
    std::vector<std::string> vars{"x", "y"};
};

class FormulaGen {
public:
    explicit FormulaGen(std::uint64_t seed, GenOpts o = {}) : rng_(seed), o_(o) {}

    Formula operator()(int depth) { return gen(depth); }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    Term term() {
        if (o_.constants && pick(4) == 0) return Term::cst("c");
        return Term::var(o_.vars[pick(static_cast<int>(o_.vars.size()))]);
    }
    Formula leaf() {
        switch (pick(4)) {
            case 0: return atom("p");
            case 1: return atom("q");
            case 2: return atom("P", {term()});
            default: return atom("R", {term(), term()});
        }
    }
    Formula gen(int depth) {
        if (depth <= 0 || pick(5) == 0) return leaf();
        int k = pick(13);
        auto sub = [&] { return gen(depth - 1); };
        auto var = [&] { return o_.vars[pick(static_cast<int>(o_.vars.size()))]; };
        switch (k) {
            case 0: return neg(sub());
            case 1: return implies(sub(), sub());
            case 2: return o_.sugar ? conj(sub(), sub()) : neg(sub());
            case 3: return o_.sugar ? disj(sub(), sub()) : implies(sub(), sub());
            case 4: return o_.sugar ? iff(sub(), sub()) : next(sub());
            case 5: return o_.quantifiers ? forall(var(), sub()) : neg(sub());
            case 6: return o_.quantifiers && o_.sugar ? exists(var(), sub()) : next(sub());
            case 7: return next(sub());
            case 8: return until(sub(), sub());
            case 9:
            case 10: return know(1 + pick(o_.agents), sub());
            case 11: return o_.common ? common(sub()) : know(1, sub());
            default: return leaf();
        }
    }

    std::mt19937_64 rng_;
    GenOpts o_;
};

// Alpha-equivalence: bound variables compared by binder position.
inline bool alpha_equal(const Formula& a, const Formula& b, std::map<std::string, int> ea = {},
                        std::map<std::string, int> eb = {}, int level = 0) {
    if (a->op != b->op) return false;
    switch (a->op) {
        case Op::Atom: {
            if (a->name != b->name || a->terms.size() != b->terms.size()) return false;
            for (std::size_t k = 0; k < a->terms.size(); ++k) {
                const Term& s = a->terms[k];
                const Term& t = b->terms[k];
                if (s.constant != t.constant) return false;
                if (s.constant) {
                    if (s.name != t.name) return false;
                    continue;
                }
                auto i = ea.find(s.name), j = eb.find(t.name);
                bool bs = i != ea.end(), bt = j != eb.end();
                if (bs != bt) return false;
                if (bs ? i->second != j->second : s.name != t.name) return false;
            }
            return true;
        }
        case Op::Forall:
        case Op::Exists:
            ea[a->name] = level;
            eb[b->name] = level;
            return alpha_equal(a->a, b->a, ea, eb, level + 1);
        case Op::Know:
            if (a->agent != b->agent) return false;
            return alpha_equal(a->a, b->a, ea, eb, level);
        default:
            if (!alpha_equal(a->a, b->a, ea, eb, level)) return false;
            if (a->b) return alpha_equal(a->b, b->b, ea, eb, level);
            return true;
    }
}

// Reference substitution: every binder is renamed to a globally fresh name
// first, so the replacement can never be captured.
inline Formula naive_substitute(const Formula& f, const std::map<std::string, Term>& s, int& fresh) {
    switch (f->op) {
        case Op::Atom: {
            std::vector<Term> ts;
            for (auto& t : f->terms) {
                auto it = t.constant ? s.end() : s.find(t.name);
                ts.push_back(it == s.end() ? t : it->second);
            }
            return atom(f->name, ts);
        }
        case Op::Forall:
        case Op::Exists: {
            std::string nv = "_b" + std::to_string(fresh++);
            auto inner = s;
            inner[f->name] = Term::var(nv);
            Formula body = naive_substitute(f->a, inner, fresh);
            return f->op == Op::Forall ? forall(nv, body) : exists(nv, body);
        }
        case Op::Not: return neg(naive_substitute(f->a, s, fresh));
        case Op::Next: return next(naive_substitute(f->a, s, fresh));
        case Op::Common: return common(naive_substitute(f->a, s, fresh));
        case Op::Know: return know(f->agent, naive_substitute(f->a, s, fresh));
        case Op::Implies: return implies(naive_substitute(f->a, s, fresh), naive_substitute(f->b, s, fresh));
        case Op::And: return conj(naive_substitute(f->a, s, fresh), naive_substitute(f->b, s, fresh));
        case Op::Or: return disj(naive_substitute(f->a, s, fresh), naive_substitute(f->b, s, fresh));
        case Op::Iff: return iff(naive_substitute(f->a, s, fresh), naive_substitute(f->b, s, fresh));
        case Op::Until: return until(naive_substitute(f->a, s, fresh), naive_substitute(f->b, s, fresh));
    }
    return f;
}

}  // namespace support
