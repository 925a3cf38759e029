#include "qistk/syntax.hpp"

#include <algorithm>

namespace qistk {

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f->op) {
        case Op::Atom:
            for (const auto& t : f->terms)
                if (!t.constant && !bound.count(t.name)) out.insert(t.name);
            return;
        case Op::Forall:
        case Op::Exists: {
            bool fresh = bound.insert(f->name).second;
            collect_free(f->a, bound, out);
            if (fresh) bound.erase(f->name);
            return;
        }
        default:
            if (f->a) collect_free(f->a, bound, out);
            if (f->b) collect_free(f->b, bound, out);
    }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
    if (f->op == Op::Atom) {
        for (const auto& t : f->terms)
            if (!t.constant) out.insert(t.name);
        return;
    }
    if (f->op == Op::Forall || f->op == Op::Exists) out.insert(f->name);
    if (f->a) collect_all(f->a, out);
    if (f->b) collect_all(f->b, out);
}

void collect_constants(const Formula& f, std::set<std::string>& out) {
    if (f->op == Op::Atom) {
        for (const auto& t : f->terms)
            if (t.constant) out.insert(t.name);
        return;
    }
    if (f->a) collect_constants(f->a, out);
    if (f->b) collect_constants(f->b, out);
}

Formula rebuild(const Formula& f, Formula a, Formula b) {
    if (a == f->a && b == f->b) return f;
    switch (f->op) {
        case Op::Not: return neg(a);
        case Op::Implies: return implies(a, b);
        case Op::And: return conj(a, b);
        case Op::Or: return disj(a, b);
        case Op::Iff: return iff(a, b);
        case Op::Forall: return forall(f->name, a);
        case Op::Exists: return exists(f->name, a);
        case Op::Next: return next(a);
        case Op::Until: return until(a, b);
        case Op::Know: return know(f->agent, a);
        case Op::Common: return common(a);
        case Op::Atom: break;
    }
    return f;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    for (int k = 0;; ++k) {
        std::string c = base + std::to_string(k);
        if (!avoid.count(c)) return c;
    }
}

Formula subst(const Formula& f, const std::map<std::string, Term>& m) {
    if (m.empty()) return f;
    switch (f->op) {
        case Op::Atom: {
            bool changed = false;
            std::vector<Term> ts = f->terms;
            for (auto& t : ts) {
                if (t.constant) continue;
                auto it = m.find(t.name);
                if (it != m.end() && !(it->second == t)) {
                    t = it->second;
                    changed = true;
                }
            }
            return changed ? atom(f->name, std::move(ts)) : f;
        }
        case Op::Forall:
        case Op::Exists: {
            std::set<std::string> fv = free_variables(f->a);
            std::map<std::string, Term> inner;
            for (const auto& [k, v] : m)
                if (k != f->name && fv.count(k)) inner.emplace(k, v);
            if (inner.empty()) return f;
            bool capture = false;
            for (const auto& [k, v] : inner)
                if (!v.constant && v.name == f->name) capture = true;
            if (!capture) return rebuild(f, subst(f->a, inner), nullptr);
            std::set<std::string> avoid = all_variables(f->a);
            avoid.insert(f->name);
            for (const auto& [k, v] : inner) {
                avoid.insert(k);
                if (!v.constant) avoid.insert(v.name);
            }
            std::string nv = fresh_name(f->name, avoid);
            inner[f->name] = Term::var(nv);
            Formula body = subst(f->a, inner);
            return f->op == Op::Forall ? forall(nv, body) : exists(nv, body);
        }
        default: {
            Formula a = f->a ? subst(f->a, m) : nullptr;
            Formula b = f->b ? subst(f->b, m) : nullptr;
            return rebuild(f, a, b);
        }
    }
}

Formula find_violation(const Formula& f) {
    if (f->op == Op::Know || f->op == Op::Common || f->op == Op::Next || f->op == Op::Until) {
        if (free_variables(f).size() > 1) return f;
    }
    if (f->a)
        if (auto v = find_violation(f->a)) return v;
    if (f->b)
        if (auto v = find_violation(f->b)) return v;
    return nullptr;
}

int depth_from(const Formula& f, int last) {
    if (f->op == Op::Know) return (f->agent == last ? 0 : 1) + depth_from(f->a, f->agent);
    int d = 0;
    if (f->a) d = std::max(d, depth_from(f->a, last));
    if (f->b) d = std::max(d, depth_from(f->b, last));
    return d;
}

void collect_sub(const Formula& f, FormulaSet& out) {
    if (!out.insert(f).second) return;
    if (f->a) collect_sub(f->a, out);
    if (f->b) collect_sub(f->b, out);
}

void flatten_or(const Formula& f, std::vector<Formula>& out) {
    if (f->op == Op::Or) {
        flatten_or(f->a, out);
        flatten_or(f->b, out);
    } else {
        out.push_back(f);
    }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::string> all_variables(const Formula& f) {
    std::set<std::string> out;
    collect_all(f, out);
    return out;
}

std::set<std::string> constants_of(const Formula& f) {
    std::set<std::string> out;
    collect_constants(f, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

Formula substitute(const Formula& f, const std::map<std::string, Term>& bindings) {
    std::map<std::string, Term> m;
    for (const auto& [k, v] : bindings)
        if (!(v == Term::var(k))) m.emplace(k, v);
    return subst(f, m);
}

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
    return substitute(f, std::map<std::string, Term>{{var, t}});
}

Formula substitute_checked(const Formula& f, const std::map<std::string, Term>& bindings,
                           const Signature& sig) {
    for (const auto& [k, v] : bindings)
        if (v.constant && !sig.is_constant(v.name))
            throw FormulaError("substituting undeclared constant " + v.name);
    return substitute(f, bindings);
}

bool is_monodic(const Formula& f) { return find_violation(f) == nullptr; }
Formula monodic_violation(const Formula& f) { return find_violation(f); }

int alternation_depth(const Formula& f) { return depth_from(f, 0); }

bool uses_common(const Formula& f) {
    if (f->op == Op::Common) return true;
    return (f->a && uses_common(f->a)) || (f->b && uses_common(f->b));
}

int max_agent(const Formula& f) {
    int m = f->op == Op::Know ? f->agent : 0;
    if (f->a) m = std::max(m, max_agent(f->a));
    if (f->b) m = std::max(m, max_agent(f->b));
    return m;
}

Index absorptive_concat(const Index& idx, int agent) {
    if (!idx.empty() && idx.back() == agent) return idx;
    Index r = idx;
    r.push_back(agent);
    return r;
}

bool valid_index(const Index& idx, int agents) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 1 || idx[i] > agents) return false;
        if (i && idx[i] == idx[i - 1]) return false;
    }
    return true;
}

std::string to_string(const Index& idx) {
    if (idx.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(idx[i]);
    }
    return s;
}

FormulaSet subformulas(const Formula& f) {
    FormulaSet out;
    collect_sub(f, out);
    return out;
}

FormulaSet closure_subC(const Formula& f, int agents) {
    FormulaSet out = subformulas(f);
    std::vector<Formula> cs;
    for (const auto& g : out)
        if (g->op == Op::Common) cs.push_back(g);
    for (const auto& c : cs) {
        out.insert(everybody(agents, c));
        for (int i = 1; i <= agents; ++i) out.insert(know(i, c));
    }
    return out;
}

FormulaSet closure_subCON(const Formula& f, int agents) {
    FormulaSet base = closure_subC(f, agents);
    FormulaSet out = base;
    for (const auto& g : base) {
        out.insert(negate(g));
        out.insert(next(g));
        out.insert(next(negate(g)));
    }
    return out;
}

FormulaSet closure_sub_n(const Formula& f, int agents, int n) {
    FormulaSet out;
    for (const auto& g : closure_subCON(f, agents))
        if (static_cast<int>(free_variables(g).size()) <= n) out.insert(g);
    return out;
}

FormulaSet closure_sub_x(const Formula& f, int agents, const std::string& x) {
    if (free_variables(f).count(x)) throw FormulaError("variable " + x + " occurs free in formula");
    FormulaSet out;
    for (const auto& g : closure_sub_n(f, agents, 1)) {
        auto fv = free_variables(g);
        if (fv.empty() || *fv.begin() == x) out.insert(g);
        else out.insert(substitute(g, *fv.begin(), Term::var(x)));
    }
    return out;
}

std::string fresh_variable(const Formula& f, const std::string& base) {
    auto vars = all_variables(f);
    if (!vars.count(base)) return base;
    return fresh_name(base, vars);
}

std::vector<Formula> disjuncts(const Formula& f) {
    std::vector<Formula> out;
    flatten_or(f, out);
    std::sort(out.begin(), out.end(), FormulaLess{});
    out.erase(std::unique(out.begin(), out.end(), FormulaEq{}), out.end());
    return out;
}

Formula canonical_disjunction(const std::vector<Formula>& parts) {
    std::vector<Formula> v = parts;
    std::sort(v.begin(), v.end(), FormulaLess{});
    v.erase(std::unique(v.begin(), v.end(), FormulaEq{}), v.end());
    return disj_all(v);
}

Closure::Closure(Formula phi, int agents, std::string var)
    : phi_(std::move(phi)), agents_(agents), var_(std::move(var)) {
    ad_ = alternation_depth(phi_);
    cl0_ = closure_sub_x(phi_, agents_, var_);
    for (const auto& g : cl0_)
        if (is_sentence(g)) sub0_.insert(g);
}

bool Closure::member_level(const Formula& psi, int k) const {
    if (cl0_.count(psi)) return true;
    if (k == 0) return false;
    for (int i = 1; i <= agents_; ++i)
        if (member_level_agent(psi, k - 1, i)) return true;
    return false;
}

bool Closure::member_level_agent(const Formula& psi, int k, int agent) const {
    if (member_level(psi, k)) return true;
    Formula body = psi;
    if (body->op == Op::Not) body = body->a;
    if (body->op != Op::Know || body->agent != agent) return false;
    // accept any bracketing/ordering whose leaves are members of cl_k
    std::vector<Formula> stack{body->a};
    while (!stack.empty()) {
        Formula d = stack.back();
        stack.pop_back();
        if (member_level(d, k)) continue;
        if (d->op != Op::Or) return false;
        stack.push_back(d->a);
        stack.push_back(d->b);
    }
    return true;
}

int Closure::level_of(const Index& iota) const {
    if (static_cast<int>(iota.size()) > ad_) throw FormulaError("index longer than alternation depth");
    if (iota.empty()) return ad_;
    return ad_ - static_cast<int>(iota.size() - 1);
}

bool Closure::member(const Formula& psi, const Index& iota) const {
    int k = level_of(iota);
    if (iota.empty()) return member_level(psi, k);
    return member_level_agent(psi, k, iota.back());
}

std::vector<Formula> Closure::knowledge_layer(int agent, const std::vector<Formula>& pool,
                                              std::size_t width) const {
    std::vector<Formula> out;
    std::size_t n = pool.size();
    // all non-empty subsets of size <= width, in lexicographic index order
    std::vector<std::vector<std::size_t>> frontier{{}};
    for (std::size_t w = 1; w <= width && w <= n; ++w) {
        std::vector<std::vector<std::size_t>> grown;
        for (const auto& s : frontier) {
            std::size_t from = s.empty() ? 0 : s.back() + 1;
            for (std::size_t j = from; j < n; ++j) {
                auto t = s;
                t.push_back(j);
                grown.push_back(t);
            }
        }
        for (const auto& s : grown) {
            std::vector<Formula> parts;
            for (auto j : s) parts.push_back(pool[j]);
            Formula k = know(agent, canonical_disjunction(parts));
            out.push_back(k);
            out.push_back(neg(k));
        }
        frontier = std::move(grown);
    }
    return out;
}

}  // namespace qistk
