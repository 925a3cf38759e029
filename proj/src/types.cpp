#include "qistk/types.hpp"

#include <algorithm>
#include <functional>

namespace qistk {

namespace {

// Positive representative of f modulo ~~ and ~X == X~.
std::pair<Formula, bool> canon(const Formula& f) {
    if (f->op == Op::Not) {
        auto [g, fl] = canon(f->a);
        return {g, !fl};
    }
    if (f->op == Op::Next) {
        auto [g, fl] = canon(f->a);
        return {g == f->a ? f : next(g), fl};
    }
    return {f, false};
}

bool member_or_neg(const FormulaSet& t, const Formula& f) { return t.count(f) || t.count(negate(f)); }

std::optional<Formula> instance(const Formula& q, const std::string& x) {
    auto fv = free_variables(q->a);
    fv.erase(q->name);
    if (!fv.empty()) return std::nullopt;
    return substitute(q->a, q->name, Term::var(x));
}

}  // namespace

bool TypeSet::operator<(const TypeSet& o) const {
    if (index != o.index) return index < o.index;
    return std::lexicographical_compare(members.begin(), members.end(), o.members.begin(), o.members.end(),
                                        FormulaLess{});
}

bool TypeSet::operator==(const TypeSet& o) const {
    return index == o.index && members.size() == o.members.size() &&
           std::equal(members.begin(), members.end(), o.members.begin(), FormulaEq{});
}

std::optional<bool> holds_in(const FormulaSet& t, const Formula& f) {
    if (t.count(f)) return true;
    if (t.count(negate(f))) return false;
    if (f->op == Op::Not) {
        auto v = holds_in(t, f->a);
        if (v) return !*v;
    }
    auto [g, fl] = canon(f);
    if (g != f) {
        if (t.count(g)) return !fl;
        if (t.count(negate(g))) return fl;
    }
    return std::nullopt;
}

std::string Violation::describe() const { return rule + ": " + (formula ? to_string(formula) : std::string("?")); }

TypeSpace::TypeSpace(const Closure& cl) : cl_(cl) {
    FormulaSet repset;
    for (const auto& g : cl.cl0()) repset.insert(canon(g).first);
    reps_.assign(repset.begin(), repset.end());
    std::stable_sort(reps_.begin(), reps_.end(), [](const Formula& x, const Formula& y) { return x->size < y->size; });
    for (int r = 0; r < static_cast<int>(reps_.size()); ++r) lit_[reps_[r]] = {r, false};

    // sub_C part, renamed like cl_0
    FormulaSet subc;
    for (const auto& g : closure_subC(cl.phi(), cl.agents())) {
        auto fv = free_variables(g);
        if (fv.size() > 1) continue;
        Formula h = fv.empty() || *fv.begin() == cl.var() ? g : substitute(g, *fv.begin(), Term::var(cl.var()));
        subc.insert(canon(h).first);
    }
    pure_next_.assign(reps_.size(), 0);
    for (std::size_t r = 0; r < reps_.size(); ++r)
        pure_next_[r] = reps_[r]->op == Op::Next && !subc.count(reps_[r]);

    auto add = [&](Constraint::Kind k, std::vector<Formula> fs) {
        Constraint c{k, std::move(fs)};
        for (const auto& f : c.f) {
            auto l = literal(f);
            if (!l) return;  // not decidable inside cl_0: rule does not apply
            c.maxrep = std::max(c.maxrep, l->first);
            if (pure_next_[l->first]) c.uses_pure = true;
        }
        cons_.push_back(std::move(c));
    };
    const std::string& x = cl.var();
    for (const auto& f : reps_) {
        switch (f->op) {
            case Op::And: case Op::Or: case Op::Implies: case Op::Iff:
                add(Constraint::Bool, {f, f->a, f->b});
                break;
            case Op::Until:
                add(Constraint::Until, {f, f->a, f->b, next(f)});
                break;
            case Op::Common:
                add(Constraint::Common, {f, f->a, everybody(cl.agents(), f)});
                break;
            case Op::Know:
                add(Constraint::KnowT, {f, f->a});
                break;
            case Op::Forall:
            case Op::Exists:
                if (auto inst = instance(f, x))
                    add(f->op == Op::Forall ? Constraint::ForallInst : Constraint::ExistsInst, {f, *inst});
                break;
            default:
                break;
        }
    }
}

std::optional<std::pair<int, bool>> TypeSpace::literal(const Formula& f) const {
    auto [g, fl] = canon(f);
    auto it = lit_.find(g);
    if (it == lit_.end()) return std::nullopt;
    return std::make_pair(it->second.first, fl);
}

std::optional<bool> TypeSpace::eval(const Constraint& c, const Accessor& v, bool weak_until) const {
    std::vector<bool> val;
    for (std::size_t k = 0; k < c.f.size(); ++k) {
        if (weak_until && c.kind == Constraint::Until && k == 3) {
            val.push_back(false);
            continue;
        }
        auto b = v(c.f[k]);
        if (!b) return std::nullopt;
        val.push_back(*b);
    }
    switch (c.kind) {
        case Constraint::Bool: {
            bool r = false;
            switch (c.f[0]->op) {
                case Op::And: r = val[1] && val[2]; break;
                case Op::Or: r = val[1] || val[2]; break;
                case Op::Implies: r = !val[1] || val[2]; break;
                default: r = val[1] == val[2]; break;
            }
            return val[0] == r;
        }
        case Constraint::Until:
            if (weak_until) return val[0] ? (val[1] || val[2]) : !val[2];
            return val[0] == (val[2] || (val[1] && val[3]));
        case Constraint::Common: return val[0] == (val[1] && val[2]);
        case Constraint::KnowT: return !val[0] || val[1];
        case Constraint::ForallInst: return !val[0] || val[1];
        case Constraint::ExistsInst: return !val[1] || val[0];
        case Constraint::KnowDisj: return true;
    }
    return true;
}

std::optional<Violation> TypeSpace::check(const Accessor& value, bool weak_until) const {
    static const char* names[] = {"connective", "until", "common", "knowledge", "knowledge", "forall", "exists"};
    for (const auto& c : cons_) {
        auto r = eval(c, value, weak_until && c.uses_pure);
        if (r && !*r) return Violation{names[c.kind], c.f[0]};
    }
    return std::nullopt;
}

std::optional<bool> TypeSpace::value(const std::vector<char>& assign, const Formula& f) const {
    auto l = literal(f);
    if (!l) return std::nullopt;
    return static_cast<bool>(assign[l->first]) != l->second;
}

FormulaSet TypeSpace::to_set(const std::vector<char>& assign) const {
    FormulaSet out;
    for (const auto& g : cl_.cl0())
        if (*value(assign, g)) out.insert(g);
    return out;
}

std::vector<std::vector<char>> TypeSpace::enumerate(bool skip_pure_next, std::size_t limit, bool& complete,
                                                    const std::vector<std::pair<int, bool>>& forced) const {
    const int n = static_cast<int>(reps_.size());
    std::vector<std::vector<const Constraint*>> at(n);
    for (const auto& c : cons_) {
        if (c.maxrep < 0) continue;
        int m = c.maxrep;
        if (skip_pure_next && c.uses_pure) {
            if (c.kind != Constraint::Until) continue;
            m = -1;  // recompute over non-pure literals
            for (std::size_t k = 0; k < 3; ++k) m = std::max(m, literal(c.f[k])->first);
        }
        at[m].push_back(&c);
    }
    std::vector<int> fixed(n, -1);
    for (auto [r, v] : forced) fixed[r] = v;

    std::vector<std::vector<char>> out;
    std::vector<char> cur(n, 0);
    complete = true;
    auto acc = [&](const Formula& f) { return value(cur, f); };
    std::function<bool(int)> dfs = [&](int r) -> bool {
        if (r == n) {
            if (out.size() >= limit) {
                complete = false;
                return false;
            }
            out.push_back(cur);
            return true;
        }
        std::vector<char> choices;
        if (skip_pure_next && pure_next_[r]) choices = {0};
        else if (fixed[r] >= 0) choices = {static_cast<char>(fixed[r])};
        else choices = {0, 1};
        for (char v : choices) {
            cur[r] = v;
            bool ok = true;
            for (const auto* c : at[r]) {
                auto e = eval(*c, acc, skip_pure_next && c->uses_pure);
                if (e && !*e) { ok = false; break; }
            }
            if (ok && !dfs(r + 1)) return false;
        }
        cur[r] = 0;
        return true;
    };
    dfs(0);
    return out;
}

std::optional<Violation> coherence_check(const FormulaSet& t, const Closure& cl, const Index& iota) {
    for (const auto& f : t)
        if (!cl.member(f, iota)) return Violation{"closure", f};
    // maximality over cl_0, and consistency of representatives
    for (const auto& g : cl.cl0()) {
        bool in = t.count(g), out = t.count(negate(g));
        if (in == out) return Violation{"negation", g};
    }
    TypeSpace ts(cl);
    auto acc = [&](const Formula& f) -> std::optional<bool> { return holds_in(t, f); };
    for (const auto& g : cl.cl0()) {
        auto v = holds_in(t, g);
        auto w = acc(canon(g).first);
        if (v && w && *v != (*w != canon(g).second)) return Violation{"negation", g};
    }
    if (auto v = ts.check(acc)) return v;
    // knowledge disjunctions of higher layers, present on demand
    for (const auto& f : t) {
        if (cl.cl0().count(f)) continue;
        Formula k = f->op == Op::Not ? f->a : f;
        if (f->op == Op::Not && t.count(k)) return Violation{"negation", f};
        if (f->op != Op::Know) continue;
        bool some = false, decided = true;
        for (const auto& d : disjuncts(k->a)) {
            auto v = holds_in(t, d);
            if (!v) decided = false;
            else if (*v) some = true;
        }
        if (decided && !some) return Violation{"knowledge", f};
    }
    return std::nullopt;
}

EnumResult enumerate_types(const Closure& cl, const Index& iota, std::size_t limit) {
    TypeSpace ts(cl);
    EnumResult r;
    auto all = ts.enumerate(false, limit, r.complete);
    for (const auto& a : all) r.types.push_back({iota, ts.to_set(a)});
    std::sort(r.types.begin(), r.types.end());
    return r;
}

bool next_suitable(const TypeSet& a, const TypeSet& b, const Closure& cl) {
    if (a.index != b.index) return false;
    for (const auto& g : cl.cl0()) {
        if (g->op != Op::Next) continue;
        auto x = holds_in(a.members, g), y = holds_in(b.members, g->a);
        if (x && y && *x != *y) return false;
    }
    return true;
}

bool epi_suitable(const TypeSet& a, const TypeSet& b, int agent, const Closure& cl) {
    if (absorptive_concat(a.index, agent) != absorptive_concat(b.index, agent)) return false;
    for (const auto& g : cl.cl0()) {
        if (g->op != Op::Know || g->agent != agent) continue;
        if (holds_in(a.members, g) != holds_in(b.members, g)) return false;
    }
    auto kset = [&](const TypeSet& t) {
        FormulaSet s;
        for (const auto& f : t.members) {
            if (cl.cl0().count(f)) continue;
            const Formula& k = f->op == Op::Not ? f->a : f;
            if (k->op == Op::Know && k->agent == agent) s.insert(f);
        }
        return s;
    };
    auto ka = kset(a), kb = kset(b);
    for (const auto& f : ka)
        if (member_or_neg(b.members, f) && !kb.count(f)) return false;
    for (const auto& f : kb)
        if (member_or_neg(a.members, f) && !ka.count(f)) return false;
    return true;
}

void StateCandidate::normalise() {
    std::map<std::string, TypeSet> cons;
    for (const auto& [c, k] : con) cons.emplace(c, types.at(k));
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    for (auto& [c, k] : con) k = find(cons.at(c));
}

int StateCandidate::find(const TypeSet& t) const {
    auto it = std::lower_bound(types.begin(), types.end(), t);
    if (it != types.end() && *it == t) return static_cast<int>(it - types.begin());
    for (std::size_t k = 0; k < types.size(); ++k)
        if (types[k] == t) return static_cast<int>(k);
    return -1;
}

std::optional<std::string> candidate_violation(const StateCandidate& c, const Closure& cl) {
    if (c.types.empty()) return "candidate has no types";
    for (const auto& t : c.types) {
        if (t.index != c.index) return "type index differs from candidate index";
        for (const auto& s : cl.sentences())
            if (holds_in(t.members, s) != holds_in(c.types[0].members, s))
                return "types disagree on sentence " + to_string(s);
    }
    for (const auto& k : constants_of(cl.phi()))
        if (!c.con.count(k)) return "constant " + k + " has no type";
    for (const auto& [k, i] : c.con)
        if (i < 0 || i >= static_cast<int>(c.types.size())) return "constant " + k + " maps outside the candidate";
    return std::nullopt;
}

bool candidate_next_suitable(const StateCandidate& a, const StateCandidate& b, const Closure& cl) {
    for (const auto& t : a.types)
        if (std::none_of(b.types.begin(), b.types.end(), [&](const TypeSet& u) { return next_suitable(t, u, cl); }))
            return false;
    for (const auto& u : b.types)
        if (std::none_of(a.types.begin(), a.types.end(), [&](const TypeSet& t) { return next_suitable(t, u, cl); }))
            return false;
    for (const auto& [c, k] : a.con) {
        auto it = b.con.find(c);
        if (it == b.con.end() || !next_suitable(a.types[k], b.types[it->second], cl)) return false;
    }
    return true;
}

bool candidate_epi_suitable(const StateCandidate& a, const StateCandidate& b, int agent, const Closure& cl) {
    auto covered = [&](const StateCandidate& x, const StateCandidate& y) {
        for (const auto& t : x.types)
            if (std::none_of(y.types.begin(), y.types.end(),
                             [&](const TypeSet& u) { return epi_suitable(t, u, agent, cl); }))
                return false;
        return true;
    };
    if (!covered(a, b) || !covered(b, a)) return false;
    for (const auto& [c, k] : a.con) {
        auto it = b.con.find(c);
        if (it == b.con.end() || !epi_suitable(a.types[k], b.types[it->second], agent, cl)) return false;
    }
    return true;
}

bool point_next_suitable(const QPoint& a, const QPoint& b, const Closure& cl, const std::string* constant) {
    if (!candidate_next_suitable(a.candidate, b.candidate, cl)) return false;
    if (!next_suitable(a.distinguished(), b.distinguished(), cl)) return false;
    if (constant) {
        auto x = a.candidate.con.find(*constant), y = b.candidate.con.find(*constant);
        if (x == a.candidate.con.end() || y == b.candidate.con.end()) return false;
        if (x->second != a.type || y->second != b.type) return false;
    }
    return true;
}

bool point_epi_suitable(const QPoint& a, const QPoint& b, int agent, const Closure& cl,
                        const std::string* constant) {
    if (!candidate_epi_suitable(a.candidate, b.candidate, agent, cl)) return false;
    if (!epi_suitable(a.distinguished(), b.distinguished(), agent, cl)) return false;
    if (constant) {
        auto x = a.candidate.con.find(*constant), y = b.candidate.con.find(*constant);
        if (x == a.candidate.con.end() || y == b.candidate.con.end()) return false;
        if (x->second != a.type || y->second != b.type) return false;
    }
    return true;
}

Formula type_formula(const TypeSet& t, const std::string& var, const Term& v) {
    std::vector<Formula> parts;
    for (const auto& f : t.members) parts.push_back(v.name == var && !v.constant ? f : substitute(f, var, v));
    if (parts.empty()) throw std::invalid_argument("empty type");
    return conj_all(parts);
}

Formula alpha_of(const StateCandidate& c, const std::string& var) {
    std::vector<Formula> parts, alts;
    for (const auto& t : c.types) {
        Formula tf = type_formula(t, var, Term::var(var));
        parts.push_back(exists(var, tf));
        alts.push_back(tf);
    }
    parts.push_back(forall(var, disj_all(alts)));
    for (const auto& [k, i] : c.con) parts.push_back(type_formula(c.types[i], var, Term::cst(k)));
    return conj_all(parts);
}

Formula beta_of(const QPoint& p, const std::string& var) {
    return conj(alpha_of(p.candidate, var), type_formula(p.distinguished(), var, Term::var(var)));
}

Formula phi_conjunction(const TypeSet& t, int agent, const std::vector<TypeSet>& universe, const Closure& cl) {
    std::vector<Formula> parts;
    for (const auto& u : universe)
        if (epi_suitable(t, u, agent, cl)) parts.push_back(type_formula(u, cl.var(), Term::var(cl.var())));
    if (parts.empty()) return top_of(cl.phi());
    return conj_all(parts);
}

std::vector<int> phi_points(const QPoint& p, int agent, const std::vector<QPoint>& universe, const Closure& cl) {
    std::vector<int> out;
    for (std::size_t k = 0; k < universe.size(); ++k)
        if (point_epi_suitable(p, universe[k], agent, cl)) out.push_back(static_cast<int>(k));
    return out;
}

bool concordant(const std::vector<TypeSet>& a, const std::vector<TypeSet>& b, int agent, const Closure& cl) {
    const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
    if (n == 0 || m == 0) return n == m;
    // reach[i][j]: a[0..i) and b[0..j) split into the same number of blocks
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(m + 1, 0));
    reach[0][0] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            if (!reach[i][j]) continue;
            for (int i2 = i + 1; i2 <= n; ++i2)
                for (int j2 = j + 1; j2 <= m; ++j2) {
                    bool ok = true;
                    for (int x = i; x < i2 && ok; ++x)
                        for (int y = j; y < j2 && ok; ++y) ok = epi_suitable(a[x], b[y], agent, cl);
                    if (ok) reach[i2][j2] = 1;
                }
        }
    return reach[n][m];
}

}  // namespace qistk
