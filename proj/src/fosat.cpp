#include "qistk/fosat.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

#include "qistk/types.hpp"

namespace qistk {

int Cnf::new_var() { return ++nvars_; }

void Cnf::add(std::vector<int> clause) {
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (std::size_t k = 0; k + 1 < clause.size(); ++k)
        if (std::binary_search(clause.begin(), clause.end(), -clause[k])) return;  // tautology
    if (clause.empty()) trivially_unsat_ = true;
    clauses_.push_back(std::move(clause));
}

std::optional<std::vector<bool>> Cnf::solve(long long max_conflicts) {
    exhausted_ = false;
    if (trivially_unsat_) return std::nullopt;
    const int n = nvars_;
    // literal code: 2*v for v, 2*v+1 for -v
    auto code = [](int lit) { return lit > 0 ? 2 * lit : 2 * -lit + 1; };
    std::vector<std::vector<int>> db;  // clauses as codes
    db.reserve(clauses_.size());
    for (const auto& c : clauses_) {
        std::vector<int> k;
        for (int l : c) k.push_back(code(l));
        db.push_back(std::move(k));
    }
    std::vector<std::vector<int>> watches(2 * n + 2);
    std::vector<signed char> val(2 * n + 2, 0);  // per literal code: 1 true, -1 false
    std::vector<int> level(n + 1, -1), reason(n + 1, -1), trail;
    std::vector<int> trail_lim;
    std::vector<double> act(n + 1, 0.0);
    std::vector<char> saved(n + 1, 1);  // saved phase: 1 = negative
    double inc = 1.0;
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry> heap;
    for (int v = 1; v <= n; ++v) heap.push({0.0, v});

    auto assign = [&](int c, int why) {
        val[c] = 1;
        val[c ^ 1] = -1;
        level[c >> 1] = static_cast<int>(trail_lim.size());
        reason[c >> 1] = why;
        trail.push_back(c);
    };
    auto attach = [&](int ci) {
        watches[db[ci][0]].push_back(ci);
        watches[db[ci][1]].push_back(ci);
    };
    std::size_t qhead = 0;
    for (int ci = 0; ci < static_cast<int>(db.size()); ++ci) {
        if (db[ci].size() == 1) {
            int c = db[ci][0];
            if (val[c] == -1) return std::nullopt;
            if (val[c] == 0) assign(c, -1);
        } else {
            attach(ci);
        }
    }
    auto propagate = [&]() -> int {
        while (qhead < trail.size()) {
            int falsified = trail[qhead++] ^ 1;
            auto& ws = watches[falsified];
            std::size_t keep = 0;
            for (std::size_t k = 0; k < ws.size(); ++k) {
                int ci = ws[k];
                auto& cl = db[ci];
                if (cl[0] == falsified) std::swap(cl[0], cl[1]);
                if (val[cl[0]] == 1) { ws[keep++] = ci; continue; }
                bool moved = false;
                for (std::size_t j = 2; j < cl.size(); ++j)
                    if (val[cl[j]] != -1) {
                        std::swap(cl[1], cl[j]);
                        watches[cl[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved) continue;
                ws[keep++] = ci;
                if (val[cl[0]] == -1) {
                    for (++k; k < ws.size(); ++k) ws[keep++] = ws[k];
                    ws.resize(keep);
                    return ci;
                }
                assign(cl[0], ci);
            }
            ws.resize(keep);
        }
        return -1;
    };
    auto backtrack = [&](int lvl) {
        while (static_cast<int>(trail_lim.size()) > lvl) {
            int start = trail_lim.back();
            trail_lim.pop_back();
            while (static_cast<int>(trail.size()) > start) {
                int c = trail.back();
                trail.pop_back();
                int v = c >> 1;
                saved[v] = c & 1;
                val[c] = val[c ^ 1] = 0;
                level[v] = -1;
                reason[v] = -1;
                heap.push({act[v], v});
            }
        }
        qhead = trail.size();
    };
    auto bump = [&](int v) {
        act[v] += inc;
        if (act[v] > 1e100) {
            for (auto& a : act) a *= 1e-100;
            inc *= 1e-100;
        }
        if (level[v] < 0) heap.push({act[v], v});
    };

    if (propagate() >= 0) return std::nullopt;
    std::vector<char> seen(n + 1, 0);
    long long conflicts = 0, restart_gap = 100, restart_at = 100;
    for (;;) {
        int confl = propagate();
        if (confl >= 0) {
            if (trail_lim.empty()) return std::nullopt;
            if (++conflicts > max_conflicts) {
                exhausted_ = true;
                return std::nullopt;
            }
            // first UIP
            std::vector<int> learnt{0};
            int pending = 0, p = -1, idx = static_cast<int>(trail.size()) - 1;
            const int cur = static_cast<int>(trail_lim.size());
            do {
                for (int c : db[confl]) {
                    if (p >= 0 && c == p) continue;
                    int v = c >> 1;
                    if (seen[v] || level[v] == 0) continue;
                    seen[v] = 1;
                    bump(v);
                    if (level[v] == cur) ++pending;
                    else learnt.push_back(c);
                }
                while (!seen[trail[idx] >> 1]) --idx;
                p = trail[idx--];
                confl = reason[p >> 1];
                seen[p >> 1] = 0;
                --pending;
            } while (pending > 0);
            learnt[0] = p ^ 1;
            int back = 0;
            for (std::size_t k = 1; k < learnt.size(); ++k) {
                seen[learnt[k] >> 1] = 0;
                if (level[learnt[k] >> 1] > level[learnt[1] >> 1]) std::swap(learnt[1], learnt[k]);
            }
            if (learnt.size() > 1) back = level[learnt[1] >> 1];
            inc *= 1.05;
            backtrack(back);
            if (learnt.size() == 1) {
                assign(learnt[0], -1);
            } else {
                db.push_back(learnt);
                int ci = static_cast<int>(db.size()) - 1;
                attach(ci);
                assign(learnt[0], ci);
            }
            if (conflicts >= restart_at) {
                restart_gap = restart_gap * 3 / 2;
                restart_at = conflicts + restart_gap;
                backtrack(0);
            }
            continue;
        }
        int pick = 0;
        while (!heap.empty()) {
            int v = heap.top().second;
            heap.pop();
            if (level[v] < 0) { pick = v; break; }
        }
        if (!pick)
            for (int v = 1; v <= n && !pick; ++v)
                if (level[v] < 0) pick = v;
        if (!pick) {
            std::vector<bool> model(n + 1);
            for (int v = 1; v <= n; ++v) model[v] = val[2 * v] == 1;
            return model;
        }
        trail_lim.push_back(static_cast<int>(trail.size()));
        assign(2 * pick + saved[pick], -1);
    }
}

namespace {

class Grounder {
public:
    Grounder(const RealizeProblem& p, Cnf& cnf) : p_(p), cnf_(cnf) {
        top_ = cnf_.new_var();
        cnf_.add({top_});
    }

    int atom_var(const std::string& pred, const Tuple& t) {
        auto key = std::make_pair(pred, t);
        auto it = atoms_.find(key);
        if (it != atoms_.end()) return it->second;
        return atoms_[key] = cnf_.new_var();
    }
    const std::map<std::pair<std::string, Tuple>, int>& atoms() const { return atoms_; }

    int ground(const Formula& f, const std::map<std::string, int>& sigma) {
        switch (f->op) {
            case Op::Atom: {
                if (!p_.predicates.count(f->name)) throw RealizeError("unknown predicate " + f->name);
                Tuple t;
                for (const auto& term : f->terms) t.push_back(term_value(term, sigma));
                return atom_var(f->name, t);
            }
            case Op::Not: return -ground(f->a, sigma);
            case Op::And: return gate(true, {ground(f->a, sigma), ground(f->b, sigma)});
            case Op::Or: return gate(false, {ground(f->a, sigma), ground(f->b, sigma)});
            case Op::Implies: return gate(false, {-ground(f->a, sigma), ground(f->b, sigma)});
            case Op::Iff: {
                int a = ground(f->a, sigma), b = ground(f->b, sigma);
                return gate(false, {gate(true, {a, b}), gate(true, {-a, -b})});
            }
            case Op::Forall:
            case Op::Exists: {
                std::vector<int> parts;
                auto s = sigma;
                for (int d = 0; d < static_cast<int>(p_.elements.size()); ++d) {
                    s[f->name] = d;
                    parts.push_back(ground(f->a, s));
                }
                return gate(f->op == Op::Forall, parts);
            }
            default:
                return surrogate(f, sigma) ? top_ : -top_;
        }
    }

private:
    int term_value(const Term& t, const std::map<std::string, int>& sigma) const {
        if (t.constant) {
            auto it = p_.constants.find(t.name);
            if (it == p_.constants.end()) throw RealizeError("constant " + t.name + " has no element");
            return it->second;
        }
        auto it = sigma.find(t.name);
        if (it == sigma.end()) throw RealizeError("unbound variable " + t.name);
        return it->second;
    }

    // Modal subformula: its truth is fixed by the type of the element that
    // instantiates its (single) free variable.
    bool surrogate(const Formula& f, const std::map<std::string, int>& sigma) const {
        auto fv = free_variables(f);
        const std::string& x = p_.cl->var();
        std::optional<bool> v;
        if (fv.empty()) {
            v = holds_in(*p_.elements.at(0), f);
        } else if (fv.size() == 1) {
            const std::string& y = *fv.begin();
            int e = sigma.at(y);
            v = holds_in(*p_.elements.at(e), y == x ? f : substitute(f, y, Term::var(x)));
        } else {
            throw RealizeError("modal subformula with two free variables: " + to_string(f));
        }
        if (!v) throw RealizeError("modal subformula outside the closure: " + to_string(f));
        return *v;
    }

    int gate(bool is_and, std::vector<int> in) {
        std::vector<int> lits;
        for (int l : in) {
            if (l == (is_and ? top_ : -top_)) continue;       // neutral
            if (l == (is_and ? -top_ : top_)) return l;        // absorbing
            lits.push_back(l);
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        if (lits.empty()) return is_and ? top_ : -top_;
        if (lits.size() == 1) return lits[0];
        auto key = std::make_pair(is_and, lits);
        auto it = gates_.find(key);
        if (it != gates_.end()) return it->second;
        int g = cnf_.new_var();
        // g <-> AND(lits)   or   g <-> OR(lits)
        std::vector<int> big{is_and ? g : -g};
        for (int l : lits) {
            if (is_and) { cnf_.add({-g, l}); big.push_back(-l); }
            else { cnf_.add({g, -l}); big.push_back(l); }
        }
        cnf_.add(big);
        return gates_[key] = g;
    }

    const RealizeProblem& p_;
    Cnf& cnf_;
    int top_;
    std::map<std::pair<std::string, Tuple>, int> atoms_;
    std::map<std::pair<bool, std::vector<int>>, int> gates_;
};

}  // namespace

std::optional<Realization> realize(const RealizeProblem& p, bool* exhausted) {
    if (exhausted) *exhausted = false;
    if (p.elements.empty()) throw RealizeError("empty domain");
    Cnf cnf;
    Grounder g(p, cnf);
    const std::string& x = p.cl->var();
    for (int e = 0; e < static_cast<int>(p.elements.size()); ++e)
        for (const auto& f : *p.elements[e]) cnf.add({g.ground(f, {{x, e}})});
    // every atom gets a variable, so the interpretation is total
    const int n = static_cast<int>(p.elements.size());
    for (const auto& [pred, arity] : p.predicates) {
        Tuple t(arity, 0);
        for (;;) {
            g.atom_var(pred, t);
            int k = arity - 1;
            while (k >= 0 && ++t[k] == n) t[k--] = 0;
            if (k < 0) break;
        }
    }
    auto model = cnf.solve();
    if (!model) {
        if (exhausted) *exhausted = cnf.exhausted();
        return std::nullopt;
    }
    Realization r;
    for (const auto& [pred, arity] : p.predicates) r.interp[pred];
    for (const auto& [key, v] : g.atoms())
        if ((*model)[v]) r.interp[key.first].insert(key.second);
    return r;
}

}  // namespace qistk
