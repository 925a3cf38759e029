#include "qistk/search.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <tuple>

#include "qistk/fosat.hpp"

namespace qistk {

std::string SearchShape::describe() const {
    return "objects=" + std::to_string(objects) + " runs=" + std::to_string(runs) +
           " prefix=" + std::to_string(prefix) + " cycle=" + std::to_string(cycle);
}

namespace {

bool has_modal(const Formula& f) {
    switch (f->op) {
        case Op::Next: case Op::Until: case Op::Know: case Op::Common: return true;
        case Op::Atom: return false;
        default: return has_modal(f->a) || (f->b && has_modal(f->b));
    }
}

class Encoder {
public:
    Encoder(const Formula& phi, const Signature& sig, const std::set<std::string>& tags, const SearchShape& sh)
        : phi_(phi), sig_(sig), tags_(tags), cl_(phi, sig.agents, fresh_variable(phi)), ts_(cl_),
          K_(sh.objects), W_(sh.runs), P_(sh.prefix), S_(sh.prefix + sh.cycle), N_(sh.runs * S_),
          m_(sig.agents), nr_(static_cast<int>(ts_.reps().size())) {
        sync_ = tags.count("sync") || tags.count("pr") || tags.count("nl");
        auto cs = constants_of(phi);
        consts_.assign(cs.begin(), cs.end());
    }

    bool feasible() const { return K_ >= std::max<int>(1, consts_.size()); }

    void build() {
        top_ = cnf_.new_var();
        cnf_.add({top_});
        xs_.resize(static_cast<std::size_t>(K_) * N_ * nr_);
        for (auto& v : xs_) v = cnf_.new_var();
        rel_.assign(m_, std::vector<std::vector<int>>(K_, std::vector<int>(N_ * N_, 0)));
        for (int i = 0; i < m_; ++i)
            for (int o = 0; o < K_; ++o)
                for (int p = 0; p < N_; ++p)
                    for (int q = p + 1; q < N_; ++q)
                        if (allowed(p, q)) rel_[i][o][p * N_ + q] = rel_[i][o][q * N_ + p] = cnf_.new_var();

        equivalence();
        for (int o = 0; o < K_; ++o)
            for (int p = 0; p < N_; ++p) local(o, p);
        for (int o = 0; o < K_; ++o) {
            fairness(o);
            for (const auto& f : ts_.reps()) {
                if (f->op == Op::Know) knowledge(o, f);
                if (f->op == Op::Common) common(o, f);
            }
        }
        for (int p = 0; p < N_; ++p) state(p);
        classes();
        demands();

        Formula phi0 = phi_;
        auto fv = free_variables(phi0);
        if (fv.size() == 1 && *fv.begin() != cl_.var()) phi0 = substitute(phi0, *fv.begin(), Term::var(cl_.var()));
        auto l = lit(0, 0, phi0);
        if (!l) throw std::logic_error("formula outside its own closure");
        cnf_.add({*l});
    }

    std::optional<std::vector<bool>> solve(long long conflicts, bool* exhausted) {
        auto model = cnf_.solve(conflicts);
        if (exhausted) *exhausted = cnf_.exhausted();
        return model;
    }

    // Forbid the exact combination of object types at point p.
    void block(const std::vector<bool>& model, int p) {
        std::vector<int> clause;
        for (int o = 0; o < K_; ++o)
            for (int r = 0; r < nr_; ++r) {
                int v = x(o, p, r);
                clause.push_back(model[v] ? -v : v);
            }
        cnf_.add(clause);
    }

    Quasimodel decode(const std::vector<bool>& model) const {
        Quasimodel q;
        q.phi = phi_;
        q.sig = sig_;
        q.var = cl_.var();
        q.flavor = tags_.count("pr") || tags_.count("nl") ? QFlavor::Plus : QFlavor::Plain;
        q.tags = tags_;
        if (sync_) q.tags.insert("sync");  // pr and nl are searched among synchronous structures
        std::vector<std::vector<int>> tid(K_, std::vector<int>(N_));
        for (int o = 0; o < K_; ++o)
            for (int p = 0; p < N_; ++p) {
                std::vector<char> a(nr_);
                for (int r = 0; r < nr_; ++r) a[r] = model[x(o, p, r)];
                tid[o][p] = q.type_id(TypeSet{{}, ts_.to_set(a)});
            }
        std::vector<int> cand(N_);
        for (int p = 0; p < N_; ++p) {
            QCandidate c;
            for (int o = 0; o < K_; ++o) c.types.push_back(tid[o][p]);
            std::sort(c.types.begin(), c.types.end());
            c.types.erase(std::unique(c.types.begin(), c.types.end()), c.types.end());
            for (std::size_t k = 0; k < consts_.size(); ++k) c.con[consts_[k]] = tid[k][p];
            int found = -1;
            for (int j = 0; j < static_cast<int>(q.candidates.size()) && found < 0; ++j)
                if (q.candidates[j].types == c.types && q.candidates[j].con == c.con) found = j;
            if (found < 0) {
                c.name = "C" + std::to_string(q.candidates.size());
                found = static_cast<int>(q.candidates.size());
                q.candidates.push_back(c);
            }
            cand[p] = found;
        }
        for (int r = 0; r < W_; ++r) {
            QSequence s;
            s.id = "r" + std::to_string(r);
            for (int ph = 0; ph < S_; ++ph) (ph < P_ ? s.prefix : s.cycle).push_back(cand[pt(r, ph)]);
            q.sequences.push_back(s);
        }
        for (int o = 0; o < K_; ++o) {
            QObject obj;
            obj.name = "o" + std::to_string(o);
            for (int r = 0; r < W_; ++r)
                for (int ph = 0; ph < S_; ++ph) obj.at[{r, ph}] = tid[o][pt(r, ph)];
            q.objects.push_back(obj);
        }
        q.rel.assign(m_, std::vector<std::vector<int>>(K_, std::vector<int>(N_)));
        for (int i = 0; i < m_; ++i)
            for (int o = 0; o < K_; ++o)
                for (int p = 0; p < N_; ++p) {
                    int c = p;
                    for (int s = 0; s < p; ++s)
                        if (model_true(model, rel(i, o, p, s))) { c = q.rel[i][o][s]; break; }
                    q.rel[i][o][p] = c;
                }
        q.designated = std::make_pair(0, 0);
        return q;
    }

    int point_of_state(int r, int ph) const { return pt(r, ph); }

private:
    int pt(int r, int ph) const { return r * S_ + ph; }
    int phase(int p) const { return p % S_; }
    int run(int p) const { return p / S_; }
    int succ(int p) const { return pt(run(p), phase(p) + 1 < S_ ? phase(p) + 1 : P_); }
    bool allowed(int p, int q) const { return !sync_ || phase(p) == phase(q); }
    int x(int o, int p, int r) const { return xs_[(static_cast<std::size_t>(o) * N_ + p) * nr_ + r]; }
    bool model_true(const std::vector<bool>& m, int l) const { return l > 0 ? m[l] : !m[-l]; }

    std::optional<int> lit(int o, int p, const Formula& f) const {
        auto l = ts_.literal(f);
        if (!l) return std::nullopt;
        int v = x(o, p, l->first);
        return l->second ? -v : v;
    }
    int rel(int i, int o, int p, int q) const {
        if (p == q) return top_;
        int v = rel_[i][o][p * N_ + q];
        return v ? v : -top_;
    }
    int fresh() { return cnf_.new_var(); }
    void add(std::vector<int> c) { cnf_.add(std::move(c)); }

    void equivalence() {
        for (int i = 0; i < m_; ++i)
            for (int o = 0; o < K_; ++o)
                for (int a = 0; a < N_; ++a)
                    for (int b = 0; b < N_; ++b)
                        for (int c = 0; c < N_; ++c) {
                            if (a == b || b == c || a == c || !allowed(a, b) || !allowed(b, c)) continue;
                            add({-rel(i, o, a, b), -rel(i, o, b, c), rel(i, o, a, c)});
                        }
    }

    void local(int o, int p) {
        for (int r = 0; r < nr_; ++r) {
            const Formula& f = ts_.reps()[r];
            int F = x(o, p, r);
            switch (f->op) {
                case Op::And: case Op::Or: case Op::Implies: case Op::Iff: {
                    auto A = lit(o, p, f->a), B = lit(o, p, f->b);
                    if (!A || !B) break;
                    int a = *A, b = *B;
                    if (f->op == Op::Implies) a = -a;
                    if (f->op == Op::And) add({-F, a}), add({-F, b}), add({F, -a, -b});
                    else if (f->op == Op::Iff) add({-F, -a, b}), add({-F, a, -b}), add({F, a, b}), add({F, -a, -b});
                    else add({F, -a}), add({F, -b}), add({-F, a, b});
                    break;
                }
                case Op::Next: {
                    auto A = lit(o, succ(p), f->a);
                    if (A) add({-F, *A}), add({F, -*A});
                    break;
                }
                case Op::Until: {
                    auto A = lit(o, p, f->a), B = lit(o, p, f->b);
                    if (!A || !B) break;
                    int Un = x(o, succ(p), r);
                    add({-F, *B, *A});
                    add({-F, *B, Un});
                    add({F, -*B});
                    add({F, -*A, -Un});
                    break;
                }
                case Op::Forall: case Op::Exists: {
                    if (!free_variables(f).empty() || o != 0) break;
                    auto fv = free_variables(f->a);
                    fv.erase(f->name);
                    if (!fv.empty()) break;
                    Formula inst = substitute(f->a, f->name, Term::var(cl_.var()));
                    if (!ts_.literal(inst)) break;
                    std::vector<int> big{f->op == Op::Forall ? F : -F};
                    for (int k = 0; k < K_; ++k) {
                        int I = *lit(k, p, inst);
                        if (f->op == Op::Forall) add({-F, I}), big.push_back(-I);
                        else add({F, -I}), big.push_back(I);
                    }
                    add(big);
                    break;
                }
                default:
                    break;
            }
        }
    }

    // sentence agreement and constant links at one point
    void state(int p) {
        for (int r = 0; r < nr_; ++r) {
            const Formula& f = ts_.reps()[r];
            if (free_variables(f).empty()) {
                for (int o = 1; o < K_; ++o) add({-x(0, p, r), x(o, p, r)}), add({x(0, p, r), -x(o, p, r)});
                continue;
            }
            if (has_modal(f)) continue;
            for (std::size_t k = 0; k < consts_.size(); ++k) {
                auto s = lit(0, p, substitute(f, cl_.var(), Term::cst(consts_[k])));
                if (!s) continue;
                int g = x(static_cast<int>(k), p, r);
                add({-*s, g}), add({*s, -g});
            }
        }
    }

    void fairness(int o) {
        for (int r = 0; r < nr_; ++r) {
            const Formula& f = ts_.reps()[r];
            if (f->op != Op::Until) continue;
            for (int w = 0; w < W_; ++w) {
                std::vector<int> bs;
                bool ok = true;
                for (int ph = P_; ph < S_ && ok; ++ph) {
                    auto B = lit(o, pt(w, ph), f->b);
                    if (!B) ok = false;
                    else bs.push_back(*B);
                }
                if (!ok) continue;
                for (int ph = P_; ph < S_; ++ph) {
                    std::vector<int> c = bs;
                    c.push_back(-x(o, pt(w, ph), r));
                    add(c);
                }
            }
        }
    }

    void knowledge(int o, const Formula& f) {
        int i = f->agent - 1;
        for (int p = 0; p < N_; ++p) {
            auto Kp = lit(o, p, f);
            auto Ap = lit(o, p, f->a);
            if (!Kp || !Ap) return;
            add({-*Kp, *Ap});
            std::vector<int> wit{*Kp, -*Ap};
            for (int q = 0; q < N_; ++q) {
                if (q == p || !allowed(p, q)) continue;
                int R = rel(i, o, p, q), Aq = *lit(o, q, f->a);
                add({-*Kp, -R, Aq});
                int w = fresh();
                add({-w, R}), add({-w, -Aq});
                wit.push_back(w);
            }
            add(wit);
        }
    }

    void common(int o, const Formula& f) {
        if (!lit(o, 0, f) || !lit(o, 0, f->a)) return;
        auto C = [&](int p) { return *lit(o, p, f); };
        auto A = [&](int p) { return *lit(o, p, f->a); };
        for (int p = 0; p < N_; ++p) {
            add({-C(p), A(p)});
            for (int i = 0; i < m_; ++i)
                for (int q = 0; q < N_; ++q)
                    if (q != p && allowed(p, q)) add({-C(p), -rel(i, o, p, q), C(q)});
        }
        // D[s][p]: a point refuting the body is reachable from p in at most s steps
        std::vector<std::vector<int>> D(N_, std::vector<int>(N_));
        for (int s = 0; s < N_; ++s)
            for (int p = 0; p < N_; ++p) {
                D[s][p] = fresh();
                std::vector<int> c{-D[s][p], -A(p)};
                if (s > 0)
                    for (int i = 0; i < m_; ++i)
                        for (int q = 0; q < N_; ++q) {
                            if (q == p || !allowed(p, q)) continue;
                            int y = fresh();
                            add({-y, rel(i, o, p, q)}), add({-y, D[s - 1][q]});
                            c.push_back(y);
                        }
                add(c);
            }
        for (int p = 0; p < N_; ++p) add({C(p), D[N_ - 1][p]});
    }

    void classes() {
        bool pr = tags_.count("pr"), nl = tags_.count("nl"), uis = tags_.count("uis");
        for (int i = 0; i < m_; ++i)
            for (int o = 0; o < K_; ++o)
                for (int r = 0; r < W_; ++r)
                    for (int r2 = r + 1; r2 < W_; ++r2)
                        for (int ph = 0; ph < S_; ++ph) {
                            int R = rel(i, o, pt(r, ph), pt(r2, ph));
                            if (pr) {
                                std::set<int> preds;
                                if (ph > 0) preds.insert(ph - 1);
                                if (ph == P_) preds.insert(S_ - 1);
                                for (int pp : preds) add({-R, rel(i, o, pt(r, pp), pt(r2, pp))});
                            }
                            if (nl) {
                                int nx = ph + 1 < S_ ? ph + 1 : P_;
                                add({-R, rel(i, o, pt(r, nx), pt(r2, nx))});
                            }
                        }
        if (uis)
            for (int r = 1; r < W_; ++r) {
                for (int o = 0; o < K_; ++o) {
                    for (int k = 0; k < nr_; ++k) add({-x(o, pt(0, 0), k), x(o, pt(r, 0), k)}), add({x(o, pt(0, 0), k), -x(o, pt(r, 0), k)});
                    for (int i = 0; i < m_; ++i) add({rel(i, o, pt(0, 0), pt(r, 0))});
                }
            }
    }

    int eq(int a, int b) {
        if (a == b) return top_;
        auto key = std::minmax(a, b);
        auto it = eq_.find(key);
        if (it != eq_.end()) return it->second;
        int e = fresh();
        int oa = a / N_, pa = a % N_, ob = b / N_, pb = b % N_;
        for (int r = 0; r < nr_; ++r) add({-e, -x(oa, pa, r), x(ob, pb, r)}), add({-e, x(oa, pa, r), -x(ob, pb, r)});
        return eq_[key] = e;
    }
    int differ(int r, int a, int b) {
        auto key = std::make_tuple(r, std::min(a, b), std::max(a, b));
        auto it = dif_.find(key);
        if (it != dif_.end()) return it->second;
        int d = fresh();
        int xa = x(a / N_, a % N_, r), xb = x(b / N_, b % N_, r);
        add({-d, xa, xb}), add({-d, -xa, -xb});
        return dif_[key] = d;
    }

    // Every type present somewhere that agent i cannot tell apart from the
    // type of o at p is the type of o at some i-related point.
    void demands() {
        std::vector<std::vector<int>> kreps(m_);
        for (int r = 0; r < nr_; ++r)
            if (ts_.reps()[r]->op == Op::Know) kreps[ts_.reps()[r]->agent - 1].push_back(r);
        const int M = K_ * N_;
        for (int i = 0; i < m_; ++i)
            for (int a = 0; a < M; ++a)
                for (int b = 0; b < M; ++b) {
                    if (a == b) continue;
                    int o = a / N_, p = a % N_;
                    std::vector<int> c;
                    for (int r : kreps[i]) c.push_back(differ(r, a, b));
                    c.push_back(eq(a, b));
                    for (int q = 0; q < N_; ++q) {
                        if (q == p || !allowed(p, q)) continue;
                        int z = fresh();
                        add({-z, rel(i, o, p, q)}), add({-z, eq(o * N_ + q, b)});
                        c.push_back(z);
                    }
                    add(c);
                }
    }

    Formula phi_;
    Signature sig_;
    std::set<std::string> tags_;
    Closure cl_;
    TypeSpace ts_;
    int K_, W_, P_, S_, N_, m_, nr_;
    bool sync_ = false;
    std::vector<std::string> consts_;
    Cnf cnf_;
    int top_ = 0;
    std::vector<int> xs_;
    std::vector<std::vector<std::vector<int>>> rel_;
    std::map<std::pair<int, int>, int> eq_;
    std::map<std::tuple<int, int, int>, int> dif_;
};

}  // namespace

std::optional<Quasimodel> search_shape(const Formula& phi, const Signature& sig, const std::set<std::string>& tags,
                                       const SearchShape& shape, long long conflicts, bool* exhausted) {
    if (exhausted) *exhausted = false;
    Encoder enc(phi, sig, tags, shape);
    if (!enc.feasible()) return std::nullopt;
    enc.build();
    for (int attempt = 0; attempt < 4; ++attempt) {
        auto model = enc.solve(conflicts, exhausted);
        if (!model) return std::nullopt;
        Quasimodel q = enc.decode(*model);
        try {
            extract_mf_model(q);
            return q;
        } catch (const QuasimodelError&) {
            // some point has no first-order realisation: forbid it and retry
            for (int p = 0; p < q.point_count(); ++p) enc.block(*model, p);
        }
    }
    return std::nullopt;
}

SearchResult bounded_sat_search(const Formula& phi, const Signature& sig, const std::set<std::string>& tags,
                                const OracleBudget& budget) {
    budget.validate();
    SearchResult res;
    if (!is_monodic(phi)) {
        res.note = "formula is not monodic";
        return res;
    }
    for (const auto& t : tags)
        if (t != "pr" && t != "nl" && t != "sync" && t != "uis") throw std::invalid_argument("unknown tag " + t);
    Signature s = sig;
    s.agents = std::max({1, sig.agents, max_agent(phi)});
    const int ncon = static_cast<int>(constants_of(phi).size());

    std::vector<SearchShape> shapes;
    for (int k = std::max(1, ncon); k <= std::max(budget.domain_max, ncon); ++k)
        for (int w = 1; w <= budget.states_max; ++w)
            for (int p = 0; p <= budget.prefix_max; ++p)
                for (int c = 1; c <= budget.cycle_max; ++c) shapes.push_back({k, w, p, c});
    std::stable_sort(shapes.begin(), shapes.end(), [](const SearchShape& a, const SearchShape& b) {
        auto cost = [](const SearchShape& x) { return x.objects * x.runs * (x.prefix + x.cycle); };
        return std::make_tuple(cost(a), a.runs, a.objects) < std::make_tuple(cost(b), b.runs, b.objects);
    });

    auto start = std::chrono::steady_clock::now();
    for (const auto& sh : shapes) {
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > budget.seconds) {
            res.budget_exhausted = true;
            res.note = "time budget exhausted";
            return res;
        }
        ++res.shapes_tried;
        bool exhausted = false;
        auto q = search_shape(phi, s, tags, sh, budget.conflicts, &exhausted);
        if (exhausted) res.budget_exhausted = true;
        if (!q) continue;
        QValidation v = validate_quasimodel(*q);
        if (!v.ok) {
            res.note = "candidate rejected by the validator: " + v.violations.front().clause + " " +
                       v.violations.front().detail;
            continue;
        }
        res.sat = true;
        res.shape = sh;
        res.quasimodel = std::move(q);
        return res;
    }
    if (res.note.empty()) res.note = "no quasimodel within the bounds";
    return res;
}

}  // namespace qistk
