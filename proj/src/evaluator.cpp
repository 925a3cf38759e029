#include "qistk/evaluator.hpp"

#include <algorithm>
#include <numeric>

#include "qistk/syntax.hpp"

namespace qistk {

bool Evaluator::KeyLess::operator()(const Key& x, const Key& y) const {
    int c = compare(x.first, y.first);
    if (c != 0) return c < 0;
    return x.second < y.second;
}

Evaluator::Evaluator(const Model& m) : m_(m) {
    for (int r = 0; r < static_cast<int>(m.runs.size()); ++r) {
        offset_.push_back(static_cast<int>(pts_.size()));
        for (int p = 0; p < m.runs[r].phases(); ++p) pts_.push_back({r, p});
    }
    for (const auto& p : pts_) {
        state_.push_back(m.state_of(p));
        succ_.push_back(offset_[p.run] + m.runs[p.run].next_phase(p.phase));
    }
}

int Evaluator::point_id(const Point& p) const { return offset_.at(p.run) + p.phase; }

int Evaluator::term_value(const Term& t, const Assignment& sigma) const {
    if (t.constant) {
        auto it = m_.constants.find(t.name);
        if (it == m_.constants.end()) throw EvalError("uninterpreted constant " + t.name);
        return it->second;
    }
    auto it = sigma.find(t.name);
    if (it == sigma.end()) throw EvalError("unbound free variable " + t.name);
    return it->second;
}

const std::vector<int>& Evaluator::groups(int agent, int individual) {
    auto key = std::make_pair(agent, individual);
    auto it = groups_.find(key);
    if (it != groups_.end()) return it->second;
    if (agent < 1 || agent > m_.agents()) throw EvalError("unknown agent " + std::to_string(agent));
    const auto& cls = m_.part[agent - 1][m_.flavor == Flavor::Mf ? individual : 0];
    std::map<std::pair<int, int>, int> ids;
    std::vector<int> g(pts_.size());
    for (std::size_t k = 0; k < pts_.size(); ++k) {
        int clock = m_.clock ? pts_[k].phase : 0;
        g[k] = ids.emplace(std::make_pair(cls[state_[k]], clock), static_cast<int>(ids.size())).first->second;
    }
    return groups_[key] = std::move(g);
}

const std::vector<int>& Evaluator::components(int individual) {
    auto it = comps_.find(individual);
    if (it != comps_.end()) return it->second;
    std::vector<int> parent(pts_.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int i = 1; i <= m_.agents(); ++i) {
        const auto& g = groups(i, individual);
        std::map<int, int> first;
        for (std::size_t k = 0; k < pts_.size(); ++k) {
            auto [f, fresh] = first.emplace(g[k], static_cast<int>(k));
            if (!fresh) parent[find(static_cast<int>(k))] = find(f->second);
        }
    }
    std::vector<int> c(pts_.size());
    for (std::size_t k = 0; k < pts_.size(); ++k) c[k] = find(static_cast<int>(k));
    return comps_[individual] = std::move(c);
}

const std::vector<char>& Evaluator::extension(const Formula& f, const Assignment& sigma) {
    return compute(f, sigma);
}

const std::vector<char>& Evaluator::compute(const Formula& f, const Assignment& sigma) {
    auto fv = free_variables(f);
    Key key{f, {}};
    for (const auto& v : fv) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw EvalError("unbound free variable " + v);
        key.second.push_back(it->second);
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto ext = compute_uncached(f, sigma);
    return memo_.emplace(std::move(key), std::move(ext)).first->second;
}

namespace {

// AND of `body` over each class of `cls`, written back per point.
std::vector<char> all_in_class(const std::vector<int>& cls, const std::vector<char>& body) {
    std::map<int, char> ok;
    for (std::size_t k = 0; k < cls.size(); ++k) {
        auto [it, fresh] = ok.emplace(cls[k], body[k]);
        if (!fresh) it->second = it->second && body[k];
    }
    std::vector<char> out(cls.size());
    for (std::size_t k = 0; k < cls.size(); ++k) out[k] = ok[cls[k]];
    return out;
}

}  // namespace

std::vector<char> Evaluator::compute_uncached(const Formula& f, const Assignment& sigma) {
    const std::size_t n = pts_.size();
    std::vector<char> out(n, 0);
    switch (f->op) {
        case Op::Atom: {
            Tuple t;
            for (const auto& term : f->terms) t.push_back(term_value(term, sigma));
            for (std::size_t k = 0; k < n; ++k) out[k] = m_.holds(state_[k], f->name, t);
            return out;
        }
        case Op::Not: {
            const auto& a = compute(f->a, sigma);
            for (std::size_t k = 0; k < n; ++k) out[k] = !a[k];
            return out;
        }
        case Op::Implies:
        case Op::And:
        case Op::Or:
        case Op::Iff: {
            std::vector<char> a = compute(f->a, sigma);
            const auto& b = compute(f->b, sigma);
            for (std::size_t k = 0; k < n; ++k) {
                switch (f->op) {
                    case Op::Implies: out[k] = !a[k] || b[k]; break;
                    case Op::And: out[k] = a[k] && b[k]; break;
                    case Op::Or: out[k] = a[k] || b[k]; break;
                    default: out[k] = a[k] == b[k]; break;
                }
            }
            return out;
        }
        case Op::Forall:
        case Op::Exists: {
            bool all = f->op == Op::Forall;
            std::fill(out.begin(), out.end(), all ? 1 : 0);
            Assignment s = sigma;
            for (int d = 0; d < m_.individuals(); ++d) {
                s[f->name] = d;
                const auto& a = compute(f->a, s);
                for (std::size_t k = 0; k < n; ++k) out[k] = all ? (out[k] && a[k]) : (out[k] || a[k]);
            }
            return out;
        }
        case Op::Next: {
            const auto& a = compute(f->a, sigma);
            for (std::size_t k = 0; k < n; ++k) out[k] = a[succ_[k]];
            return out;
        }
        case Op::Until: {
            // least fixpoint of X = b | (a & X o succ) over the lasso graph
            std::vector<char> a = compute(f->a, sigma);
            const auto& b = compute(f->b, sigma);
            out = b;
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t k = 0; k < n; ++k)
                    if (!out[k] && a[k] && out[succ_[k]]) out[k] = 1, changed = true;
            }
            return out;
        }
        case Op::Know:
        case Op::Common: {
            std::vector<char> body = compute(f->a, sigma);
            std::vector<int> indivs{0};
            if (m_.flavor == Flavor::Mf) {
                auto fv = free_variables(f->a);
                if (fv.size() > 1) throw EvalError("mf semantics needs at most one free variable under " + to_string(f));
                indivs.clear();
                if (fv.empty()) {
                    for (int d = 0; d < m_.individuals(); ++d) indivs.push_back(d);
                } else {
                    indivs.push_back(sigma.at(*fv.begin()));
                }
            }
            std::fill(out.begin(), out.end(), 1);
            for (int d : indivs) {
                auto part = f->op == Op::Know ? all_in_class(groups(f->agent, d), body)
                                              : all_in_class(components(d), body);
                for (std::size_t k = 0; k < n; ++k) out[k] = out[k] && part[k];
            }
            return out;
        }
    }
    return out;
}

bool Evaluator::eval(const Point& p, const Assignment& sigma, const Formula& f) {
    return compute(f, sigma)[point_id(p)];
}

bool Evaluator::eval_at(int run, long long n, const Assignment& sigma, const Formula& f) {
    if (run < 0 || run >= static_cast<int>(m_.runs.size())) throw EvalError("unknown run");
    if (n < 0) throw EvalError("negative time step");
    return eval({run, m_.runs[run].phase(n)}, sigma, f);
}

bool evaluate(const Model& m, int run, long long n, const Assignment& sigma, const Formula& f) {
    Evaluator ev(m);
    return ev.eval_at(run, n, sigma, f);
}

std::vector<Assignment> all_assignments(const Model& m, const std::vector<std::string>& vars) {
    std::vector<std::string> vs = vars;
    std::sort(vs.begin(), vs.end());
    std::vector<Assignment> out;
    std::vector<int> digits(vs.size(), 0);
    for (;;) {
        Assignment a;
        for (std::size_t k = 0; k < vs.size(); ++k) a[vs[k]] = digits[k];
        out.push_back(a);
        int k = static_cast<int>(vs.size()) - 1;
        while (k >= 0 && ++digits[k] == m.individuals()) digits[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

bool point_truth(const Model& m, int run, long long n, const Formula& f) {
    Evaluator ev(m);
    auto fv = free_variables(f);
    for (const auto& s : all_assignments(m, {fv.begin(), fv.end()}))
        if (!ev.eval_at(run, n, s, f)) return false;
    return true;
}

std::optional<Witness> find_counterexample(const Model& m, const Formula& f) {
    Evaluator ev(m);
    auto fv = free_variables(f);
    auto sigmas = all_assignments(m, {fv.begin(), fv.end()});
    std::vector<int> order(m.runs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return m.runs[x].id < m.runs[y].id; });
    for (int r : order)
        for (int p = 0; p < m.runs[r].phases(); ++p)
            for (const auto& s : sigmas)
                if (!ev.eval({r, p}, s, f)) return Witness{r, p, s};
    return std::nullopt;
}

Verdict model_truth(const Model& m, const Formula& f) {
    Verdict v;
    v.witness = find_counterexample(m, f);
    v.truth = !v.witness.has_value();
    return v;
}

}  // namespace qistk
