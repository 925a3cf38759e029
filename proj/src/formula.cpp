#include "qistk/formula.hpp"

#include <functional>

namespace qistk {

void Signature::declare_predicate(const std::string& name, int arity) {
    if (constants.count(name)) throw FormulaError("name used as constant and predicate: " + name);
    auto it = predicates.find(name);
    if (it != predicates.end() && it->second != arity)
        throw FormulaError("arity mismatch for predicate " + name);
    predicates[name] = arity;
}

void Signature::declare_constant(const std::string& name) {
    if (predicates.count(name)) throw FormulaError("name used as constant and predicate: " + name);
    constants.insert(name);
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Formula make(Op o, std::string n, std::vector<Term> ts, int ag, Formula x, Formula y) {
    return std::make_shared<const Node>(o, std::move(n), std::move(ts), ag, std::move(x),
                                        std::move(y));
}

}  // namespace

Node::Node(Op o, std::string n, std::vector<Term> ts, int ag, Formula x, Formula y)
    : op(o), name(std::move(n)), terms(std::move(ts)), agent(ag), a(std::move(x)), b(std::move(y)) {
    std::size_t h = std::hash<int>{}(static_cast<int>(op));
    h = mix(h, std::hash<std::string>{}(name));
    for (const auto& t : terms) {
        h = mix(h, std::hash<std::string>{}(t.name));
        h = mix(h, t.constant ? 1 : 2);
    }
    h = mix(h, static_cast<std::size_t>(agent));
    if (a) { h = mix(h, a->hash); size += a->size; }
    if (b) { h = mix(h, b->hash); size += b->size; }
    hash = h;
}

int compare(const Formula& x, const Formula& y) {
    if (x.get() == y.get()) return 0;
    if (x->op != y->op) return static_cast<int>(x->op) < static_cast<int>(y->op) ? -1 : 1;
    if (x->agent != y->agent) return x->agent < y->agent ? -1 : 1;
    if (int c = x->name.compare(y->name)) return c < 0 ? -1 : 1;
    if (x->terms.size() != y->terms.size()) return x->terms.size() < y->terms.size() ? -1 : 1;
    for (std::size_t i = 0; i < x->terms.size(); ++i) {
        if (x->terms[i] < y->terms[i]) return -1;
        if (y->terms[i] < x->terms[i]) return 1;
    }
    if (x->a) {
        if (int c = compare(x->a, y->a)) return c;
    }
    if (x->b) {
        if (int c = compare(x->b, y->b)) return c;
    }
    return 0;
}

bool equal(const Formula& x, const Formula& y) {
    if (x.get() == y.get()) return true;
    if (x->hash != y->hash) return false;
    return compare(x, y) == 0;
}

Formula atom(const std::string& pred, std::vector<Term> terms) {
    return make(Op::Atom, pred, std::move(terms), 0, nullptr, nullptr);
}
Formula neg(Formula f) { return make(Op::Not, "", {}, 0, std::move(f), nullptr); }
Formula implies(Formula x, Formula y) { return make(Op::Implies, "", {}, 0, std::move(x), std::move(y)); }
Formula conj(Formula x, Formula y) { return make(Op::And, "", {}, 0, std::move(x), std::move(y)); }
Formula disj(Formula x, Formula y) { return make(Op::Or, "", {}, 0, std::move(x), std::move(y)); }
Formula iff(Formula x, Formula y) { return make(Op::Iff, "", {}, 0, std::move(x), std::move(y)); }
Formula forall(const std::string& v, Formula f) { return make(Op::Forall, v, {}, 0, std::move(f), nullptr); }
Formula exists(const std::string& v, Formula f) { return make(Op::Exists, v, {}, 0, std::move(f), nullptr); }
Formula next(Formula f) { return make(Op::Next, "", {}, 0, std::move(f), nullptr); }
Formula until(Formula x, Formula y) { return make(Op::Until, "", {}, 0, std::move(x), std::move(y)); }
Formula know(int agent, Formula f) { return make(Op::Know, "", {}, agent, std::move(f), nullptr); }
Formula common(Formula f) { return make(Op::Common, "", {}, 0, std::move(f), nullptr); }

Formula top_of(Formula f) { return implies(f, f); }
Formula eventually(Formula f) { return until(top_of(f), f); }
Formula always(Formula f) { return neg(eventually(neg(f))); }

Formula everybody(int agents, Formula f) {
    std::vector<Formula> ks;
    for (int i = 1; i <= agents; ++i) ks.push_back(know(i, f));
    return conj_all(ks);
}

Formula know_dual(int agent, Formula f) { return neg(know(agent, neg(std::move(f)))); }

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) throw FormulaError("empty conjunction");
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
    return r;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) throw FormulaError("empty disjunction");
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
    return r;
}

Formula negate(Formula f) {
    if (f->op == Op::Not) return f->a;
    if (f->op == Op::Next) return next(negate(f->a));
    return neg(std::move(f));
}

std::string to_string(const Term& t) { return t.name; }

namespace {

bool is_binary(Op o) {
    return o == Op::Implies || o == Op::And || o == Op::Or || o == Op::Iff || o == Op::Until;
}

void print(const Formula& f, std::string& out);

void print_operand(const Formula& f, std::string& out) {
    if (f->op == Op::Atom || is_binary(f->op)) {
        print(f, out);
    } else {
        out += '(';
        print(f, out);
        out += ')';
    }
}

void print(const Formula& f, std::string& out) {
    switch (f->op) {
        case Op::Atom:
            out += f->name;
            if (!f->terms.empty()) {
                out += '(';
                for (std::size_t i = 0; i < f->terms.size(); ++i) {
                    if (i) out += ',';
                    out += f->terms[i].name;
                }
                out += ')';
            }
            return;
        case Op::Not: out += '~'; print_operand(f->a, out); return;
        case Op::Next: out += "X "; print_operand(f->a, out); return;
        case Op::Common: out += "C "; print_operand(f->a, out); return;
        case Op::Know:
            out += "K " + std::to_string(f->agent) + " ";
            print_operand(f->a, out);
            return;
        case Op::Forall:
        case Op::Exists:
            out += f->op == Op::Forall ? "forall " : "exists ";
            out += f->name + " . ";
            print_operand(f->a, out);
            return;
        default: break;
    }
    const char* sym = f->op == Op::Implies ? " -> "
                      : f->op == Op::And   ? " & "
                      : f->op == Op::Or    ? " | "
                      : f->op == Op::Iff   ? " <-> "
                                           : " U ";
    out += '(';
    print_operand(f->a, out);
    out += sym;
    print_operand(f->b, out);
    out += ')';
}

}  // namespace

std::string to_string(const Formula& f) {
    std::string s;
    print(f, s);
    return s;
}

}  // namespace qistk
