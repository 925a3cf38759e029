#include "qistk/calculus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "qistk/parser.hpp"
#include "qistk/syntax.hpp"

namespace qistk {

// ---- systems ------------------------------------------------------------------

std::string SystemSpec::name() const {
    std::string s = common ? "QKTC" : "QKT";
    if (!kt.empty()) {
        s += "^{";
        bool first = true;
        for (int k : kt) {
            s += (first ? "" : ",") + std::to_string(k);
            first = false;
        }
        s += "}";
    }
    return s + "_" + std::to_string(agents);
}

bool SystemSpec::allows(const std::string& schema) const {
    if (schema == "C1" || schema == "C2") return common;
    if (schema.size() == 3 && schema.rfind("KT", 0) == 0) return kt.count(schema[2] - '0') != 0;
    return find_schema(schema) != nullptr;
}

SystemSpec parse_system(const std::string& text, int agents) {
    static const std::regex re(R"(\s*(QKTC|QKT)(?:\^\{?([1-5](?:\s*,\s*[1-5])*)\}?)?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw CalculusError("unknown system " + text);
    SystemSpec s;
    s.common = m[1] == "QKTC";
    s.agents = agents;
    std::string ext = m[2];
    for (char c : ext)
        if (c >= '1' && c <= '5') s.kt.insert(c - '0');
    return s;
}

// ---- schema templates ---------------------------------------------------------

namespace {

const int AgentI = -1, AgentJ = -2;

Formula meta(const std::string& n) { return atom("$" + n); }

Formula PHI() { return meta("phi"); }
Formula PSI() { return meta("psi"); }
Formula CHI() { return meta("chi"); }

// Template of an axiom schema, or null for schemas handled specially.
Formula axiom_template(const std::string& name, int agents) {
    const int i = AgentI;
    if (name == "K-X") return implies(next(implies(PHI(), PSI())), implies(next(PHI()), next(PSI())));
    if (name == "T1") return iff(next(neg(PHI())), neg(next(PHI())));
    if (name == "T2") return iff(until(PHI(), PSI()), disj(PSI(), conj(PHI(), next(until(PHI(), PSI())))));
    if (name == "K-K") return implies(know(i, implies(PHI(), PSI())), implies(know(i, PHI()), know(i, PSI())));
    if (name == "T") return implies(know(i, PHI()), PHI());
    if (name == "4") return implies(know(i, PHI()), know(i, know(i, PHI())));
    if (name == "5") return implies(neg(know(i, PHI())), know(i, neg(know(i, PHI()))));
    if (name == "C1") return iff(common(PHI()), conj(PHI(), everybody(agents, common(PHI()))));
    if (name == "KT1")
        return implies(conj(know(i, PHI()), next(conj(know(i, PSI()), neg(know(i, CHI()))))),
                       know_dual(i, until(know(i, PHI()), until(know(i, PSI()), neg(CHI())))));
    if (name == "KT2") return implies(know(i, next(PHI())), next(know(i, PHI())));
    if (name == "KT3") return implies(until(know(i, PHI()), know(i, PSI())), know(i, until(know(i, PHI()), know(i, PSI()))));
    if (name == "KT4") return implies(next(know(i, PHI())), know(i, next(PHI())));
    if (name == "KT5") return iff(know(i, PHI()), know(AgentJ, PHI()));
    return nullptr;
}

bool match(const Formula& t, const Formula& f, Bindings& b) {
    if (t->op == Op::Atom && !t->name.empty() && t->name[0] == '$') {
        std::string key = t->name.substr(1);
        auto it = b.formulas.find(key);
        if (it != b.formulas.end()) return equal(it->second, f);
        b.formulas[key] = f;
        return true;
    }
    if (t->op != f->op) return false;
    switch (t->op) {
        case Op::Atom: return equal(t, f);
        case Op::Know:
            if (t->agent < 0) {
                std::string key = t->agent == AgentI ? "i" : "j";
                auto it = b.agents.find(key);
                if (it != b.agents.end() && it->second != f->agent) return false;
                b.agents[key] = f->agent;
            } else if (t->agent != f->agent) {
                return false;
            }
            break;
        case Op::Forall:
        case Op::Exists:
            if (t->name != f->name) return false;
            break;
        default: break;
    }
    if (t->a && !match(t->a, f->a, b)) return false;
    if (t->b && !match(t->b, f->b, b)) return false;
    return true;
}

Formula fill(const Formula& t, const Bindings& b) {
    switch (t->op) {
        case Op::Atom:
            if (!t->name.empty() && t->name[0] == '$') {
                auto it = b.formulas.find(t->name.substr(1));
                if (it == b.formulas.end()) throw CalculusError("missing binding for " + t->name.substr(1));
                return it->second;
            }
            return t;
        case Op::Not: return neg(fill(t->a, b));
        case Op::Implies: return implies(fill(t->a, b), fill(t->b, b));
        case Op::And: return conj(fill(t->a, b), fill(t->b, b));
        case Op::Or: return disj(fill(t->a, b), fill(t->b, b));
        case Op::Iff: return iff(fill(t->a, b), fill(t->b, b));
        case Op::Forall: return forall(t->name, fill(t->a, b));
        case Op::Exists: return exists(t->name, fill(t->a, b));
        case Op::Next: return next(fill(t->a, b));
        case Op::Until: return until(fill(t->a, b), fill(t->b, b));
        case Op::Know: {
            int ag = t->agent;
            if (ag < 0) {
                std::string key = ag == AgentI ? "i" : "j";
                auto it = b.agents.find(key);
                if (it == b.agents.end()) throw CalculusError("missing binding for agent " + key);
                ag = it->second;
            }
            return know(ag, fill(t->a, b));
        }
        case Op::Common: return common(fill(t->a, b));
    }
    return t;
}

const std::vector<std::string>& axiom_order() {
    static const std::vector<std::string> order{"Ex", "K-X", "T1", "T2", "K-K", "T", "4", "5", "C1",
                                                "KT1", "KT2", "KT3", "KT4", "KT5", "Taut"};
    return order;
}

void check_monodic(const Formula& f) {
    if (!is_monodic(f)) throw CalculusError("non-monodic instance " + to_string(f));
}

void collect_terms(const Formula& f, std::set<Term>& out) {
    if (f->op == Op::Atom) {
        out.insert(f->terms.begin(), f->terms.end());
        return;
    }
    if (f->op == Op::Forall || f->op == Op::Exists) out.insert(Term::var(f->name));
    if (f->a) collect_terms(f->a, out);
    if (f->b) collect_terms(f->b, out);
}

// Term t with substitute(body, x, t) == target, if any.
std::optional<Term> find_instance_term(const Formula& body, const std::string& x, const Formula& target) {
    std::set<Term> cands{Term::var(x)};
    collect_terms(target, cands);
    for (const auto& t : cands)
        if (equal(substitute(body, x, t), target)) return t;
    return std::nullopt;
}

bool gen_term_ok(const Term& t, const std::string& x, const Formula& phi, const Formula& psi) {
    if (t.constant) return false;
    if (free_variables(phi).count(t.name)) return false;
    if (t.name != x && free_variables(forall(x, psi)).count(t.name)) return false;
    return true;
}

// Propositional skeleton evaluation for Taut.
void letters(const Formula& f, std::vector<Formula>& out) {
    switch (f->op) {
        case Op::Not:
        case Op::Implies:
        case Op::And:
        case Op::Or:
        case Op::Iff:
            letters(f->a, out);
            if (f->b) letters(f->b, out);
            return;
        default:
            for (const auto& g : out)
                if (equal(g, f)) return;
            out.push_back(f);
    }
}

bool prop_eval(const Formula& f, const std::vector<Formula>& ls, unsigned long long v) {
    switch (f->op) {
        case Op::Not: return !prop_eval(f->a, ls, v);
        case Op::Implies: return !prop_eval(f->a, ls, v) || prop_eval(f->b, ls, v);
        case Op::And: return prop_eval(f->a, ls, v) && prop_eval(f->b, ls, v);
        case Op::Or: return prop_eval(f->a, ls, v) || prop_eval(f->b, ls, v);
        case Op::Iff: return prop_eval(f->a, ls, v) == prop_eval(f->b, ls, v);
        default:
            for (std::size_t k = 0; k < ls.size(); ++k)
                if (equal(ls[k], f)) return (v >> k) & 1ULL;
            return false;
    }
}

}  // namespace

TautResult is_tautology(const Formula& f, int max_letters) {
    std::vector<Formula> ls;
    letters(f, ls);
    if (static_cast<int>(ls.size()) > max_letters) return TautResult::TooLarge;
    for (unsigned long long v = 0; v < (1ULL << ls.size()); ++v)
        if (!prop_eval(f, ls, v)) return TautResult::No;
    return TautResult::Yes;
}

const std::vector<SchemaInfo>& schema_catalogue() {
    static const std::vector<SchemaInfo> cat{
        {"Taut", SchemaKind::Axiom, 0, "classical propositional tautologies"},
        {"MP", SchemaKind::Rule, 2, "phi -> psi, phi => psi"},
        {"Ex", SchemaKind::Axiom, 0, "forall x . phi -> phi[x/t]"},
        {"Gen", SchemaKind::Rule, 1, "phi -> psi[x/t] => phi -> forall x . psi  (x not free in phi; t a variable)"},
        {"K-X", SchemaKind::Axiom, 0, "X (phi -> psi) -> (X phi -> X psi)"},
        {"T1", SchemaKind::Axiom, 0, "X ~phi <-> ~X phi"},
        {"T2", SchemaKind::Axiom, 0, "phi U psi <-> psi | (phi & X (phi U psi))"},
        {"Nec-X", SchemaKind::Rule, 1, "phi => X phi"},
        {"T3", SchemaKind::Rule, 1, "chi -> ~psi & X chi => chi -> ~(phi U psi)"},
        {"K-K", SchemaKind::Axiom, 0, "K i (phi -> psi) -> (K i phi -> K i psi)"},
        {"T", SchemaKind::Axiom, 0, "K i phi -> phi"},
        {"4", SchemaKind::Axiom, 0, "K i phi -> K i K i phi"},
        {"5", SchemaKind::Axiom, 0, "~K i phi -> K i ~K i phi"},
        {"Nec-K", SchemaKind::Rule, 1, "phi => K i phi"},
        {"C1", SchemaKind::Axiom, 0, "C phi <-> phi & E C phi"},
        {"C2", SchemaKind::Rule, 1, "phi -> psi & E phi => phi -> C psi"},
        {"KT1", SchemaKind::Axiom, 0, "K i phi & X (K i psi & ~K i chi) -> Kd i ((K i phi) U ((K i psi) U ~chi))"},
        {"KT2", SchemaKind::Axiom, 0, "K i X phi -> X K i phi"},
        {"KT3", SchemaKind::Axiom, 0, "(K i phi) U (K i psi) -> K i ((K i phi) U (K i psi))"},
        {"KT4", SchemaKind::Axiom, 0, "X K i phi -> K i X phi"},
        {"KT5", SchemaKind::Axiom, 0, "K i phi <-> K j phi"},
    };
    return cat;
}

const SchemaInfo* find_schema(const std::string& name) {
    for (const auto& s : schema_catalogue())
        if (s.name == name) return &s;
    return nullptr;
}

namespace {

int need_agent(const Bindings& b, const std::string& key, int agents) {
    auto it = b.agents.find(key);
    if (it == b.agents.end()) throw CalculusError("missing binding for agent " + key);
    if (it->second < 1 || it->second > agents) throw CalculusError("agent out of range");
    return it->second;
}

const Formula& need_formula(const Bindings& b, const std::string& key) {
    auto it = b.formulas.find(key);
    if (it == b.formulas.end()) throw CalculusError("missing binding for " + key);
    return it->second;
}

}  // namespace

Instance instantiate_schema(const std::string& name, const Bindings& b, int agents) {
    if (!find_schema(name)) throw CalculusError("unknown schema " + name);
    for (const auto& [k, f] : b.formulas) check_monodic(f);
    Instance inst;
    if (name == "Taut") {
        const Formula& f = need_formula(b, "phi");
        if (is_tautology(f) != TautResult::Yes) throw CalculusError("not a tautology");
        inst.conclusion = f;
    } else if (name == "Ex") {
        auto x = b.vars.find("x");
        auto t = b.terms.find("t");
        if (x == b.vars.end() || t == b.terms.end()) throw CalculusError("Ex needs x and t");
        const Formula& phi = need_formula(b, "phi");
        inst.conclusion = implies(forall(x->second, phi), substitute(phi, x->second, t->second));
    } else if (name == "Gen") {
        auto x = b.vars.find("x");
        auto t = b.terms.find("t");
        if (x == b.vars.end() || t == b.terms.end()) throw CalculusError("Gen needs x and t");
        const Formula& phi = need_formula(b, "phi");
        const Formula& psi = need_formula(b, "psi");
        if (free_variables(phi).count(x->second)) throw CalculusError("Gen: " + x->second + " is free in phi");
        if (!gen_term_ok(t->second, x->second, phi, psi)) throw CalculusError("Gen: term " + t->second.name + " not admissible");
        inst.premises.push_back(implies(phi, substitute(psi, x->second, t->second)));
        inst.conclusion = implies(phi, forall(x->second, psi));
    } else if (name == "MP") {
        const Formula& phi = need_formula(b, "phi");
        const Formula& psi = need_formula(b, "psi");
        inst.premises = {implies(phi, psi), phi};
        inst.conclusion = psi;
    } else if (name == "Nec-X") {
        inst.premises = {need_formula(b, "phi")};
        inst.conclusion = next(need_formula(b, "phi"));
    } else if (name == "Nec-K") {
        inst.premises = {need_formula(b, "phi")};
        inst.conclusion = know(need_agent(b, "i", agents), need_formula(b, "phi"));
    } else if (name == "T3") {
        const Formula& phi = need_formula(b, "phi");
        const Formula& psi = need_formula(b, "psi");
        const Formula& chi = need_formula(b, "chi");
        inst.premises = {implies(chi, conj(neg(psi), next(chi)))};
        inst.conclusion = implies(chi, neg(until(phi, psi)));
    } else if (name == "C2") {
        const Formula& phi = need_formula(b, "phi");
        const Formula& psi = need_formula(b, "psi");
        inst.premises = {implies(phi, conj(psi, everybody(agents, phi)))};
        inst.conclusion = implies(phi, common(psi));
    } else {
        Formula t = axiom_template(name, agents);
        need_agent(b, "i", agents);
        if (name == "KT5") need_agent(b, "j", agents);
        inst.conclusion = fill(t, b);
    }
    for (const auto& p : inst.premises) check_monodic(p);
    check_monodic(inst.conclusion);
    return inst;
}

namespace {

std::optional<Bindings> match_axiom(const std::string& name, const Formula& f, int agents) {
    Bindings b;
    if (name == "Taut") {
        if (is_tautology(f) != TautResult::Yes) return std::nullopt;
        b.formulas["phi"] = f;
        return b;
    }
    if (name == "Ex") {
        if (f->op != Op::Implies || f->a->op != Op::Forall) return std::nullopt;
        auto t = find_instance_term(f->a->a, f->a->name, f->b);
        if (!t) return std::nullopt;
        b.formulas["phi"] = f->a->a;
        b.vars["x"] = f->a->name;
        b.terms["t"] = *t;
        return b;
    }
    Formula t = axiom_template(name, agents);
    if (!t || !match(t, f, b)) return std::nullopt;
    for (const auto& [k, a] : b.agents)
        if (a < 1 || a > agents) return std::nullopt;
    return b;
}

}  // namespace

std::optional<Recognition> recognize_axiom(const Formula& f, const SystemSpec& sys) {
    if (!is_monodic(f)) return std::nullopt;
    if (!sys.common && uses_common(f)) return std::nullopt;
    for (const auto& name : axiom_order()) {
        if (!sys.allows(name)) continue;
        if (auto b = match_axiom(name, f, sys.agents)) return Recognition{name, *b};
    }
    return std::nullopt;
}

bool rule_applies(const std::string& rule, const std::vector<Formula>& p, const Formula& c, const SystemSpec& sys) {
    if (!sys.allows(rule)) return false;
    if (rule == "MP") {
        if (p.size() != 2) return false;
        for (int k = 0; k < 2; ++k) {
            const Formula& imp = p[k];
            const Formula& ant = p[1 - k];
            if (imp->op == Op::Implies && equal(imp->a, ant) && equal(imp->b, c)) return true;
        }
        return false;
    }
    if (p.size() != 1) return false;
    const Formula& q = p[0];
    if (rule == "Nec-X") return c->op == Op::Next && equal(c->a, q);
    if (rule == "Nec-K") return c->op == Op::Know && c->agent >= 1 && c->agent <= sys.agents && equal(c->a, q);
    if (rule == "Gen") {
        if (q->op != Op::Implies || c->op != Op::Implies || c->b->op != Op::Forall) return false;
        if (!equal(q->a, c->a)) return false;
        const std::string& x = c->b->name;
        const Formula& phi = c->a;
        const Formula& psi = c->b->a;
        if (free_variables(phi).count(x)) return false;
        std::set<Term> cands{Term::var(x)};
        collect_terms(q->b, cands);
        for (const auto& t : cands)
            if (gen_term_ok(t, x, phi, psi) && equal(substitute(psi, x, t), q->b)) return true;
        return false;
    }
    if (rule == "T3") {
        // chi -> (~psi & X chi)  =>  chi -> ~(phi U psi)
        if (q->op != Op::Implies || q->b->op != Op::And) return false;
        const Formula& chi = q->a;
        const Formula& l = q->b->a;
        const Formula& r = q->b->b;
        if (l->op != Op::Not || r->op != Op::Next || !equal(r->a, chi)) return false;
        return c->op == Op::Implies && equal(c->a, chi) && c->b->op == Op::Not && c->b->a->op == Op::Until &&
               equal(c->b->a->b, l->a);
    }
    if (rule == "C2") {
        // phi -> (psi & E phi)  =>  phi -> C psi
        if (q->op != Op::Implies || q->b->op != Op::And) return false;
        const Formula& phi = q->a;
        if (!equal(q->b->b, everybody(sys.agents, phi))) return false;
        return c->op == Op::Implies && equal(c->a, phi) && c->b->op == Op::Common && equal(c->b->a, q->b->a);
    }
    return false;
}

// ---- derivations ----------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Bindings parse_bindings(const std::string& text, Signature& sig) {
    Bindings b;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        auto pos = item.find(":=");
        if (pos == std::string::npos) throw CalculusError("binding needs ':=' in " + item);
        std::string key = trim(item.substr(0, pos));
        std::string val = trim(item.substr(pos + 2));
        if (key == "i" || key == "j") {
            b.agents[key] = std::stoi(val);
        } else if (key == "x") {
            b.vars[key] = val;
        } else if (key == "t") {
            b.terms[key] = sig.is_constant(val) ? Term::cst(val) : Term::var(val);
        } else if (key == "phi" || key == "psi" || key == "chi") {
            b.formulas[key] = parse_formula_infer(val, sig);
        } else {
            throw CalculusError("unknown metavariable " + key);
        }
    }
    return b;
}

}  // namespace

Derivation parse_derivation(const std::string& text) {
    Derivation d;
    std::stringstream in(text);
    std::string raw;
    int src = 0;
    static const std::regex line_re(R"(^\s*(\d+)\.\s*(.*?)\s*;\s*(axiom|rule)\s+(\S+)\s*(.*)$)");
    while (std::getline(in, raw)) {
        ++src;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.rfind("agents:", 0) == 0) {
            d.sig.agents = std::stoi(trim(s.substr(7)));
            continue;
        }
        if (s.rfind("system:", 0) == 0) {
            d.system = trim(s.substr(7));
            continue;
        }
        if (s.rfind("constants:", 0) == 0) {
            std::stringstream cs(s.substr(10));
            std::string c;
            while (cs >> c) d.sig.declare_constant(c);
            continue;
        }
        std::smatch m;
        if (!std::regex_match(s, m, line_re)) throw CalculusError("line " + std::to_string(src) + ": malformed step");
        DerivationLine l;
        l.number = std::stoi(m[1]);
        l.source_line = src;
        l.text = m[2];
        l.is_axiom = m[3] == "axiom";
        l.name = m[4];
        std::string rest = trim(m[5]);
        try {
            l.formula = parse_formula_infer(l.text, d.sig);
            if (l.is_axiom) {
                if (!rest.empty()) {
                    if (rest.front() != '[' || rest.back() != ']') throw CalculusError("bindings must be in [ ]");
                    l.given = parse_bindings(rest.substr(1, rest.size() - 2), d.sig);
                }
            } else {
                if (rest.rfind("from", 0) != 0) throw CalculusError("rule needs 'from'");
                std::stringstream ps(rest.substr(4));
                std::string n;
                while (std::getline(ps, n, ',')) l.from.push_back(std::stoi(trim(n)));
            }
        } catch (const std::exception& e) {
            throw CalculusError("line " + std::to_string(src) + ": " + e.what());
        }
        d.lines.push_back(std::move(l));
    }
    return d;
}

Derivation load_derivation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CalculusError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_derivation(ss.str());
}

CheckResult check_derivation(const Derivation& d, const SystemSpec& sys) {
    std::map<int, Formula> proved;
    int last = 0;
    auto fail = [](int line, std::string msg) { return CheckResult{false, line, std::move(msg)}; };
    if (d.lines.empty()) return fail(0, "empty derivation");
    for (const auto& l : d.lines) {
        if (l.number <= last) return fail(l.number, "line numbers must increase");
        last = l.number;
        const Formula& f = l.formula;
        if (!is_monodic(f)) return fail(l.number, "formula is not monodic");
        if (!sys.common && uses_common(f)) return fail(l.number, "common knowledge outside " + sys.name());
        if (max_agent(f) > sys.agents) return fail(l.number, "agent out of range");
        if (l.is_axiom) {
            const SchemaInfo* s = find_schema(l.name);
            if (!s || s->kind != SchemaKind::Axiom) return fail(l.number, "unknown axiom " + l.name);
            if (!sys.allows(l.name)) return fail(l.number, l.name + " is not an axiom of " + sys.name());
            if (l.given) {
                try {
                    Instance inst = instantiate_schema(l.name, *l.given, sys.agents);
                    if (!equal(inst.conclusion, f)) return fail(l.number, "formula differs from the instance of " + l.name);
                } catch (const CalculusError& e) {
                    return fail(l.number, e.what());
                }
            } else if (!match_axiom(l.name, f, sys.agents)) {
                return fail(l.number, "not an instance of " + l.name);
            }
        } else {
            const SchemaInfo* s = find_schema(l.name);
            if (!s || s->kind != SchemaKind::Rule) return fail(l.number, "unknown rule " + l.name);
            if (!sys.allows(l.name)) return fail(l.number, l.name + " is not a rule of " + sys.name());
            if (static_cast<int>(l.from.size()) != s->premises)
                return fail(l.number, l.name + " needs " + std::to_string(s->premises) + " premise(s)");
            std::vector<Formula> prem;
            for (int n : l.from) {
                if (n >= l.number) return fail(l.number, "premise " + std::to_string(n) + " is not earlier");
                auto it = proved.find(n);
                if (it == proved.end()) return fail(l.number, "no line " + std::to_string(n));
                prem.push_back(it->second);
            }
            if (!rule_applies(l.name, prem, f, sys)) return fail(l.number, l.name + " does not yield this formula");
        }
        proved[l.number] = f;
    }
    return {};
}

std::vector<std::pair<std::string, Formula>> axiom_instances(const SystemSpec& sys, const std::vector<Formula>& pool,
                                                            const std::vector<std::string>& schemas) {
    std::vector<std::string> names = schemas;
    if (names.empty())
        for (const auto& s : schema_catalogue())
            if (s.kind == SchemaKind::Axiom && sys.allows(s.name) && s.name != "Taut") names.push_back(s.name);
    std::vector<std::pair<std::string, Formula>> out;
    auto emit = [&](const std::string& name, const Bindings& b) {
        try {
            out.emplace_back(name, instantiate_schema(name, b, sys.agents).conclusion);
        } catch (const CalculusError&) {
        }
    };
    const std::size_t n = pool.size();
    for (const auto& name : names) {
        bool binary = name == "K-X" || name == "T2" || name == "K-K" || name == "KT3";
        bool ternary = name == "KT1";
        bool agent = name == "K-K" || name == "T" || name == "4" || name == "5" || name.rfind("KT", 0) == 0;
        std::vector<int> is{1};
        if (agent)
            for (int i = 2; i <= sys.agents; ++i) is.push_back(i);
        for (int i : is) {
            std::vector<int> js{i};
            if (name == "KT5") {
                js.clear();
                for (int j = 1; j <= sys.agents; ++j) js.push_back(j);
            }
            for (int j : js) {
                Bindings b;
                b.agents["i"] = i;
                b.agents["j"] = j;
                if (name == "Ex") {
                    for (const auto& f : pool) {
                        auto fv = free_variables(f);
                        std::string x = fv.empty() ? "x" : *fv.begin();
                        std::set<Term> ts{Term::var(x), Term::var("y")};
                        for (const auto& c : constants_of(f)) ts.insert(Term::cst(c));
                        for (const auto& t : ts) {
                            b.formulas["phi"] = f;
                            b.vars["x"] = x;
                            b.terms["t"] = t;
                            emit(name, b);
                        }
                    }
                } else if (ternary) {
                    for (std::size_t k = 0; k < n; ++k) {
                        b.formulas["phi"] = pool[k];
                        b.formulas["psi"] = pool[(k + 1) % n];
                        b.formulas["chi"] = pool[(k + 2) % n];
                        emit(name, b);
                    }
                } else if (binary) {
                    for (const auto& f : pool)
                        for (const auto& g : pool) {
                            b.formulas["phi"] = f;
                            b.formulas["psi"] = g;
                            emit(name, b);
                        }
                } else {
                    for (const auto& f : pool) {
                        b.formulas["phi"] = f;
                        emit(name, b);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace qistk
