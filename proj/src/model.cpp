#include "qistk/model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qistk/sexpr.hpp"

namespace qistk {

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::Qis: return "qis";
        case Flavor::Kripke: return "kripke";
        case Flavor::Mf: return "mf";
    }
    return "?";
}

int LassoRun::phase(long long n) const {
    long long p = static_cast<long long>(prefix.size());
    if (n < p) return static_cast<int>(n);
    return static_cast<int>(p + (n - p) % static_cast<long long>(cycle.size()));
}

int LassoRun::next_phase(int p) const {
    int q = p + 1;
    return q < phases() ? q : static_cast<int>(prefix.size());
}

int LassoRun::state_at_phase(int p) const {
    int np = static_cast<int>(prefix.size());
    return p < np ? prefix[p] : cycle[p - np];
}

int Model::run_index(const std::string& id) const {
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (runs[i].id == id) return static_cast<int>(i);
    throw ModelError("unknown run " + id);
}

int Model::individual_index(const std::string& name) const {
    for (std::size_t i = 0; i < domain.size(); ++i)
        if (domain[i] == name) return static_cast<int>(i);
    throw ModelError("unknown individual " + name);
}

int Model::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    throw ModelError("unknown state " + name);
}

std::vector<Point> Model::points() const {
    std::vector<Point> out;
    for (int r = 0; r < static_cast<int>(runs.size()); ++r)
        for (int p = 0; p < runs[r].phases(); ++p) out.push_back({r, p});
    return out;
}

bool Model::state_related(int agent, int individual, int s1, int s2) const {
    if (agent < 1 || agent > agents()) throw ModelError("unknown agent " + std::to_string(agent));
    const auto& per = part[agent - 1];
    int a = 0;
    if (flavor == Flavor::Mf) {
        if (individual < 0 || individual >= individuals())
            throw ModelError("mf relation needs an individual");
        a = individual;
    }
    return per[a][s1] == per[a][s2];
}

bool Model::related(int agent, int individual, const Point& p1, const Point& p2) const {
    if (clock && p1.phase != p2.phase) return false;
    return state_related(agent, individual, state_of(p1), state_of(p2));
}

bool Model::related_at(int agent, int individual, int r1, long long n1, int r2, long long n2) const {
    if (clock && n1 != n2) return false;
    return state_related(agent, individual, runs[r1].state_at(n1), runs[r2].state_at(n2));
}

std::vector<Point> Model::related_points(int agent, int individual, const Point& p) const {
    std::vector<Point> out;
    for (const auto& q : points())
        if (related(agent, individual, p, q)) out.push_back(q);
    return out;
}

std::vector<Point> Model::reachable_from(int individual, const Point& p) const {
    auto all = points();
    std::set<Point> seen{p};
    std::vector<Point> todo{p};
    while (!todo.empty()) {
        Point cur = todo.back();
        todo.pop_back();
        for (const auto& q : all) {
            if (seen.count(q)) continue;
            for (int i = 1; i <= agents(); ++i) {
                if (related(i, individual, cur, q)) {
                    seen.insert(q);
                    todo.push_back(q);
                    break;
                }
            }
        }
    }
    return {seen.begin(), seen.end()};
}

bool Model::reachable(int individual, const Point& p1, const Point& p2) const {
    auto r = reachable_from(individual, p1);
    return std::find(r.begin(), r.end(), p2) != r.end();
}

bool Model::holds(int state, const std::string& pred, const Tuple& t) const {
    const auto& m = interp[state];
    auto it = m.find(pred);
    return it != m.end() && it->second.count(t) != 0;
}

void Model::validate() const {
    if (states.empty()) throw ModelError("no states");
    if (runs.empty()) throw ModelError("no runs");
    if (domain.empty()) throw ModelError("empty domain");
    if (sig.agents < 1) throw ModelError("agent count must be positive");
    for (const auto& r : runs) {
        if (r.cycle.empty()) throw ModelError("empty cycle in run " + r.id);
        for (int s : r.prefix)
            if (s < 0 || s >= state_count()) throw ModelError("dangling state in run " + r.id);
        for (int s : r.cycle)
            if (s < 0 || s >= state_count()) throw ModelError("dangling state in run " + r.id);
    }
    for (const auto& c : sig.constants)
        if (!constants.count(c)) throw ModelError("constant without interpretation: " + c);
    if (static_cast<int>(interp.size()) != state_count()) throw ModelError("interpretation size mismatch");
    for (int s = 0; s < state_count(); ++s) {
        for (const auto& [p, tuples] : interp[s]) {
            auto it = sig.predicates.find(p);
            if (it == sig.predicates.end()) throw ModelError("undeclared predicate " + p);
            for (const auto& t : tuples) {
                if (static_cast<int>(t.size()) != it->second)
                    throw ModelError("arity violation for " + p + " at " + states[s]);
                for (int x : t)
                    if (x < 0 || x >= individuals()) throw ModelError("unknown individual in " + p);
            }
        }
    }
    if (static_cast<int>(part.size()) != agents()) throw ModelError("missing epistemic relations");
    int per = flavor == Flavor::Mf ? individuals() : 1;
    for (const auto& pa : part) {
        if (static_cast<int>(pa.size()) != per) throw ModelError("epistemic relation shape");
        for (const auto& cls : pa)
            if (static_cast<int>(cls.size()) != state_count()) throw ModelError("partition does not cover states");
    }
    if (clock) {
        for (const auto& r : runs)
            if (r.prefix.size() != runs[0].prefix.size() || r.cycle.size() != runs[0].cycle.size())
                throw ModelError("clocked model with unnormalised runs");
    }
}

void Model::normalise_clock() {
    std::size_t p = 0, l = 1;
    for (const auto& r : runs) {
        p = std::max(p, r.prefix.size());
        l = std::lcm(l, r.cycle.size());
    }
    for (auto& r : runs) {
        LassoRun u;
        u.id = r.id;
        for (std::size_t n = 0; n < p; ++n) u.prefix.push_back(r.state_at(static_cast<long long>(n)));
        for (std::size_t n = 0; n < l; ++n) u.cycle.push_back(r.state_at(static_cast<long long>(p + n)));
        r = u;
    }
}

namespace {

const SExpr& need(const SExpr& e, const std::string& key) {
    const SExpr* f = e.find(key);
    if (!f) throw ModelError("missing (" + key + ")");
    return *f;
}

int to_int(const SExpr& e) {
    if (!e.is_atom()) throw ModelError("expected number at line " + std::to_string(e.line));
    try {
        return std::stoi(e.atom);
    } catch (...) {
        throw ModelError("expected number, got " + e.atom);
    }
}

std::vector<int> partition_classes(const Model& m, const SExpr& part) {
    std::vector<int> cls(m.state_count(), -1);
    int id = 0;
    for (std::size_t k = 1; k < part.items.size(); ++k) {
        const auto& block = part.items[k];
        if (!block.is_list) throw ModelError("partition block must be a list");
        for (const auto& s : block.items) {
            int si = m.state_index(s.atom);
            if (cls[si] != -1) throw ModelError("state " + s.atom + " in two partition blocks");
            cls[si] = id;
        }
        ++id;
    }
    for (int s = 0; s < m.state_count(); ++s)
        if (cls[s] == -1) throw ModelError("partition does not cover state " + m.states[s]);
    return cls;
}

std::vector<int> identity_classes(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

Model load_model(const std::string& text) {
    SExpr root;
    try {
        root = parse_sexpr(text);
    } catch (const SExprError& e) {
        throw ModelError(std::string("format error: ") + e.what());
    }
    if (root.head() != "model") throw ModelError("expected (model ...)");
    Model m;
    const SExpr& fl = need(root, "flavor");
    if (fl.items.size() != 2) throw ModelError("bad flavor");
    const std::string& fs = fl.items[1].atom;
    if (fs == "qis") m.flavor = Flavor::Qis;
    else if (fs == "kripke") m.flavor = Flavor::Kripke;
    else if (fs == "mf") m.flavor = Flavor::Mf;
    else throw ModelError("unknown flavor " + fs);
    m.sig.agents = to_int(need(root, "agents").items.at(1));
    if (m.sig.agents < 1) throw ModelError("agent count must be positive");
    if (const SExpr* c = root.find("clock")) m.clock = c->items.size() < 2 || c->items[1].atom != "false";

    for (std::size_t k = 1; k < need(root, "domain").items.size(); ++k)
        m.domain.push_back(need(root, "domain").items[k].atom);
    if (m.domain.empty()) throw ModelError("empty domain");

    if (const SExpr* preds = root.find("preds")) {
        for (std::size_t k = 1; k < preds->items.size(); ++k) {
            const auto& p = preds->items[k];
            if (!p.is_list || p.items.size() != 2) throw ModelError("bad predicate declaration");
            m.sig.declare_predicate(p.items[0].atom, to_int(p.items[1]));
        }
    }
    if (const SExpr* cs = root.find("constants")) {
        for (std::size_t k = 1; k < cs->items.size(); ++k) {
            const auto& c = cs->items[k];
            if (!c.is_list || c.items.size() != 2) throw ModelError("bad constant declaration");
            const std::string& name = c.items[0].atom;
            if (m.constants.count(name)) throw ModelError("non-rigid constant " + name);
            m.sig.declare_constant(name);
            m.constants[name] = m.individual_index(c.items[1].atom);
        }
    }

    const SExpr& st = need(root, "states");
    std::set<std::pair<std::string, std::vector<std::string>>> seen_global;
    for (std::size_t k = 1; k < st.items.size(); ++k) {
        const auto& s = st.items[k];
        if (m.flavor == Flavor::Qis) {
            if (!s.is_list || s.items.empty()) throw ModelError("qis state needs (name (env e) (locals ...))");
            m.states.push_back(s.items[0].atom);
            const SExpr& e = need(s, "env");
            if (e.items.size() != 2) throw ModelError("environment local state is mandatory");
            m.env.push_back(e.items[1].atom);
            const SExpr& l = need(s, "locals");
            std::vector<std::string> ls;
            for (std::size_t j = 1; j < l.items.size(); ++j) ls.push_back(l.items[j].atom);
            if (static_cast<int>(ls.size()) != m.sig.agents)
                throw ModelError("state " + m.states.back() + " needs one local state per agent");
            if (!seen_global.insert({m.env.back(), ls}).second)
                throw ModelError("duplicate global state " + m.states.back());
            m.locals.push_back(ls);
        } else {
            if (!s.is_atom()) throw ModelError("state names expected");
            m.states.push_back(s.atom);
        }
    }
    {
        std::set<std::string> names(m.states.begin(), m.states.end());
        if (names.size() != m.states.size()) throw ModelError("duplicate state name");
    }

    const SExpr& rs = need(root, "runs");
    for (std::size_t k = 1; k < rs.items.size(); ++k) {
        const auto& r = rs.items[k];
        if (!r.is_list || r.items.empty()) throw ModelError("bad run");
        LassoRun run;
        run.id = r.items[0].atom;
        if (const SExpr* p = r.find("prefix"))
            for (std::size_t j = 1; j < p->items.size(); ++j) run.prefix.push_back(m.state_index(p->items[j].atom));
        const SExpr* c = r.find("cycle");
        if (!c || c->items.size() < 2) throw ModelError("empty cycle in run " + run.id);
        for (std::size_t j = 1; j < c->items.size(); ++j) run.cycle.push_back(m.state_index(c->items[j].atom));
        m.runs.push_back(run);
    }
    if (m.runs.empty()) throw ModelError("no runs");

    int n = m.state_count();
    int per = m.flavor == Flavor::Mf ? m.individuals() : 1;
    m.part.assign(m.sig.agents, std::vector<std::vector<int>>(per, identity_classes(n)));
    if (m.flavor == Flavor::Qis) {
        for (int i = 0; i < m.sig.agents; ++i) {
            std::map<std::string, int> ids;
            for (int s = 0; s < n; ++s) {
                auto it = ids.emplace(m.locals[s][i], static_cast<int>(ids.size())).first;
                m.part[i][0][s] = it->second;
            }
        }
        if (!root.find_all("epistemic").empty())
            throw ModelError("qis relations are derived from local states");
    } else {
        std::set<std::pair<int, int>> given;
        for (const SExpr* e : root.find_all("epistemic")) {
            int ag = to_int(need(*e, "agent").items.at(1));
            if (ag < 1 || ag > m.sig.agents) throw ModelError("unknown agent " + std::to_string(ag));
            int ind = 0;
            if (m.flavor == Flavor::Mf) {
                const SExpr* iv = e->find("individual");
                if (!iv) throw ModelError("mf relation needs (individual a)");
                ind = m.individual_index(iv->items.at(1).atom);
            }
            if (!given.insert({ag, ind}).second) throw ModelError("relation given twice");
            m.part[ag - 1][ind] = partition_classes(m, need(*e, "partition"));
        }
    }

    m.interp.assign(n, {});
    if (const SExpr* in = root.find("interp")) {
        for (std::size_t k = 1; k < in->items.size(); ++k) {
            const auto& p = in->items[k];
            if (!p.is_list || p.items.empty()) throw ModelError("bad interpretation entry");
            const std::string& name = p.items[0].atom;
            auto decl = m.sig.predicates.find(name);
            if (decl == m.sig.predicates.end()) throw ModelError("undeclared predicate " + name);
            for (std::size_t j = 1; j < p.items.size(); ++j) {
                const auto& at = p.items[j];
                if (at.head() != "at" || at.items.size() < 2) throw ModelError("expected (at state tuple...)");
                int s = m.state_index(at.items[1].atom);
                auto& bucket = m.interp[s][name];
                for (std::size_t q = 2; q < at.items.size(); ++q) {
                    const auto& tup = at.items[q];
                    if (!tup.is_list) throw ModelError("tuple must be a list");
                    Tuple t;
                    for (const auto& x : tup.items) t.push_back(m.individual_index(x.atom));
                    if (static_cast<int>(t.size()) != decl->second)
                        throw ModelError("arity violation for " + name + " at " + at.items[1].atom);
                    bucket.insert(t);
                }
            }
        }
    }
    if (m.clock) m.normalise_clock();
    m.validate();
    return m;
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

namespace {

void write_partition(std::ostringstream& out, const Model& m, const std::vector<int>& cls) {
    std::map<int, std::vector<int>> blocks;
    for (int s = 0; s < m.state_count(); ++s) blocks[cls[s]].push_back(s);
    std::vector<std::vector<int>> ordered;
    for (auto& [k, v] : blocks) ordered.push_back(v);
    std::sort(ordered.begin(), ordered.end());
    out << "(partition";
    for (const auto& b : ordered) {
        out << " (";
        for (std::size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << m.states[b[i]];
        out << ")";
    }
    out << ")";
}

}  // namespace

std::string save_model(const Model& m) {
    std::ostringstream out;
    out << "(model (flavor " << to_string(m.flavor) << ") (agents " << m.agents() << ")";
    if (m.clock) out << " (clock true)";
    out << "\n  (domain";
    for (const auto& d : m.domain) out << " " << d;
    out << ")\n  (constants";
    for (const auto& [c, v] : m.constants) out << " (" << c << " " << m.domain[v] << ")";
    out << ")\n  (preds";
    for (const auto& [p, a] : m.sig.predicates) out << " (" << p << " " << a << ")";
    out << ")\n  (states";
    for (int s = 0; s < m.state_count(); ++s) {
        if (m.flavor == Flavor::Qis) {
            out << "\n    (" << m.states[s] << " (env " << m.env[s] << ") (locals";
            for (const auto& l : m.locals[s]) out << " " << l;
            out << "))";
        } else {
            out << " " << m.states[s];
        }
    }
    out << ")\n  (runs";
    for (const auto& r : m.runs) {
        out << "\n    (" << r.id << " (prefix";
        for (int s : r.prefix) out << " " << m.states[s];
        out << ") (cycle";
        for (int s : r.cycle) out << " " << m.states[s];
        out << "))";
    }
    out << ")";
    if (m.flavor != Flavor::Qis) {
        for (int i = 0; i < m.agents(); ++i) {
            int per = m.flavor == Flavor::Mf ? m.individuals() : 1;
            for (int a = 0; a < per; ++a) {
                out << "\n  (epistemic (agent " << i + 1 << ")";
                if (m.flavor == Flavor::Mf) out << " (individual " << m.domain[a] << ")";
                out << " ";
                write_partition(out, m, m.part[i][a]);
                out << ")";
            }
        }
    }
    out << "\n  (interp";
    for (const auto& [p, arity] : m.sig.predicates) {
        (void)arity;
        std::ostringstream entry;
        bool any = false;
        entry << "\n    (" << p;
        for (int s = 0; s < m.state_count(); ++s) {
            auto it = m.interp[s].find(p);
            if (it == m.interp[s].end() || it->second.empty()) continue;
            any = true;
            entry << " (at " << m.states[s];
            for (const auto& t : it->second) {
                entry << " (";
                for (std::size_t i = 0; i < t.size(); ++i) entry << (i ? " " : "") << m.domain[t[i]];
                entry << ")";
            }
            entry << ")";
        }
        entry << ")";
        if (any) out << entry.str();
    }
    out << "))\n";
    return out.str();
}

// ---- class predicates -------------------------------------------------------

int window_bound(const Model& m, const WindowConfig& cfg) {
    std::size_t p = 0, l = 1;
    for (const auto& r : m.runs) {
        p = std::max(p, r.prefix.size());
        l = std::lcm(l, r.cycle.size());
        if (l > static_cast<std::size_t>(cfg.cap)) l = cfg.cap;
    }
    long long b = (static_cast<long long>(p) + 2 * static_cast<long long>(l)) * std::max(1, cfg.scale);
    return static_cast<int>(std::min<long long>(b, cfg.cap));
}

namespace {

int relation_copies(const Model& m) { return m.flavor == Flavor::Mf ? m.individuals() : 1; }

bool pr_for(const Model& m, int agent, int a, int B) {
    int R = static_cast<int>(m.runs.size());
    for (int r = 0; r < R; ++r)
        for (int n = 1; n < B; ++n)
            for (int r2 = 0; r2 < R; ++r2)
                for (int n2 = 0; n2 < B; ++n2) {
                    if (!m.related_at(agent, a, r, n, r2, n2)) continue;
                    if (m.related_at(agent, a, r, n - 1, r2, n2)) continue;
                    bool ok = false;
                    for (int k = n2 - 1; k >= 0 && !ok; --k) {
                        if (!m.related_at(agent, a, r, n - 1, r2, k)) {
                            // every k' in (k, n2] must stay related to (r, n)
                            if (!m.related_at(agent, a, r, n, r2, k)) break;
                            continue;
                        }
                        ok = true;
                    }
                    if (!ok) return false;
                }
    return true;
}

bool nl_for(const Model& m, int agent, int a, int B) {
    int R = static_cast<int>(m.runs.size());
    for (int r = 0; r < R; ++r)
        for (int n = 0; n < B; ++n)
            for (int r2 = 0; r2 < R; ++r2) {
                int horizon = static_cast<int>(m.runs[r2].prefix.size() + 2 * m.runs[r2].cycle.size());
                for (int n2 = 0; n2 < B; ++n2) {
                    if (!m.related_at(agent, a, r, n, r2, n2)) continue;
                    if (m.related_at(agent, a, r, n + 1, r2, n2)) continue;
                    bool ok = false;
                    // k > n2, with (r,n) related to every k' in [n2, k)
                    for (int k = n2 + 1; k <= n2 + horizon && !ok; ++k) {
                        if (m.related_at(agent, a, r, n + 1, r2, k)) {
                            ok = true;
                            break;
                        }
                        if (!m.related_at(agent, a, r, n, r2, k)) break;
                    }
                    if (!ok) return false;
                }
            }
    return true;
}

}  // namespace

bool check_synchronicity(const Model& m, const WindowConfig& cfg) {
    if (m.clock) return true;
    int B = window_bound(m, cfg);
    int R = static_cast<int>(m.runs.size());
    for (int i = 1; i <= m.agents(); ++i)
        for (int a = 0; a < relation_copies(m); ++a)
            for (int r = 0; r < R; ++r)
                for (int n = 0; n < B; ++n)
                    for (int r2 = 0; r2 < R; ++r2)
                        for (int n2 = 0; n2 < B; ++n2)
                            if (n != n2 && m.related_at(i, a, r, n, r2, n2)) return false;
    return true;
}

bool check_perfect_recall(const Model& m, int agent, const WindowConfig& cfg) {
    int B = window_bound(m, cfg);
    for (int a = 0; a < relation_copies(m); ++a)
        if (!pr_for(m, agent, a, B)) return false;
    return true;
}

bool check_perfect_recall(const Model& m, const WindowConfig& cfg) {
    for (int i = 1; i <= m.agents(); ++i)
        if (!check_perfect_recall(m, i, cfg)) return false;
    return true;
}

bool check_no_learning(const Model& m, int agent, const WindowConfig& cfg) {
    int B = window_bound(m, cfg);
    for (int a = 0; a < relation_copies(m); ++a)
        if (!nl_for(m, agent, a, B)) return false;
    return true;
}

bool check_no_learning(const Model& m, const WindowConfig& cfg) {
    for (int i = 1; i <= m.agents(); ++i)
        if (!check_no_learning(m, i, cfg)) return false;
    return true;
}

bool check_unique_initial_state(const Model& m) {
    int s0 = m.runs[0].state_at(0);
    for (const auto& r : m.runs)
        if (r.state_at(0) != s0) return false;
    return true;
}

bool check_shared_knowledge(const Model& m) {
    for (int a = 0; a < relation_copies(m); ++a)
        for (int i = 2; i <= m.agents(); ++i)
            for (int s = 0; s < m.state_count(); ++s)
                for (int t = 0; t < m.state_count(); ++t)
                    if (m.state_related(1, a, s, t) != m.state_related(i, a, s, t)) return false;
    return true;
}

ClassReport classify(const Model& m, const WindowConfig& cfg) {
    ClassReport c;
    c.window = window_bound(m, cfg);
    c.sync = check_synchronicity(m, cfg);
    c.pr = check_perfect_recall(m, cfg);
    c.nl = check_no_learning(m, cfg);
    c.uis = check_unique_initial_state(m);
    c.shared = check_shared_knowledge(m);
    return c;
}

// ---- transformations --------------------------------------------------------

Model g_transform(const Model& m) {
    if (m.flavor != Flavor::Kripke) throw ModelError("g_transform needs a kripke model");
    Model q;
    q.flavor = Flavor::Qis;
    q.sig = m.sig;
    q.domain = m.domain;
    q.constants = m.constants;
    q.clock = m.clock;
    // One global state per phase point: env = the point, locals = relation classes.
    std::map<Point, int> index;
    for (const auto& p : m.points()) {
        int id = static_cast<int>(q.states.size());
        index[p] = id;
        std::string name = m.runs[p.run].id + "@" + std::to_string(p.phase);
        q.states.push_back(name);
        q.env.push_back(name);
        std::vector<std::string> ls;
        int s = m.state_of(p);
        for (int i = 0; i < m.agents(); ++i) ls.push_back("c" + std::to_string(m.part[i][0][s]));
        q.locals.push_back(ls);
        q.interp.push_back(m.interp[s]);
    }
    for (int r = 0; r < static_cast<int>(m.runs.size()); ++r) {
        const auto& run = m.runs[r];
        LassoRun nr;
        nr.id = run.id;
        int np = static_cast<int>(run.prefix.size());
        for (int p = 0; p < run.phases(); ++p) (p < np ? nr.prefix : nr.cycle).push_back(index[{r, p}]);
        q.runs.push_back(nr);
    }
    q.part.assign(q.agents(), std::vector<std::vector<int>>(1, std::vector<int>(q.state_count())));
    for (int i = 0; i < q.agents(); ++i) {
        std::map<std::string, int> ids;
        for (int s = 0; s < q.state_count(); ++s)
            q.part[i][0][s] = ids.emplace(q.locals[s][i], static_cast<int>(ids.size())).first->second;
    }
    q.validate();
    return q;
}

Model kripke_to_mf(const Model& m) {
    if (m.flavor != Flavor::Kripke) throw ModelError("kripke_to_mf needs a kripke model");
    Model r = m;
    r.flavor = Flavor::Mf;
    for (auto& pa : r.part) pa.assign(m.individuals(), pa[0]);
    r.validate();
    return r;
}

}  // namespace qistk
