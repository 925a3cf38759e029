#include "qistk/quasimodel.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "qistk/fosat.hpp"
#include "qistk/parser.hpp"
#include "qistk/sexpr.hpp"

namespace qistk {

int QSequence::next_phase(int p) const {
    int n = phases();
    return p + 1 < n ? p + 1 : static_cast<int>(prefix.size());
}

int QSequence::at(int p) const {
    int k = static_cast<int>(prefix.size());
    return p < k ? prefix[p] : cycle.at(p - k);
}

int QSequence::padding() const {
    int k = 0;
    while (k < static_cast<int>(prefix.size()) && prefix[k] < 0) ++k;
    return k;
}

int Quasimodel::point_count() const {
    int n = 0;
    for (const auto& s : sequences) n += s.phases();
    return n;
}

int Quasimodel::point_id(int seq, int phase) const {
    int n = 0;
    for (int k = 0; k < seq; ++k) n += sequences[k].phases();
    return n + phase;
}

std::pair<int, int> Quasimodel::point_of(int id) const {
    for (int k = 0; k < static_cast<int>(sequences.size()); ++k) {
        if (id < sequences[k].phases()) return {k, id};
        id -= sequences[k].phases();
    }
    throw QuasimodelError("point id out of range");
}

StateCandidate Quasimodel::state_candidate(int cand) const {
    const auto& c = candidates.at(cand);
    StateCandidate s;
    s.index = c.index;
    for (int t : c.types) s.types.push_back(types.at(t));
    for (const auto& [k, t] : c.con) {
        auto it = std::find(c.types.begin(), c.types.end(), t);
        s.con[k] = static_cast<int>(it - c.types.begin());
    }
    return s;
}

int Quasimodel::object_type(int obj, int seq, int phase) const {
    const auto& m = objects.at(obj).at;
    auto it = m.find({seq, phase});
    return it == m.end() ? -1 : it->second;
}

int Quasimodel::type_id(const TypeSet& t) {
    for (std::size_t k = 0; k < types.size(); ++k)
        if (types[k] == t) return static_cast<int>(k);
    types.push_back(t);
    type_names.push_back("t" + std::to_string(types.size() - 1));
    return static_cast<int>(types.size() - 1);
}

void Quasimodel::singleton_relations() {
    int n = point_count();
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    rel.assign(agents(), std::vector<std::vector<int>>(objects.size(), id));
}

namespace {

const SExpr& need(const SExpr& e, const std::string& key) {
    const SExpr* f = e.find(key);
    if (!f) throw QuasimodelError("missing (" + key + ")");
    return *f;
}

int to_int(const SExpr& e) {
    if (!e.is_atom()) throw QuasimodelError("expected a number at line " + std::to_string(e.line));
    try {
        return std::stoi(e.atom);
    } catch (...) {
        throw QuasimodelError("expected a number, got " + e.atom);
    }
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
    std::vector<int> classes() {
        std::vector<int> c(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) c[k] = find(static_cast<int>(k));
        return c;
    }
};

}  // namespace

Quasimodel load_quasimodel(const std::string& text) {
    SExpr root;
    try {
        root = parse_sexpr(text);
    } catch (const SExprError& e) {
        throw QuasimodelError(std::string("format error: ") + e.what());
    }
    if (root.head() != "quasimodel") throw QuasimodelError("expected (quasimodel ...)");
    Quasimodel q;
    if (const SExpr* c = root.find("constants"))
        for (std::size_t k = 1; k < c->items.size(); ++k) q.sig.declare_constant(c->items[k].atom);
    const SExpr* ag = root.find("agents");
    // without an agents entry any index is accepted and the count is inferred
    q.sig.agents = ag ? to_int(ag->items.at(1)) : 64;
    if (q.sig.agents < 1) throw QuasimodelError("agents must be positive");
    try {
        q.phi = parse_formula_infer(need(root, "phi").items.at(1).atom, q.sig);
    } catch (const ParseError& e) {
        throw QuasimodelError(std::string("phi: ") + e.what());
    }
    if (!ag) q.sig.agents = std::max(1, max_agent(q.phi));
    q.var = fresh_variable(q.phi);
    if (const SExpr* v = root.find("var")) q.var = v->items.at(1).atom;
    if (const SExpr* f = root.find("flavor")) {
        const std::string& s = f->items.at(1).atom;
        if (s == "plain") q.flavor = QFlavor::Plain;
        else if (s == "plus") q.flavor = QFlavor::Plus;
        else throw QuasimodelError("unknown flavor " + s);
    }
    if (const SExpr* t = root.find("tags"))
        for (std::size_t k = 1; k < t->items.size(); ++k) {
            const std::string& s = t->items[k].atom;
            if (s != "pr" && s != "nl" && s != "sync" && s != "uis") throw QuasimodelError("unknown tag " + s);
            q.tags.insert(s);
        }

    std::map<std::string, int> tname, cname, sname, oname;
    auto parse_member = [&](const SExpr& e) {
        try {
            return parse_formula_infer(e.atom, q.sig);
        } catch (const ParseError& err) {
            throw QuasimodelError("type member \"" + e.atom + "\": " + err.what());
        }
    };
    for (std::size_t k = 1; k < need(root, "candidates").items.size(); ++k) {
        const SExpr& c = need(root, "candidates").items[k];
        if (!c.is_list || c.items.empty()) throw QuasimodelError("bad candidate");
        QCandidate cand;
        cand.name = c.items[0].atom;
        if (cname.count(cand.name)) throw QuasimodelError("duplicate candidate " + cand.name);
        if (const SExpr* ix = c.find("index"))
            for (std::size_t j = 1; j < ix->items.size(); ++j) cand.index.push_back(to_int(ix->items[j]));
        for (std::size_t j = 1; j < need(c, "types").items.size(); ++j) {
            const SExpr& t = need(c, "types").items[j];
            std::string name = t.is_list ? t.items.at(0).atom : t.atom;
            int id;
            if (t.is_list) {
                TypeSet ts{cand.index, {}};
                for (std::size_t m = 1; m < t.items.size(); ++m) ts.members.insert(parse_member(t.items[m]));
                auto it = tname.find(name);
                if (it != tname.end()) {
                    if (!(q.types[it->second] == ts)) throw QuasimodelError("type " + name + " redefined differently");
                    id = it->second;
                } else {
                    id = static_cast<int>(q.types.size());
                    q.types.push_back(ts);
                    q.type_names.push_back(name);
                    tname[name] = id;
                }
            } else {
                auto it = tname.find(name);
                if (it == tname.end()) throw QuasimodelError("unknown type " + name);
                id = it->second;
            }
            if (std::find(cand.types.begin(), cand.types.end(), id) == cand.types.end()) cand.types.push_back(id);
        }
        if (const SExpr* con = c.find("con"))
            for (std::size_t j = 1; j < con->items.size(); ++j) {
                const SExpr& e = con->items[j];
                if (!e.is_list || e.items.size() != 2) throw QuasimodelError("bad (con ...) entry");
                auto it = tname.find(e.items[1].atom);
                if (it == tname.end()) throw QuasimodelError("unknown type " + e.items[1].atom);
                cand.con[e.items[0].atom] = it->second;
            }
        cname[cand.name] = static_cast<int>(q.candidates.size());
        q.candidates.push_back(std::move(cand));
    }

    auto cand_ref = [&](const SExpr& e) {
        if (e.atom == "X") return -1;
        auto it = cname.find(e.atom);
        if (it == cname.end()) throw QuasimodelError("unknown candidate " + e.atom);
        return it->second;
    };
    for (std::size_t k = 1; k < need(root, "sequences").items.size(); ++k) {
        const SExpr& s = need(root, "sequences").items[k];
        QSequence seq;
        seq.id = s.items.at(0).atom;
        if (sname.count(seq.id)) throw QuasimodelError("duplicate sequence " + seq.id);
        if (const SExpr* p = s.find("prefix"))
            for (std::size_t j = 1; j < p->items.size(); ++j) seq.prefix.push_back(cand_ref(p->items[j]));
        for (std::size_t j = 1; j < need(s, "cycle").items.size(); ++j)
            seq.cycle.push_back(cand_ref(need(s, "cycle").items[j]));
        sname[seq.id] = static_cast<int>(q.sequences.size());
        q.sequences.push_back(std::move(seq));
    }

    auto seq_ref = [&](const SExpr& e) {
        auto it = sname.find(e.atom);
        if (it == sname.end()) throw QuasimodelError("unknown sequence " + e.atom);
        return it->second;
    };
    auto phase_ref = [&](int s, const SExpr& e) {
        int p = to_int(e);
        if (p < 0 || p >= q.sequences[s].phases()) throw QuasimodelError("phase out of range in " + q.sequences[s].id);
        return p;
    };
    if (const SExpr* objs = root.find("objects"))
        for (std::size_t k = 1; k < objs->items.size(); ++k) {
            const SExpr& o = objs->items[k];
            QObject obj;
            obj.name = o.items.at(0).atom;
            if (oname.count(obj.name)) throw QuasimodelError("duplicate object " + obj.name);
            for (const SExpr* a : o.find_all("at")) {
                if (a->items.size() != 4) throw QuasimodelError("expected (at seq phase type)");
                int s = seq_ref(a->items[1]);
                int p = phase_ref(s, a->items[2]);
                auto it = tname.find(a->items[3].atom);
                if (it == tname.end()) throw QuasimodelError("unknown type " + a->items[3].atom);
                obj.at[{s, p}] = it->second;
            }
            oname[obj.name] = static_cast<int>(q.objects.size());
            q.objects.push_back(std::move(obj));
        }

    const int n = q.point_count();
    std::vector<std::vector<UnionFind>> uf(q.agents(), std::vector<UnionFind>(q.objects.size(), UnionFind(n)));
    for (const SExpr* e : root.find_all("epistemic")) {
        int agent = to_int(need(*e, "agent").items.at(1));
        if (agent < 1 || agent > q.agents()) throw QuasimodelError("unknown agent " + std::to_string(agent));
        auto it = oname.find(need(*e, "object").items.at(1).atom);
        if (it == oname.end()) throw QuasimodelError("unknown object in (epistemic ...)");
        if (const SExpr* pairs = e->find("pairs"))
            for (std::size_t k = 1; k < pairs->items.size(); ++k) {
                const SExpr& pr = pairs->items[k];
                if (!pr.is_list || pr.items.size() != 2) throw QuasimodelError("expected ((seq phase) (seq phase))");
                int ids[2];
                for (int j = 0; j < 2; ++j) {
                    const SExpr& pt = pr.items[j];
                    if (!pt.is_list || pt.items.size() != 2) throw QuasimodelError("expected (seq phase)");
                    int s = seq_ref(pt.items[0]);
                    ids[j] = q.point_id(s, phase_ref(s, pt.items[1]));
                }
                uf[agent - 1][it->second].unite(ids[0], ids[1]);
            }
    }
    q.rel.assign(q.agents(), {});
    for (int i = 0; i < q.agents(); ++i)
        for (auto& u : uf[i]) q.rel[i].push_back(u.classes());

    if (const SExpr* d = root.find("designated")) {
        if (d->items.size() != 3) throw QuasimodelError("expected (designated seq phase)");
        int s = seq_ref(d->items[1]);
        q.designated = std::make_pair(s, phase_ref(s, d->items[2]));
    }
    return q;
}

Quasimodel load_quasimodel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw QuasimodelError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_quasimodel(ss.str());
}

std::string save_quasimodel(const Quasimodel& q) {
    std::ostringstream out;
    out << "(quasimodel (phi " << quote(to_string(q.phi)) << ") (agents " << q.agents() << ") (var " << q.var
        << ")\n  (constants";
    for (const auto& c : q.sig.constants) out << " " << c;
    out << ")\n  (flavor " << (q.flavor == QFlavor::Plus ? "plus" : "plain") << ") (tags";
    for (const auto& t : q.tags) out << " " << t;
    out << ")\n  (candidates";
    std::set<int> written;
    for (const auto& c : q.candidates) {
        out << "\n    (" << c.name << " (index";
        for (int i : c.index) out << " " << i;
        out << ")\n      (types";
        for (int t : c.types) {
            out << "\n        (" << q.type_names[t];
            for (const auto& f : q.types[t].members) out << " " << quote(to_string(f));
            out << ")";
        }
        out << ")\n      (con";
        for (const auto& [k, t] : c.con) out << " (" << k << " " << q.type_names[t] << ")";
        out << "))";
    }
    out << ")\n  (sequences";
    auto cref = [&](int c) { return c < 0 ? std::string("X") : q.candidates[c].name; };
    for (const auto& s : q.sequences) {
        out << "\n    (" << s.id << " (prefix";
        for (int c : s.prefix) out << " " << cref(c);
        out << ") (cycle";
        for (int c : s.cycle) out << " " << cref(c);
        out << "))";
    }
    out << ")\n  (objects";
    for (const auto& o : q.objects) {
        out << "\n    (" << o.name;
        for (const auto& [pt, t] : o.at)
            out << " (at " << q.sequences[pt.first].id << " " << pt.second << " " << q.type_names[t] << ")";
        out << ")";
    }
    out << ")";
    for (int i = 0; i < q.agents() && i < static_cast<int>(q.rel.size()); ++i)
        for (std::size_t o = 0; o < q.objects.size() && o < q.rel[i].size(); ++o) {
            std::map<int, std::vector<int>> blocks;
            for (int p = 0; p < q.point_count(); ++p) blocks[q.rel[i][o][p]].push_back(p);
            std::ostringstream pairs;
            for (const auto& [k, pts] : blocks)
                for (std::size_t j = 1; j < pts.size(); ++j) {
                    auto a = q.point_of(pts[0]), b = q.point_of(pts[j]);
                    pairs << " ((" << q.sequences[a.first].id << " " << a.second << ") (" << q.sequences[b.first].id
                          << " " << b.second << "))";
                }
            if (pairs.str().empty()) continue;
            out << "\n  (epistemic (agent " << i + 1 << ") (object " << q.objects[o].name << ") (pairs" << pairs.str()
                << "))";
        }
    if (q.designated)
        out << "\n  (designated " << q.sequences[q.designated->first].id << " " << q.designated->second << ")";
    out << ")\n";
    return out.str();
}

Model relation_model(const Quasimodel& q) {
    Model m;
    m.flavor = Flavor::Mf;
    m.sig.agents = q.agents();
    for (const auto& o : q.objects) m.domain.push_back(o.name);
    if (m.domain.empty()) m.domain.push_back("none");
    for (int s = 0; s < static_cast<int>(q.sequences.size()); ++s) {
        LassoRun r;
        r.id = q.sequences[s].id;
        for (int p = 0; p < q.sequences[s].phases(); ++p) {
            int id = q.point_id(s, p);
            m.states.push_back(r.id + "@" + std::to_string(p));
            (p < static_cast<int>(q.sequences[s].prefix.size()) ? r.prefix : r.cycle).push_back(id);
        }
        m.runs.push_back(r);
    }
    m.interp.assign(m.states.size(), {});
    m.clock = q.tags.count("sync") != 0;
    m.part.assign(q.agents(), {});
    for (int i = 0; i < q.agents(); ++i) {
        if (q.objects.empty()) {
            std::vector<int> id(m.states.size());
            std::iota(id.begin(), id.end(), 0);
            m.part[i].push_back(id);
        }
        for (std::size_t o = 0; o < q.objects.size(); ++o) m.part[i].push_back(q.rel.at(i).at(o));
    }
    if (m.clock) m.normalise_clock();
    return m;
}

namespace {

class Validator {
public:
    Validator(const Quasimodel& q, std::size_t cap) : q_(q), cl_(q.phi, q.agents(), q.var), cap_(cap) {}

    QValidation run() {
        if (!frame()) return finish();
        candidates();
        quasimodel_conditions();
        for (int o = 0; o < static_cast<int>(q_.objects.size()); ++o) object_conditions(o);
        tags();
        return finish();
    }

private:
    bool full() const { return out_.violations.size() >= cap_; }
    void report(const std::string& clause, const std::string& detail) {
        out_.ok = false;
        if (!full()) out_.violations.push_back({clause, detail});
    }
    QValidation finish() { return out_; }

    std::string pt(int s, int p) const { return "(" + q_.sequences[s].id + " " + std::to_string(p) + ")"; }

    bool frame() {
        bool ok = true;
        if (q_.sequences.empty()) report("frame.i", "no sequences"), ok = false;
        if (q_.objects.empty()) report("frame.ii", "no objects"), ok = false;
        if (static_cast<int>(q_.rel.size()) != q_.agents()) report("frame.iii", "relation shape"), ok = false;
        for (const auto& r : q_.rel)
            if (r.size() != q_.objects.size()) report("frame.iii", "relation shape"), ok = false;
        if (!ok) return false;
        bool any = false;
        for (int s = 0; s < static_cast<int>(q_.sequences.size()); ++s) {
            const auto& seq = q_.sequences[s];
            if (seq.cycle.empty()) report("frame.iv", "empty cycle in " + seq.id), ok = false;
            int pad = seq.padding();
            for (int p = pad; p < seq.phases(); ++p)
                if (seq.at(p) < 0) report("frame.iv.b", "undefined point after a defined one in " + seq.id), ok = false;
            if (pad < seq.phases()) any = true;
        }
        if (!any) report("frame.iv.a", "the candidate function is nowhere defined"), ok = false;
        if (!ok) return false;
        for (int i = 0; i < q_.agents(); ++i)
            for (std::size_t o = 0; o < q_.objects.size(); ++o) {
                if (static_cast<int>(q_.rel[i][o].size()) != q_.point_count()) {
                    report("frame.iii", "relation shape");
                    return false;
                }
                std::map<int, std::pair<bool, bool>> cls;  // class -> (has defined, has undefined)
                for (int id = 0; id < q_.point_count(); ++id) {
                    auto [s, p] = q_.point_of(id);
                    auto& e = cls[q_.rel[i][o][id]];
                    (q_.defined(s, p) ? e.first : e.second) = true;
                }
                for (const auto& [c, e] : cls)
                    if (e.first && e.second)
                        report("frame.iv.c", "agent " + std::to_string(i + 1) + ", object " + q_.objects[o].name +
                                                 " relates a defined point to an undefined one");
            }
        // objects are total on the domain of the candidate function, with values in the candidate
        for (int o = 0; o < static_cast<int>(q_.objects.size()); ++o)
            for (int s = 0; s < static_cast<int>(q_.sequences.size()); ++s)
                for (int p = 0; p < q_.sequences[s].phases(); ++p) {
                    if (!q_.defined(s, p)) continue;
                    int t = q_.object_type(o, s, p);
                    const auto& ct = q_.candidates[q_.sequences[s].at(p)].types;
                    if (t < 0) report("object", q_.objects[o].name + " undefined at " + pt(s, p)), ok = false;
                    else if (std::find(ct.begin(), ct.end(), t) == ct.end())
                        report("object", q_.objects[o].name + " at " + pt(s, p) + " is not a type of the candidate"),
                            ok = false;
                }
        return ok;
    }

    void candidates() {
        std::set<int> checked;
        for (const auto& c : q_.candidates)
            for (int t : c.types) {
                if (!checked.insert(t).second) continue;
                if (q_.types[t].index != c.index) {
                    report("candidate", "type " + q_.type_names[t] + " has a different index than " + c.name);
                    continue;
                }
                try {
                    if (auto v = coherence_check(q_.types[t].members, cl_, c.index))
                        report("frame.iv", "type " + q_.type_names[t] + " is not coherent: " + v->describe());
                } catch (const FormulaError& e) {
                    report("frame.iv", "type " + q_.type_names[t] + ": " + e.what());
                }
            }
        for (int c = 0; c < static_cast<int>(q_.candidates.size()); ++c)
            if (auto v = candidate_violation(q_.state_candidate(c), cl_)) report("candidate", q_.candidates[c].name + ": " + *v);
    }

    bool epi(int a, int b, int i) {
        auto key = std::make_tuple(std::min(a, b), std::max(a, b), i);
        auto it = epi_.find(key);
        if (it != epi_.end()) return it->second;
        return epi_[key] = epi_suitable(q_.types[a], q_.types[b], i, cl_);
    }

    bool has(int t, const Formula& f) const {
        auto v = holds_in(q_.types[t].members, f);
        return v && *v;
    }

    void quasimodel_conditions() {
        // 1: phi in some type (at the designated point when given)
        Formula phi0 = q_.phi;
        auto fv = free_variables(phi0);
        if (fv.size() == 1 && *fv.begin() != q_.var) phi0 = substitute(phi0, *fv.begin(), Term::var(q_.var));
        auto contains_phi = [&](int s, int p) {
            if (!q_.defined(s, p)) return false;
            for (int t : q_.candidates[q_.sequences[s].at(p)].types)
                if (has(t, phi0)) return true;
            return false;
        };
        bool found = false;
        if (q_.designated) found = contains_phi(q_.designated->first, q_.designated->second);
        else
            for (int s = 0; s < static_cast<int>(q_.sequences.size()) && !found; ++s)
                for (int p = 0; p < q_.sequences[s].phases() && !found; ++p) found = contains_phi(s, p);
        if (!found) report("quasimodel.1", "phi belongs to no type" + std::string(q_.designated ? " at the designated point" : ""));

        // 2: consecutive candidates are suitable
        for (int s = 0; s < static_cast<int>(q_.sequences.size()); ++s)
            for (int p = 0; p < q_.sequences[s].phases(); ++p) {
                if (!q_.defined(s, p)) continue;
                int a = q_.sequences[s].at(p), b = q_.sequences[s].at(q_.sequences[s].next_phase(p));
                auto key = std::make_pair(a, b);
                auto it = next_.find(key);
                bool ok = it != next_.end() ? it->second
                                            : (next_[key] = candidate_next_suitable(q_.state_candidate(a),
                                                                                     q_.state_candidate(b), cl_));
                if (!ok) report("quasimodel.2", "candidates at " + pt(s, p) + " and its successor are not suitable");
            }

        // 3: relation / object compatibility
        for (int i = 0; i < q_.agents(); ++i)
            for (int o = 0; o < static_cast<int>(q_.objects.size()); ++o) {
                std::map<int, std::vector<int>> cls;
                for (int id = 0; id < q_.point_count(); ++id) {
                    auto [s, p] = q_.point_of(id);
                    if (q_.defined(s, p)) cls[q_.rel[i][o][id]].push_back(id);
                }
                for (const auto& [c, ids] : cls) {
                    auto [s0, p0] = q_.point_of(ids[0]);
                    int t0 = q_.object_type(o, s0, p0);
                    for (int id : ids) {
                        auto [s, p] = q_.point_of(id);
                        if (!epi(t0, q_.object_type(o, s, p), i + 1))
                            report("quasimodel.3", "agent " + std::to_string(i + 1) + ", object " + q_.objects[o].name +
                                                       ": " + pt(s0, p0) + " and " + pt(s, p) + " are related but their types are not");
                    }
                }
            }

        // 4: every type of a candidate is the value of some object
        for (int s = 0; s < static_cast<int>(q_.sequences.size()); ++s)
            for (int p = 0; p < q_.sequences[s].phases(); ++p) {
                if (!q_.defined(s, p)) continue;
                for (int t : q_.candidates[q_.sequences[s].at(p)].types) {
                    bool ok = false;
                    for (int o = 0; o < static_cast<int>(q_.objects.size()) && !ok; ++o) ok = q_.object_type(o, s, p) == t;
                    if (!ok) report("quasimodel.4", "type " + q_.type_names[t] + " at " + pt(s, p) + " is no object's value");
                }
            }

        // 5: the constant functions are objects
        for (const auto& c : constants_of(q_.phi)) {
            bool ok = false;
            for (int o = 0; o < static_cast<int>(q_.objects.size()) && !ok; ++o) {
                ok = true;
                for (int s = 0; s < static_cast<int>(q_.sequences.size()) && ok; ++s)
                    for (int p = 0; p < q_.sequences[s].phases() && ok; ++p) {
                        if (!q_.defined(s, p)) continue;
                        const auto& con = q_.candidates[q_.sequences[s].at(p)].con;
                        auto it = con.find(c);
                        ok = it != con.end() && q_.object_type(o, s, p) == it->second;
                    }
            }
            if (!ok) report("quasimodel.5", "the function of constant " + c + " is not an object");
        }
    }

    void object_conditions(int o) {
        const std::string& on = q_.objects[o].name;
        // 1: successor types are suitable
        for (int s = 0; s < static_cast<int>(q_.sequences.size()); ++s)
            for (int p = 0; p < q_.sequences[s].phases(); ++p) {
                if (!q_.defined(s, p)) continue;
                int a = q_.object_type(o, s, p), b = q_.object_type(o, s, q_.sequences[s].next_phase(p));
                if (!next_suitable(q_.types[a], q_.types[b], cl_))
                    report("object.1", on + ": types at " + pt(s, p) + " and its successor are not suitable");
            }
        // 3: until formulas hold exactly where realised
        for (const auto& g : cl_.cl0()) {
            if (g->op != Op::Until) continue;
            for (int s = 0; s < static_cast<int>(q_.sequences.size()); ++s) {
                const auto& seq = q_.sequences[s];
                int n = seq.phases(), pad = seq.padding();
                std::vector<char> real(n, 0);
                for (int p = pad; p < n; ++p) real[p] = has(q_.object_type(o, s, p), g->b);
                for (bool changed = true; changed;) {
                    changed = false;
                    for (int p = pad; p < n; ++p)
                        if (!real[p] && has(q_.object_type(o, s, p), g->a) && real[seq.next_phase(p)])
                            real[p] = 1, changed = true;
                }
                for (int p = pad; p < n; ++p)
                    if (static_cast<bool>(real[p]) != has(q_.object_type(o, s, p), g))
                        report("object.3", on + " at " + pt(s, p) + ": " + to_string(g) +
                                               (real[p] ? " is realised but not in the type" : " is not realised"));
            }
        }

        std::vector<int> universe;
        for (const auto& c : q_.candidates) universe.insert(universe.end(), c.types.begin(), c.types.end());
        std::sort(universe.begin(), universe.end());
        universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

        // components of the union of all agents' relations
        UnionFind reach(q_.point_count());
        for (int i = 0; i < q_.agents(); ++i) {
            std::map<int, int> first;
            for (int id = 0; id < q_.point_count(); ++id) {
                auto [it, fresh] = first.emplace(q_.rel[i][o][id], id);
                if (!fresh) reach.unite(id, it->second);
            }
        }
        auto comp = reach.classes();

        std::vector<std::map<int, std::set<int>>> class_types(q_.agents());
        std::map<int, std::set<int>> comp_types;
        for (int id = 0; id < q_.point_count(); ++id) {
            auto [s, p] = q_.point_of(id);
            if (!q_.defined(s, p)) continue;
            int t = q_.object_type(o, s, p);
            for (int i = 0; i < q_.agents(); ++i) class_types[i][q_.rel[i][o][id]].insert(t);
            comp_types[comp[id]].insert(t);
        }

        for (int id = 0; id < q_.point_count() && !full(); ++id) {
            auto [s, p] = q_.point_of(id);
            if (!q_.defined(s, p)) continue;
            int t = q_.object_type(o, s, p);
            const TypeSet& ty = q_.types[t];
            for (int i = 1; i <= q_.agents(); ++i) {
                const auto& seen = class_types[i - 1][q_.rel[i - 1][o][id]];
                // 4 / 4+: suitable types are witnessed among related points
                Index want = q_.flavor == QFlavor::Plain ? ty.index : absorptive_concat(ty.index, i);
                for (int u : universe) {
                    if (q_.types[u].index != want || !epi(t, u, i) || seen.count(u)) continue;
                    report(q_.flavor == QFlavor::Plain ? "object.4" : "object.4+",
                           on + " at " + pt(s, p) + ", agent " + std::to_string(i) + ": type " + q_.type_names[u] +
                               " is suitable but not witnessed at a related point");
                }
                // derived: K_i chi in the type iff chi at every related point
                for (const auto& g : cl_.cl0()) {
                    if (g->op != Op::Know || g->agent != i) continue;
                    bool all = std::all_of(seen.begin(), seen.end(), [&](int u) { return has(u, g->a); });
                    if (all != has(t, g))
                        report("derived.K", on + " at " + pt(s, p) + ": " + to_string(g) +
                                                (all ? " fails although its body holds at all related points"
                                                     : " holds although its body fails at a related point"));
                }
            }
            const auto& cseen = comp_types[comp[id]];
            for (const auto& g : cl_.cl0()) {
                if (g->op != Op::Common) continue;
                bool all = std::all_of(cseen.begin(), cseen.end(), [&](int u) { return has(u, g->a); });
                if (!has(t, g) && all)
                    report("object.5", on + " at " + pt(s, p) + ": ~" + to_string(g) + " has no reachable witness");
                if (has(t, g) && !all)
                    report("derived.C", on + " at " + pt(s, p) + ": " + to_string(g) + " holds but its body fails at a reachable point");
            }
        }
    }

    void tags() {
        if (q_.tags.empty()) return;
        if (q_.tags.count("sync") && !synchronous()) return;
        Model m = relation_model(q_);
        if (q_.tags.count("pr") && !check_perfect_recall(m)) report("class.pr", "relations violate perfect recall");
        if (q_.tags.count("nl") && !check_no_learning(m)) report("class.nl", "relations violate no learning");
        if (q_.tags.count("uis")) {
            const int ns = static_cast<int>(q_.sequences.size());
            for (int s = 1; s < ns; ++s) {
                if (q_.sequences[s].at(0) != q_.sequences[0].at(0)) {
                    report("class.uis", "sequences " + q_.sequences[0].id + " and " + q_.sequences[s].id +
                                            " start with different candidates");
                    continue;
                }
                if (q_.sequences[s].at(0) < 0) continue;
                for (int o = 0; o < static_cast<int>(q_.objects.size()); ++o) {
                    if (q_.object_type(o, s, 0) != q_.object_type(o, 0, 0))
                        report("class.uis", q_.objects[o].name + " differs at the initial points");
                    for (int i = 0; i < q_.agents(); ++i)
                        if (q_.rel[i][o][q_.point_id(s, 0)] != q_.rel[i][o][q_.point_id(0, 0)])
                            report("class.uis", "initial points are not related for agent " + std::to_string(i + 1) +
                                                    ", object " + q_.objects[o].name);
                }
            }
        }
    }

    // Phases stand for times: one lasso shape, pairs only within a phase.
    bool synchronous() {
        bool ok = true;
        for (const auto& s : q_.sequences)
            if (s.prefix.size() != q_.sequences[0].prefix.size() || s.cycle.size() != q_.sequences[0].cycle.size()) {
                report("class.sync", "sequence " + s.id + " has a different lasso shape than " + q_.sequences[0].id);
                ok = false;
            }
        if (!ok) return false;
        for (int i = 0; i < q_.agents(); ++i)
            for (int o = 0; o < static_cast<int>(q_.objects.size()); ++o) {
                std::map<int, int> phase_of;
                for (int id = 0; id < q_.point_count(); ++id) {
                    int ph = q_.point_of(id).second;
                    auto [it, fresh] = phase_of.emplace(q_.rel[i][o][id], ph);
                    if (!fresh && it->second != ph) {
                        report("class.sync", "agent " + std::to_string(i + 1) + ", object " + q_.objects[o].name +
                                                 " relates points of different phases");
                        ok = false;
                    }
                }
            }
        return ok;
    }

    const Quasimodel& q_;
    Closure cl_;
    std::size_t cap_;
    QValidation out_;
    std::map<std::tuple<int, int, int>, bool> epi_;
    std::map<std::pair<int, int>, bool> next_;
};

}  // namespace

QValidation validate_quasimodel(const Quasimodel& q, std::size_t max_violations) {
    try {
        return Validator(q, max_violations).run();
    } catch (const FormulaError& e) {
        QValidation v;
        v.ok = false;
        v.violations.push_back({"frame", e.what()});
        return v;
    }
}

AcceptReport acceptable_sequence_check(const std::vector<StateCandidate>& prefix,
                                       const std::vector<StateCandidate>& cycle, const Closure& cl) {
    AcceptReport rep;
    if (cycle.empty()) {
        rep.ok = false;
        rep.message = "empty cycle";
        return rep;
    }
    std::vector<StateCandidate> seq = prefix;
    seq.insert(seq.end(), cycle.begin(), cycle.end());
    const int n = static_cast<int>(seq.size());
    auto next = [&](int p) { return p + 1 < n ? p + 1 : static_cast<int>(prefix.size()); };
    for (int p = 0; p < n; ++p)
        if (!candidate_next_suitable(seq[p], seq[next(p)], cl)) {
            rep.ok = false;
            rep.step = p;
            rep.message = "consecutive candidates are not suitable";
            return rep;
        }
    auto has = [](const TypeSet& t, const Formula& f) {
        auto v = holds_in(t.members, f);
        return v && *v;
    };
    for (int p = 0; p < n; ++p)
        for (int k = 0; k < static_cast<int>(seq[p].types.size()); ++k)
            for (const auto& g : seq[p].types[k].members) {
                if (g->op != Op::Until) continue;
                // search (phase, type) pairs along suitable successors
                std::set<std::pair<int, int>> seen{{p, k}};
                std::vector<std::pair<int, int>> todo{{p, k}};
                bool ok = false;
                while (!todo.empty() && !ok) {
                    auto [ph, ty] = todo.back();
                    todo.pop_back();
                    const TypeSet& t = seq[ph].types[ty];
                    if (has(t, g->b)) { ok = true; break; }
                    if (!has(t, g->a)) continue;
                    int nx = next(ph);
                    for (int j = 0; j < static_cast<int>(seq[nx].types.size()); ++j)
                        if (next_suitable(t, seq[nx].types[j], cl) && seen.insert({nx, j}).second) todo.push_back({nx, j});
                }
                if (!ok) {
                    rep.ok = false;
                    rep.step = p;
                    rep.formula = g;
                    rep.message = "eventuality not realised";
                    return rep;
                }
            }
    // indexed types: the constant's own chain must realise its eventualities
    std::set<std::string> consts;
    for (const auto& c : seq)
        for (const auto& [k, v] : c.con) consts.insert(k);
    for (const auto& c : consts) {
        for (int p = 0; p < n; ++p) {
            auto it = seq[p].con.find(c);
            if (it == seq[p].con.end()) {
                rep.ok = false, rep.step = p, rep.constant = c, rep.message = "constant has no type";
                return rep;
            }
            const TypeSet& t = seq[p].types[it->second];
            const TypeSet& u = seq[next(p)].types[seq[next(p)].con.at(c)];
            if (!next_suitable(t, u, cl)) {
                rep.ok = false, rep.step = p, rep.constant = c, rep.message = "indexed types are not suitable";
                return rep;
            }
        }
        for (int p = 0; p < n; ++p) {
            const TypeSet& t = seq[p].types[seq[p].con.at(c)];
            for (const auto& g : t.members) {
                if (g->op != Op::Until) continue;
                bool ok = false;
                int ph = p;
                for (int steps = 0; steps <= n && !ok; ++steps, ph = next(ph)) {
                    const TypeSet& u = seq[ph].types[seq[ph].con.at(c)];
                    if (has(u, g->b)) ok = true;
                    else if (!has(u, g->a)) break;
                }
                if (!ok) {
                    rep.ok = false, rep.step = p, rep.formula = g, rep.constant = c;
                    rep.message = "eventuality of an indexed type not realised";
                    return rep;
                }
            }
        }
    }
    return rep;
}

Extraction extract_mf_model(const Quasimodel& q, int kappa) {
    for (const auto& s : q.sequences)
        if (s.padding() > 0) throw QuasimodelError("extraction does not support undefined (padded) points");
    if (q.objects.empty()) throw QuasimodelError("no objects");
    if (kappa <= 0) {
        std::set<int> used;
        for (const auto& o : q.objects)
            for (const auto& [pt, t] : o.at) used.insert(t);
        kappa = std::clamp(static_cast<int>(used.size()), 1, 8);
    }
    Closure cl(q.phi, q.agents(), q.var);
    const int no = static_cast<int>(q.objects.size());
    const int np = q.point_count();

    // constant -> object
    std::map<std::string, int> cobj;
    for (const auto& c : constants_of(q.phi)) {
        for (int o = 0; o < no && !cobj.count(c); ++o) {
            bool ok = true;
            for (int id = 0; id < np && ok; ++id) {
                auto [s, p] = q.point_of(id);
                const auto& con = q.candidates[q.sequences[s].at(p)].con;
                auto it = con.find(c);
                ok = it != con.end() && q.object_type(o, s, p) == it->second;
            }
            if (ok) cobj[c] = o;
        }
        if (!cobj.count(c)) throw QuasimodelError("no object follows constant " + c);
    }

    // merge points with identical content into states
    using Key = std::tuple<int, std::vector<int>, std::vector<int>>;
    std::map<Key, int> state_of_key;
    std::vector<int> state(np);
    std::vector<int> rep_point;
    for (int id = 0; id < np; ++id) {
        auto [s, p] = q.point_of(id);
        std::vector<int> ts, cls;
        for (int o = 0; o < no; ++o) ts.push_back(q.object_type(o, s, p));
        for (int i = 0; i < q.agents(); ++i)
            for (int o = 0; o < no; ++o) cls.push_back(q.rel[i][o][id]);
        Key k{q.sequences[s].at(p), ts, cls};
        auto [it, fresh] = state_of_key.emplace(k, static_cast<int>(rep_point.size()));
        if (fresh) rep_point.push_back(id);
        state[id] = it->second;
    }

    Model m;
    m.flavor = Flavor::Mf;
    m.sig = q.sig;
    m.sig.agents = q.agents();
    for (const auto& g : subformulas(q.phi))
        if (g->op == Op::Atom) m.sig.declare_predicate(g->name, static_cast<int>(g->terms.size()));
    for (int o = 0; o < no; ++o)
        for (int x = 0; x < kappa; ++x) m.domain.push_back(q.objects[o].name + "." + std::to_string(x));
    for (const auto& [c, o] : cobj) m.constants[c] = o * kappa;
    for (std::size_t st = 0; st < rep_point.size(); ++st) {
        auto [s, p] = q.point_of(rep_point[st]);
        m.states.push_back("s" + std::to_string(st) + "_" + q.sequences[s].id + "@" + std::to_string(p));
    }

    RealizeProblem prob;
    prob.cl = &cl;
    prob.predicates = m.sig.predicates;
    for (const auto& [c, o] : cobj) prob.constants[c] = o * kappa;
    for (std::size_t st = 0; st < rep_point.size(); ++st) {
        auto [s, p] = q.point_of(rep_point[st]);
        prob.elements.clear();
        for (int o = 0; o < no; ++o)
            for (int x = 0; x < kappa; ++x) prob.elements.push_back(&q.types[q.object_type(o, s, p)].members);
        std::optional<Realization> r;
        try {
            r = realize(prob);
        } catch (const RealizeError& e) {
            throw QuasimodelError("candidate " + q.candidates[q.sequences[s].at(p)].name + ": " + e.what());
        }
        if (!r)
            throw QuasimodelError("no first-order structure realises candidate " +
                                  q.candidates[q.sequences[s].at(p)].name + " at " + q.sequences[s].id + " " +
                                  std::to_string(p) + " with multiplicity " + std::to_string(kappa));
        m.interp.push_back(std::move(r->interp));
    }

    for (int s = 0; s < static_cast<int>(q.sequences.size()); ++s) {
        LassoRun r;
        r.id = q.sequences[s].id;
        for (int p = 0; p < q.sequences[s].phases(); ++p)
            (p < static_cast<int>(q.sequences[s].prefix.size()) ? r.prefix : r.cycle).push_back(state[q.point_id(s, p)]);
        m.runs.push_back(r);
    }
    m.part.assign(q.agents(), std::vector<std::vector<int>>(m.individuals(), std::vector<int>(m.state_count())));
    for (int i = 0; i < q.agents(); ++i)
        for (int o = 0; o < no; ++o)
            for (int x = 0; x < kappa; ++x)
                for (int st = 0; st < m.state_count(); ++st) m.part[i][o * kappa + x][st] = q.rel[i][o][rep_point[st]];
    m.clock = q.tags.count("sync") != 0;
    if (m.clock) m.normalise_clock();
    m.validate();

    Extraction ex;
    ex.kappa = kappa;
    // designated point and assignment
    Formula phi0 = q.phi;
    auto fv = free_variables(phi0);
    std::string fvar = fv.empty() ? std::string() : *fv.begin();
    if (!fvar.empty() && fvar != q.var) phi0 = substitute(phi0, fvar, Term::var(q.var));
    auto find_at = [&](int s, int p) -> int {
        for (int o = 0; o < no; ++o) {
            auto v = holds_in(q.types[q.object_type(o, s, p)].members, phi0);
            if (v && *v) return o;
        }
        return -1;
    };
    std::optional<std::pair<int, int>> d = q.designated;
    if (!d)
        for (int id = 0; id < np && !d; ++id) {
            auto pr = q.point_of(id);
            if (find_at(pr.first, pr.second) >= 0) d = pr;
        }
    if (!d || find_at(d->first, d->second) < 0) throw QuasimodelError("phi holds at no point of the quasimodel");
    ex.run = d->first;
    ex.time = d->second;
    if (!fvar.empty()) ex.sigma[fvar] = find_at(d->first, d->second) * kappa;
    ex.model = std::move(m);
    return ex;
}

}  // namespace qistk
