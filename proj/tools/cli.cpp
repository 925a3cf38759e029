#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "qistk/calculus.hpp"
#include "qistk/evaluator.hpp"
#include "qistk/generate.hpp"
#include "qistk/model.hpp"
#include "qistk/oracle.hpp"
#include "qistk/parser.hpp"
#include "qistk/probe.hpp"
#include "qistk/quasimodel.hpp"
#include "qistk/search.hpp"
#include "qistk/syntax.hpp"

namespace qistk::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

// Formula files: one formula per non-empty line; ';' and '#' start comments.
std::vector<std::string> formula_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == ';' || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }
const char* tf(bool b) { return b ? "true" : "false"; }

// Shared option blocks.
struct FormulaOpts {
    std::string formula, file, constants;
    int agents = 1;

    void add(CLI::App* s, bool many = false) {
        s->add_option("-f,--formula", formula, "formula text");
        s->add_option("--file", file, many ? "file with one formula per line" : "file holding the formula");
        s->add_option("--agents", agents, "number of agents")->check(CLI::Range(1, 64));
        s->add_option("--constants", constants, "comma list of constant names");
    }
    void declare(Signature& sig) const {
        sig.agents = agents;
        for (auto& c : split_list(constants)) sig.declare_constant(c);
    }
    std::vector<std::string> texts() const {
        std::vector<std::string> out;
        if (!formula.empty()) out.push_back(formula);
        if (!file.empty())
            for (auto& l : formula_lines(read_file(file))) out.push_back(l);
        if (out.empty()) throw UsageError("a formula is required (--formula or --file)");
        return out;
    }
    Formula one(Signature& sig) const {
        auto t = texts();
        if (t.size() != 1) throw UsageError("exactly one formula expected");
        declare(sig);
        return parse_formula_infer(t[0], sig);
    }
};

struct BudgetOpts {
    std::optional<int> domain_max, states_max, prefix_max, cycle_max;
    std::optional<double> seconds;
    std::optional<std::uint64_t> seed;

    void add(CLI::App* s) {
        s->add_option("--domain-max", domain_max, "individuals / objects bound (QISTK_DOMAIN_MAX)");
        s->add_option("--states-max", states_max, "states / runs bound (QISTK_STATES_MAX)");
        s->add_option("--prefix-max", prefix_max, "lasso prefix bound (QISTK_PREFIX_MAX)");
        s->add_option("--cycle-max", cycle_max, "lasso cycle bound (QISTK_CYCLE_MAX)");
        s->add_option("--time-budget", seconds, "seconds (QISTK_TIME_BUDGET)");
        s->add_option("--seed", seed, "random seed (QISTK_SEED)");
    }
    OracleBudget budget() const {
        OracleBudget b;
        apply_env(b);
        if (domain_max) b.domain_max = *domain_max;
        if (states_max) b.states_max = *states_max;
        if (prefix_max) b.prefix_max = *prefix_max;
        if (cycle_max) b.cycle_max = *cycle_max;
        if (seconds) b.seconds = *seconds;
        if (seed) b.seed = *seed;
        try {
            b.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return b;
    }
};

std::string assignment_text(const Model& m, const Assignment& sigma) {
    std::string s;
    for (auto& [v, i] : sigma) {
        if (!s.empty()) s += ",";
        s += v + "=" + m.domain.at(i);
    }
    return s.empty() ? "-" : s;
}

json assignment_json(const Model& m, const Assignment& sigma) {
    json j = json::object();
    for (auto& [v, i] : sigma) j[v] = m.domain.at(i);
    return j;
}

std::set<std::string> parse_tags(const std::string& s) {
    std::set<std::string> tags;
    for (auto& t : split_list(s)) {
        if (t != "pr" && t != "nl" && t != "sync" && t != "uis") throw UsageError("unknown tag " + t);
        tags.insert(t);
    }
    return tags;
}

ClassReq parse_class(const std::string& s) {
    ClassReq r;
    for (auto& t : split_list(s)) {
        if (t == "pr") r.pr = true;
        else if (t == "nl") r.nl = true;
        else if (t == "sync") r.sync = true;
        else if (t == "uis") r.uis = true;
        else if (t == "shared") r.shared = true;
        else throw UsageError("unknown class " + t);
    }
    return r;
}

Flavor parse_flavor(const std::string& s) {
    if (s == "qis") return Flavor::Qis;
    if (s == "kripke") return Flavor::Kripke;
    if (s == "mf") return Flavor::Mf;
    throw UsageError("unknown flavor " + s);
}

// Each handler fills text and j, returns the exit code.
using Handler = std::function<int(std::string& text, json& j)>;

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
    CLI::App app{"qistk: first-order temporal-epistemic logic toolkit", "qistk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qistk 1.0");
    bool as_json = false;
    Handler handler;

    auto sub = [&](const std::string& name, const std::string& desc) {
        auto* s = app.add_subcommand(name, desc);
        s->add_flag("--json", as_json, "emit the machine-readable report only");
        return s;
    };

    // parse
    FormulaOpts parse_f;
    {
        auto* s = sub("parse", "parse a formula and print its canonical form");
        parse_f.add(s);
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Signature sig;
                Formula f = parse_f.one(sig);
                auto fv = free_variables(f);
                std::string fvs;
                for (auto& v : fv) fvs += (fvs.empty() ? "" : " ") + v;
                text = "formula: " + to_string(f) + "\nsentence: " + yes_no(fv.empty()) +
                       "\nmonodic: " + yes_no(is_monodic(f)) + "\nfree: " + (fvs.empty() ? "-" : fvs) +
                       "\nalternation-depth: " + std::to_string(alternation_depth(f)) + "\n";
                j = {{"formula", to_string(f)},
                     {"sentence", fv.empty()},
                     {"monodic", is_monodic(f)},
                     {"free", std::vector<std::string>(fv.begin(), fv.end())},
                     {"alternation_depth", alternation_depth(f)},
                     {"size", f->size}};
                return Ok;
            };
        });
    }

    // closure
    FormulaOpts clo_f;
    std::string clo_kind = "sub-x", clo_var = "x";
    {
        auto* s = sub("closure", "print a closure set of a formula");
        clo_f.add(s);
        s->add_option("--kind", clo_kind, "sub | sub-c | sub-con | sub-0 | sub-1 | sub-x | cl0")
            ->check(CLI::IsMember({"sub", "sub-c", "sub-con", "sub-0", "sub-1", "sub-x", "cl0"}));
        s->add_option("--var", clo_var, "variable for sub-x and cl0");
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Signature sig;
                Formula f = clo_f.one(sig);
                int m = sig.agents;
                FormulaSet set;
                if (clo_kind == "sub") set = subformulas(f);
                else if (clo_kind == "sub-c") set = closure_subC(f, m);
                else if (clo_kind == "sub-con") set = closure_subCON(f, m);
                else if (clo_kind == "sub-0") set = closure_sub_n(f, m, 0);
                else if (clo_kind == "sub-1") set = closure_sub_n(f, m, 1);
                else if (clo_kind == "sub-x") set = closure_sub_x(f, m, clo_var);
                else set = Closure(f, m, clo_var).cl0();
                std::vector<std::string> items;
                for (auto& g : set) {
                    items.push_back(to_string(g));
                    text += items.back() + "\n";
                }
                text += "count: " + std::to_string(items.size()) + "\n";
                j = {{"kind", clo_kind}, {"count", items.size()}, {"formulas", items}};
                return Ok;
            };
        });
    }

    // check-monodic
    FormulaOpts mono_f;
    {
        auto* s = sub("check-monodic", "test membership in the monodic fragment");
        mono_f.add(s);
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Signature sig;
                Formula f = mono_f.one(sig);
                Formula bad = monodic_violation(f);
                j = {{"monodic", bad == nullptr}};
                if (!bad) {
                    text = "monodic\n";
                    return Ok;
                }
                text = "non-monodic\nviolation: " + to_string(bad) + "\n";
                j["violation"] = to_string(bad);
                return False;
            };
        });
    }

    // eval
    std::string ev_model, ev_formula, ev_run = "0";
    long long ev_step = 0;
    std::vector<std::string> ev_assign;
    {
        auto* s = sub("eval", "evaluate a formula at a point of a model");
        s->add_option("-m,--model", ev_model, "model file")->required();
        s->add_option("-f,--formula", ev_formula, "formula text")->required();
        s->add_option("--run", ev_run, "run id or index");
        s->add_option("--step", ev_step, "time step")->check(CLI::NonNegativeNumber);
        s->add_option("--assign", ev_assign, "variable=individual (repeatable)");
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Model m = load_model_file(ev_model);
                Formula f = parse_formula(ev_formula, m.sig);
                int r = m.run_index(ev_run);
                if (r < 0) {
                    bool digits = !ev_run.empty() && std::all_of(ev_run.begin(), ev_run.end(), ::isdigit);
                    r = digits ? std::stoi(ev_run) : -1;
                    if (r < 0 || r >= static_cast<int>(m.runs.size())) throw UsageError("unknown run " + ev_run);
                }
                Assignment sigma;
                for (auto& a : ev_assign) {
                    auto eq = a.find('=');
                    if (eq == std::string::npos) throw UsageError("--assign expects variable=individual");
                    int i = m.individual_index(a.substr(eq + 1));
                    if (i < 0) throw UsageError("unknown individual " + a.substr(eq + 1));
                    sigma[a.substr(0, eq)] = i;
                }
                bool v = evaluate(m, r, ev_step, sigma, f);
                text = std::string(tf(v)) + "\n";
                j = {{"formula", to_string(f)},
                     {"run", m.runs[r].id},
                     {"step", ev_step},
                     {"assignment", assignment_json(m, sigma)},
                     {"value", v}};
                return v ? Ok : False;
            };
        });
    }

    // truth
    std::string tr_model, tr_formula;
    {
        auto* s = sub("truth", "check a formula at every point under every assignment");
        s->add_option("-m,--model", tr_model, "model file")->required();
        s->add_option("-f,--formula", tr_formula, "formula text")->required();
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Model m = load_model_file(tr_model);
                Formula f = parse_formula(tr_formula, m.sig);
                Verdict v = model_truth(m, f);
                j = {{"formula", to_string(f)}, {"true", v.truth}};
                if (v.truth) {
                    text = "true\n";
                    return Ok;
                }
                auto& w = *v.witness;
                text = "false\ncounterexample: run " + m.runs[w.run].id + " step " + std::to_string(w.phase) +
                       " assignment " + assignment_text(m, w.sigma) + "\n";
                j["counterexample"] = {
                    {"run", m.runs[w.run].id}, {"step", w.phase}, {"assignment", assignment_json(m, w.sigma)}};
                return False;
            };
        });
    }

    // classify
    std::string cl_model;
    int cl_cap = WindowConfig{}.cap;
    {
        auto* s = sub("classify", "report the system classes a model belongs to");
        s->add_option("-m,--model", cl_model, "model file")->required();
        s->add_option("--window-cap", cl_cap, "upper bound on the comparison window")->check(CLI::PositiveNumber);
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Model m = load_model_file(cl_model);
                WindowConfig wc;
                wc.cap = cl_cap;
                ClassReport c = classify(m, wc);
                text = std::string("sync=") + tf(c.sync) + "\npr=" + tf(c.pr) + "\nnl=" + tf(c.nl) +
                       "\nuis=" + tf(c.uis) + "\nshared=" + tf(c.shared) +
                       "\nwindow=" + std::to_string(c.window) + "\n";
                j = {{"sync", c.sync}, {"pr", c.pr},         {"nl", c.nl},
                     {"uis", c.uis},   {"shared", c.shared}, {"window", c.window}};
                return Ok;
            };
        });
    }

    // transform-g / to-mf
    std::string g_model, g_out, mf_model, mf_out;
    auto model_transform = [&](const std::string& name, const std::string& desc, std::string& in, std::string& out,
                               Model (*fn)(const Model&)) {
        auto* s = sub(name, desc);
        s->add_option("-m,--model", in, "model file")->required();
        s->add_option("-o,--output", out, "write the result here instead of stdout");
        s->callback([&, fn] {
            handler = [&, fn](std::string& text, json& j) {
                Model r = fn(load_model_file(in));
                std::string body = save_model(r);
                j = {{"flavor", to_string(r.flavor)},
                     {"states", r.state_count()},
                     {"runs", r.runs.size()},
                     {"individuals", r.individuals()}};
                if (!out.empty()) {
                    write_file(out, body);
                    j["output"] = out;
                    text = "wrote " + out + "\n";
                } else {
                    j["model"] = body;
                    text = body;
                }
                return Ok;
            };
        });
    };
    model_transform("transform-g", "apply the g-map to a Kripke model", g_model, g_out, &g_transform);
    model_transform("to-mf", "read a Kripke model as an mf-model", mf_model, mf_out, &kripke_to_mf);

    // axioms
    FormulaOpts ax_f;
    std::string ax_system = "QKT";
    std::vector<std::string> ax_schemas;
    {
        auto* s = sub("axioms", "list axiom schemas, or instantiate them over a formula pool");
        ax_f.add(s, true);
        s->add_option("--system", ax_system, "QKT, QKTC, QKT^{1,2}, ...");
        s->add_option("--schema", ax_schemas, "restrict to these schemas (repeatable)");
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                SystemSpec sys = parse_system(ax_system, ax_f.agents);
                j = {{"system", sys.name()}};
                if (ax_f.formula.empty() && ax_f.file.empty()) {
                    json list = json::array();
                    for (auto& si : schema_catalogue()) {
                        bool ok = sys.allows(si.name);
                        std::string kind = si.kind == SchemaKind::Axiom ? "axiom" : "rule";
                        text += si.name + "\t" + kind + "\t" + (ok ? "in" : "out") + "\t" + si.display + "\n";
                        list.push_back({{"name", si.name}, {"kind", kind}, {"in_system", ok}, {"display", si.display}});
                    }
                    j["schemas"] = list;
                    return Ok;
                }
                for (auto& n : ax_schemas)
                    if (!find_schema(n)) throw UsageError("unknown schema " + n);
                Signature sig;
                ax_f.declare(sig);
                std::vector<Formula> pool;
                for (auto& t : ax_f.texts()) pool.push_back(parse_formula_infer(t, sig));
                auto inst = axiom_instances(sys, pool, ax_schemas);
                json list = json::array();
                for (auto& [n, f] : inst) {
                    text += n + ": " + to_string(f) + "\n";
                    list.push_back({{"schema", n}, {"formula", to_string(f)}});
                }
                text += "count: " + std::to_string(inst.size()) + "\n";
                j["instances"] = list;
                return Ok;
            };
        });
    }

    // prove-check
    std::string pc_file, pc_system;
    {
        auto* s = sub("prove-check", "check a Hilbert-style derivation");
        s->add_option("-d,--derivation", pc_file, "derivation file")->required();
        s->add_option("--system", pc_system, "overrides the file's system header");
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Derivation d = load_derivation_file(pc_file);
                std::string name = !pc_system.empty() ? pc_system : d.system.value_or("QKT");
                SystemSpec sys = parse_system(name, d.sig.agents);
                CheckResult r = check_derivation(d, sys);
                j = {{"system", sys.name()}, {"lines", d.lines.size()}, {"accepted", r.ok}};
                if (r.ok) {
                    text = "accepted (" + std::to_string(d.lines.size()) + " lines, " + sys.name() + ")\n";
                    return Ok;
                }
                text = "rejected at line " + std::to_string(r.error_line) + ": " + r.message + "\n";
                j["line"] = r.error_line;
                j["message"] = r.message;
                return False;
            };
        });
    }

    // probe
    FormulaOpts pr_f;
    BudgetOpts pr_b;
    std::string pr_class, pr_flavor = "qis";
    int pr_models = 100;
    {
        auto* s = sub("probe", "check formulas on randomly generated models of a class");
        pr_f.add(s, true);
        pr_b.add(s);
        s->add_option("--class", pr_class, "comma list of pr, nl, sync, uis, shared");
        s->add_option("--flavor", pr_flavor, "qis | kripke | mf");
        s->add_option("--models", pr_models, "number of models")->check(CLI::PositiveNumber);
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                OracleBudget b = pr_b.budget();
                GenConfig cfg;
                cfg.flavor = parse_flavor(pr_flavor);
                cfg.agents = pr_f.agents;
                cfg.domain_max = b.domain_max;
                cfg.states_max = b.states_max;
                cfg.prefix_max = b.prefix_max;
                cfg.cycle_max = b.cycle_max;
                cfg.predicates.clear();
                Signature sig;
                pr_f.declare(sig);
                std::vector<Formula> fs;
                for (auto& t : pr_f.texts()) fs.push_back(parse_formula_infer(t, sig));
                if (sig.predicates.empty()) cfg.predicates = {{"p", 0}};
                ClassReq req = parse_class(pr_class);
                Rng rng(b.seed);
                ProbeReport r = validity_probe(cfg, fs, req, pr_models, rng);
                text = "class: " + to_string(req) +
                       "\nmodels: " + std::to_string(r.models) + "\nchecks: " + std::to_string(r.checks) +
                       "\nfailed: " + std::to_string(r.failed) + "\n";
                j = {{"class", to_string(req)}, {"seed", b.seed},     {"models", r.models},
                     {"tries", r.tries},        {"checks", r.checks}, {"failed", r.failed},
                     {"exhausted", r.exhausted}};
                if (r.first) {
                    auto& w = r.first->witness;
                    const Model& m = r.first->model;
                    text += "counterexample: " + to_string(r.first->formula) + " fails at run " + m.runs[w.run].id +
                            " step " + std::to_string(w.phase) + " assignment " + assignment_text(m, w.sigma) +
                            "\n" + save_model(m);
                    j["counterexample"] = {{"formula", to_string(r.first->formula)},
                                           {"run", m.runs[w.run].id},
                                           {"step", w.phase},
                                           {"assignment", assignment_json(m, w.sigma)},
                                           {"model", save_model(m)}};
                    return False;
                }
                if (r.exhausted) {
                    text += "unknown: could not generate enough models of the class\n";
                    return Unknown;
                }
                return Ok;
            };
        });
    }

    // qm-validate
    std::string qv_file;
    {
        auto* s = sub("qm-validate", "validate a quasimodel file");
        s->add_option("-q,--quasimodel", qv_file, "quasimodel file")->required();
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Quasimodel q = load_quasimodel_file(qv_file);
                QValidation v = validate_quasimodel(q);
                json list = json::array();
                for (auto& x : v.violations) {
                    text += x.clause + ": " + x.detail + "\n";
                    list.push_back({{"clause", x.clause}, {"detail", x.detail}});
                }
                text = (v.ok ? "valid\n" : "invalid\n") + text;
                j = {{"valid", v.ok}, {"violations", list}};
                return v.ok ? Ok : False;
            };
        });
    }

    // qm-sat
    FormulaOpts qs_f;
    BudgetOpts qs_b;
    std::string qs_tags, qs_out;
    {
        auto* s = sub("qm-sat", "search for a quasimodel of a formula within the budget");
        qs_f.add(s);
        qs_b.add(s);
        s->add_option("--tags", qs_tags, "comma list of pr, nl, sync, uis");
        s->add_option("-o,--output", qs_out, "write the quasimodel here instead of stdout");
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                OracleBudget b = qs_b.budget();
                Signature sig;
                Formula f = qs_f.one(sig);
                auto tags = parse_tags(qs_tags);
                SearchResult r = bounded_sat_search(f, sig, tags, b);
                j = {{"formula", to_string(f)},
                     {"verdict", r.sat ? "sat" : "unknown"},
                     {"shapes_tried", r.shapes_tried},
                     {"budget_exhausted", r.budget_exhausted}};
                if (!r.sat) {
                    text = "unknown\nshapes tried: " + std::to_string(r.shapes_tried) +
                           (r.note.empty() ? "" : "\nnote: " + r.note) + "\n";
                    if (!r.note.empty()) j["note"] = r.note;
                    return Unknown;
                }
                std::string body = save_quasimodel(*r.quasimodel);
                j["shape"] = r.shape.describe();
                text = "sat\nshape: " + r.shape.describe() + "\n";
                if (!qs_out.empty()) {
                    write_file(qs_out, body);
                    j["output"] = qs_out;
                    text += "wrote " + qs_out + "\n";
                } else {
                    j["quasimodel"] = body;
                    text += body;
                }
                return Ok;
            };
        });
    }

    // qm-extract
    std::string qe_file, qe_out;
    int qe_kappa = 0;
    {
        auto* s = sub("qm-extract", "build an mf-model from a quasimodel");
        s->add_option("-q,--quasimodel", qe_file, "quasimodel file")->required();
        s->add_option("--kappa", qe_kappa, "copies per type (0 picks the default)")->check(CLI::NonNegativeNumber);
        s->add_option("-o,--output", qe_out, "write the model here instead of stdout");
        s->callback([&] {
            handler = [&](std::string& text, json& j) {
                Quasimodel q = load_quasimodel_file(qe_file);
                QValidation v = validate_quasimodel(q);
                if (!v.ok)
                    throw UsageError("quasimodel is invalid (" + v.violations.front().clause + ": " +
                                     v.violations.front().detail + ")");
                Extraction e = extract_mf_model(q, qe_kappa);
                bool holds = evaluate(e.model, e.run, e.time, e.sigma, q.phi);
                std::string body = save_model(e.model);
                std::string where = "run " + e.model.runs[e.run].id + " step " + std::to_string(e.time) +
                                    " assignment " + assignment_text(e.model, e.sigma);
                j = {{"kappa", e.kappa},
                     {"run", e.model.runs[e.run].id},
                     {"step", e.time},
                     {"assignment", assignment_json(e.model, e.sigma)},
                     {"phi", holds}};
                text = std::string("phi ") + (holds ? "holds" : "fails") + " at " + where + "\nkappa: " +
                       std::to_string(e.kappa) + "\n";
                if (!qe_out.empty()) {
                    write_file(qe_out, body);
                    j["output"] = qe_out;
                    text += "wrote " + qe_out + "\n";
                } else {
                    j["model"] = body;
                    text += body;
                }
                return holds ? Ok : False;
            };
        });
    }

    CommandResult res;
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        res.text = app.help();
        for (auto* s : app.get_subcommands()) res.text = s->help();
        return res;
    } catch (const CLI::CallForVersion&) {
        res.text = "qistk 1.0\n";
        return res;
    } catch (const CLI::ParseError& e) {
        res.code = Usage;
        res.error = std::string(e.what()) + "\nrun with --help for usage\n";
        return res;
    }

    std::string text;
    json j;
    try {
        res.code = handler(text, j);
    } catch (const std::exception& e) {
        res.code = Usage;
        res.error = std::string("error: ") + e.what() + "\n";
        return res;
    }
    j["exit"] = res.code;
    if (as_json) res.json = j.dump(2) + "\n";
    else res.text = text;
    return res;
}

}  // namespace qistk::cli
