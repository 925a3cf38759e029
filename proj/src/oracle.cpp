#include "qistk/oracle.hpp"

#include <chrono>
#include <cstdlib>
#include <stdexcept>

#include "qistk/generate.hpp"
#include "qistk/types.hpp"

namespace qistk {

void OracleBudget::validate() const {
    if (domain_max < 1 || states_max < 1 || prefix_max < 0 || cycle_max < 1 || seconds <= 0 || samples < 1 ||
        conflicts < 1)
        throw std::invalid_argument("budget bounds must be positive");
}

void apply_env(OracleBudget& b) {
    auto num = [](const char* name, auto& field) {
        const char* v = std::getenv(name);
        if (!v || !*v) return;
        try {
            if constexpr (std::is_floating_point_v<std::decay_t<decltype(field)>>) field = std::stod(v);
            else field = static_cast<std::decay_t<decltype(field)>>(std::stoll(v));
        } catch (...) {
            throw std::invalid_argument(std::string("bad value for ") + name);
        }
    };
    num("QISTK_DOMAIN_MAX", b.domain_max);
    num("QISTK_STATES_MAX", b.states_max);
    num("QISTK_PREFIX_MAX", b.prefix_max);
    num("QISTK_CYCLE_MAX", b.cycle_max);
    num("QISTK_TIME_BUDGET", b.seconds);
    num("QISTK_SEED", b.seed);
}

std::string to_string(Consistency v) {
    switch (v) {
        case Consistency::Yes: return "yes";
        case Consistency::No: return "no";
        default: return "unknown";
    }
}

std::string to_string(OracleBudget::Tier t) {
    return t == OracleBudget::Tier::Hintikka ? "hintikka" : "bounded-semantic";
}

namespace {

// A coherent type containing gamma whose negated knowledge formulas each have
// a coherent witness type with the same profile for that agent.
bool hintikka(const Formula& gamma, int agents) {
    Closure cl(gamma, agents, fresh_variable(gamma));
    TypeSpace ts(cl);
    Formula g0 = gamma;
    auto fv = free_variables(g0);
    if (fv.size() == 1) g0 = substitute(g0, *fv.begin(), Term::var(cl.var()));
    auto l = ts.literal(g0);
    if (!l) return true;
    bool complete = true;
    auto types = ts.enumerate(false, 4096, complete, {{l->first, !l->second}});
    for (const auto& t : types) {
        bool ok = true;
        for (int r = 0; r < static_cast<int>(ts.reps().size()) && ok; ++r) {
            const Formula& k = ts.reps()[r];
            if (k->op != Op::Know || t[r]) continue;
            auto body = ts.literal(k->a);
            if (!body) continue;
            std::vector<std::pair<int, bool>> forced{{body->first, body->second}};  // body false
            for (int s = 0; s < static_cast<int>(ts.reps().size()); ++s)
                if (ts.reps()[s]->op == Op::Know && ts.reps()[s]->agent == k->agent) forced.push_back({s, t[s] != 0});
            bool c2 = true;
            ok = !ts.enumerate(false, 1, c2, forced).empty();
        }
        if (ok) return true;
    }
    return !complete;  // unexplored types: no refutation
}

}  // namespace

OracleResult consistent(const Formula& gamma, const OracleBudget& budget, int agents) {
    budget.validate();
    if (free_variables(gamma).size() > 1) throw std::invalid_argument("at most one free variable");
    int m = std::max({1, agents, max_agent(gamma)});
    OracleResult res;
    res.tier = OracleBudget::Tier::Hintikka;
    if (!hintikka(gamma, m)) {
        res.verdict = Consistency::No;
        res.note = "local propagation refutes the formula";
        return res;
    }
    if (budget.tier == OracleBudget::Tier::Hintikka) {
        res.verdict = Consistency::Yes;
        res.note = "no local contradiction";
        return res;
    }
    res.tier = OracleBudget::Tier::BoundedSemantic;
    GenConfig cfg;
    cfg.flavor = Flavor::Kripke;
    cfg.agents = m;
    cfg.domain_min = 1;
    cfg.domain_max = budget.domain_max;
    cfg.states_max = budget.states_max;
    cfg.runs_max = budget.states_max;
    cfg.prefix_max = budget.prefix_max;
    cfg.cycle_max = budget.cycle_max;
    cfg.predicates.clear();
    for (const auto& g : subformulas(gamma))
        if (g->op == Op::Atom) cfg.predicates[g->name] = static_cast<int>(g->terms.size());
    for (const auto& c : constants_of(gamma)) cfg.constants.push_back(c);
    auto fvs = free_variables(gamma);
    std::vector<std::string> vars(fvs.begin(), fvs.end());

    Rng rng(budget.seed);
    auto start = std::chrono::steady_clock::now();
    for (long long k = 0; k < budget.samples; ++k) {
        if ((k & 63) == 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > budget.seconds)
            break;
        Model model = random_model(cfg, ClassReq{}, rng);
        Evaluator ev(model);
        for (const auto& sigma : all_assignments(model, vars)) {
            const auto& ext = ev.extension(gamma, sigma);
            for (std::size_t p = 0; p < ext.size(); ++p)
                if (ext[p]) {
                    res.verdict = Consistency::Yes;
                    res.run = ev.point_list()[p].run;
                    res.time = ev.point_list()[p].phase;
                    res.sigma = sigma;
                    res.witness = std::move(model);
                    res.note = "model found after " + std::to_string(k + 1) + " samples";
                    return res;
                }
        }
    }
    res.verdict = Consistency::Unknown;
    res.note = "no model among the sampled ones";
    return res;
}

}  // namespace qistk
