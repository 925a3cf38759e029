#include "qistk/probe.hpp"

#include <algorithm>

#include "qistk/syntax.hpp"

namespace qistk {

namespace {

void collect_signature(const Formula& f, GenConfig& cfg) {
    if (f->op == Op::Atom) {
        int arity = static_cast<int>(f->terms.size());
        auto it = cfg.predicates.find(f->name);
        if (it == cfg.predicates.end()) cfg.predicates[f->name] = arity;
        else if (it->second != arity) throw EvalError("predicate " + f->name + " used with two arities");
        for (const auto& t : f->terms)
            if (t.constant && std::find(cfg.constants.begin(), cfg.constants.end(), t.name) == cfg.constants.end())
                cfg.constants.push_back(t.name);
        return;
    }
    if (f->a) collect_signature(f->a, cfg);
    if (f->b) collect_signature(f->b, cfg);
}

}  // namespace

std::optional<ProbeFailure> probe_model(const Model& m, const std::vector<Formula>& formulas) {
    Evaluator ev(m);
    for (const auto& f : formulas) {
        auto fv = free_variables(f);
        auto sigmas = all_assignments(m, {fv.begin(), fv.end()});
        for (int r = 0; r < static_cast<int>(m.runs.size()); ++r)
            for (int p = 0; p < m.runs[r].phases(); ++p)
                for (const auto& s : sigmas)
                    if (!ev.eval({r, p}, s, f)) return ProbeFailure{m, f, Witness{r, p, s}};
    }
    return std::nullopt;
}

ProbeReport validity_probe(GenConfig cfg, const std::vector<Formula>& formulas, const ClassReq& req,
                           int models, Rng& rng, int max_tries_per_model) {
    for (const auto& f : formulas) collect_signature(f, cfg);
    for (const auto& f : formulas) cfg.agents = std::max(cfg.agents, max_agent(f));
    ProbeReport rep;
    while (rep.models < models) {
        auto g = generate_in_class(cfg, req, rng, max_tries_per_model);
        rep.tries += g.tries;
        if (!g.model) {
            rep.exhausted = true;
            break;
        }
        ++rep.models;
        Evaluator ev(*g.model);
        const Model& m = *g.model;
        for (const auto& f : formulas) {
            ++rep.checks;
            auto fv = free_variables(f);
            auto sigmas = all_assignments(m, {fv.begin(), fv.end()});
            bool ok = true;
            for (int r = 0; r < static_cast<int>(m.runs.size()) && ok; ++r)
                for (int p = 0; p < m.runs[r].phases() && ok; ++p)
                    for (const auto& s : sigmas)
                        if (!ev.eval({r, p}, s, f)) {
                            ok = false;
                            if (!rep.first) rep.first = ProbeFailure{m, f, Witness{r, p, s}};
                            break;
                        }
            if (!ok) ++rep.failed;
        }
    }
    return rep;
}

}  // namespace qistk
