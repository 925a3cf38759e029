#include "qistk/generate.hpp"

namespace qistk {

int uniform(Rng& rng, int lo, int hi) {
    if (hi <= lo) return lo;
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng() % span);
}

std::string to_string(const ClassReq& r) {
    std::string s;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!s.empty()) s += ",";
        s += name;
    };
    add(r.pr, "pr");
    add(r.nl, "nl");
    add(r.sync, "sync");
    add(r.uis, "uis");
    add(r.shared, "shared");
    return s.empty() ? "any" : s;
}

bool satisfies(const Model& m, const ClassReq& req) {
    if (req.sync && !check_synchronicity(m)) return false;
    if (req.uis && !check_unique_initial_state(m)) return false;
    if (req.shared && !check_shared_knowledge(m)) return false;
    if (req.pr && !check_perfect_recall(m)) return false;
    if (req.nl && !check_no_learning(m)) return false;
    return true;
}

namespace {

std::vector<int> random_classes(Rng& rng, int n) {
    int k = uniform(rng, 1, n);
    std::vector<int> c(n);
    for (auto& x : c) x = uniform(rng, 0, k - 1);
    return c;
}

void enumerate_tuples(int arity, int d, Tuple& cur, std::vector<Tuple>& out) {
    if (static_cast<int>(cur.size()) == arity) {
        out.push_back(cur);
        return;
    }
    for (int x = 0; x < d; ++x) {
        cur.push_back(x);
        enumerate_tuples(arity, d, cur, out);
        cur.pop_back();
    }
}

}  // namespace

Model random_model(const GenConfig& cfg, const ClassReq& req, Rng& rng) {
    Model m;
    m.flavor = cfg.flavor;
    m.sig.agents = cfg.agents;
    m.clock = req.sync;
    int d = uniform(rng, cfg.domain_min, cfg.domain_max);
    for (int i = 0; i < d; ++i) m.domain.push_back("d" + std::to_string(i));
    for (const auto& [p, a] : cfg.predicates) m.sig.declare_predicate(p, a);
    for (const auto& c : cfg.constants) {
        m.sig.declare_constant(c);
        m.constants[c] = uniform(rng, 0, d - 1);
    }
    int w = uniform(rng, 1, cfg.states_max);
    for (int s = 0; s < w; ++s) m.states.push_back("w" + std::to_string(s));

    int per = m.flavor == Flavor::Mf ? d : 1;
    m.part.assign(cfg.agents, std::vector<std::vector<int>>(per));
    if (m.flavor == Flavor::Qis) {
        m.locals.assign(w, std::vector<std::string>(cfg.agents));
        for (int s = 0; s < w; ++s) {
            m.env.push_back("e" + std::to_string(s));
            for (int i = 0; i < cfg.agents; ++i) {
                int l = uniform(rng, 0, cfg.locals_max - 1);
                m.locals[s][i] = "l" + std::to_string(l);
            }
            if (req.shared)
                for (int i = 1; i < cfg.agents; ++i) m.locals[s][i] = m.locals[s][0];
        }
        for (int i = 0; i < cfg.agents; ++i) {
            std::map<std::string, int> ids;
            m.part[i][0].resize(w);
            for (int s = 0; s < w; ++s)
                m.part[i][0][s] = ids.emplace(m.locals[s][i], static_cast<int>(ids.size())).first->second;
        }
    } else {
        for (int i = 0; i < cfg.agents; ++i)
            for (int a = 0; a < per; ++a)
                m.part[i][a] = req.shared && i > 0 ? m.part[0][a] : random_classes(rng, w);
    }

    int nr = uniform(rng, 1, cfg.runs_max);
    for (int r = 0; r < nr; ++r) {
        LassoRun run;
        run.id = "r" + std::to_string(r);
        int p = uniform(rng, 0, cfg.prefix_max);
        int c = uniform(rng, 1, cfg.cycle_max);
        for (int k = 0; k < p; ++k) run.prefix.push_back(uniform(rng, 0, w - 1));
        for (int k = 0; k < c; ++k) run.cycle.push_back(uniform(rng, 0, w - 1));
        if (req.uis) (run.prefix.empty() ? run.cycle : run.prefix)[0] = 0;
        m.runs.push_back(run);
    }

    m.interp.assign(w, {});
    for (const auto& [p, a] : cfg.predicates) {
        std::vector<Tuple> tuples;
        Tuple cur;
        enumerate_tuples(a, d, cur, tuples);
        for (int s = 0; s < w; ++s)
            for (const auto& t : tuples)
                if (uniform(rng, 0, 1)) m.interp[s][p].insert(t);
    }
    if (m.clock) m.normalise_clock();
    m.validate();
    return m;
}

GenResult generate_in_class(const GenConfig& cfg, const ClassReq& req, Rng& rng, int max_tries) {
    GenResult res;
    while (res.tries < max_tries) {
        ++res.tries;
        Model m = random_model(cfg, req, rng);
        if (satisfies(m, req)) {
            res.model = std::move(m);
            return res;
        }
    }
    return res;
}

}  // namespace qistk
