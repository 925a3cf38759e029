#include <doctest.h>

#include "qistk/calculus.hpp"
#include "qistk/evaluator.hpp"
#include "qistk/generate.hpp"
#include "qistk/probe.hpp"
#include "support.hpp"

using namespace qistk;
using support::fml;

namespace {

Model fig1a() { return load_model_file(support::corpus("fig1a.qis")); }
Model fig1b() { return load_model_file(support::corpus("fig1b.qis")); }

Formula parse_in(const Model& m, const std::string& text) { return parse_formula(text, m.sig); }

GenConfig small(Flavor f, int agents = 1) {
    GenConfig cfg;
    cfg.flavor = f;
    cfg.agents = agents;
    cfg.predicates = {{"p", 0}, {"q", 0}, {"P", 1}, {"R", 2}};
    return cfg;
}

Formula schema(const std::string& name, Formula phi, Formula psi = nullptr, Formula chi = nullptr, int i = 1, int j = 2) {
    Bindings b;
    b.formulas["phi"] = phi;
    if (psi) b.formulas["psi"] = psi;
    if (chi) b.formulas["chi"] = chi;
    b.agents["i"] = i;
    b.agents["j"] = j;
    return instantiate_schema(name, b, std::max(i, j)).conclusion;
}

}  // namespace

TEST_CASE("fig1a: the Barcan formula fails") {
    Model m = fig1a();
    int r = m.run_index("r");
    CHECK(evaluate(m, r, 0, {}, parse_in(m, "forall x . K 1 P(x)")));
    CHECK_FALSE(evaluate(m, r, 0, {}, parse_in(m, "K 1 forall x . P(x)")));
    Verdict v = model_truth(m, parse_in(m, "((forall x . K 1 P(x)) -> K 1 forall x . P(x))"));
    CHECK_FALSE(v.truth);
    REQUIRE(v.witness);
    CHECK(v.witness->run == r);
    CHECK(v.witness->phase == 0);
}

TEST_CASE("fig1b: the K axiom fails") {
    Model m = fig1b();
    int q = m.run_index("q");
    Assignment s{{"x", m.individual_index("c")}};
    CHECK(evaluate(m, q, 0, s, parse_in(m, "K 1 (Q(x) -> exists x . Q(x))")));
    CHECK(evaluate(m, q, 0, s, parse_in(m, "K 1 Q(x)")));
    CHECK_FALSE(evaluate(m, q, 0, s, parse_in(m, "K 1 exists x . Q(x)")));
    Formula k = parse_in(m, "(K 1 (Q(x) -> exists x . Q(x)) -> (K 1 Q(x) -> K 1 exists x . Q(x)))");
    auto w = find_counterexample(m, k);
    REQUIRE(w);
    CHECK(w->run == q);
    CHECK(w->phase == 0);
    CHECK(w->sigma.at("x") == m.individual_index("c"));
    auto again = find_counterexample(m, k);
    CHECK((again->run == w->run && again->phase == w->phase && again->sigma == w->sigma));
}

TEST_CASE("point truth") {
    Model m = fig1a();
    CHECK(evaluate(m, 0, 0, {{"x", 1}}, parse_in(m, "(P(x) | ~P(x))")));
    Formula s = parse_in(m, "forall x . K 1 P(x)");
    for (auto& p : m.points()) CHECK(point_truth(m, p.run, p.phase, s) == evaluate(m, p.run, p.phase, {}, s));
    CHECK(point_truth(m, m.run_index("r"), 0, parse_in(m, "P(x)")));
    CHECK_FALSE(point_truth(m, m.run_index("r1"), 0, parse_in(m, "P(x)")));
}

TEST_CASE("model truth: tautologies and errors") {
    Model m = fig1a();
    Verdict v = model_truth(m, parse_in(m, "(P(x) -> P(x))"));
    CHECK(v.truth);
    CHECK_FALSE(v.witness);
    CHECK_THROWS_AS(evaluate(m, 0, 0, {}, parse_in(m, "P(x)")), EvalError);
    CHECK_THROWS_AS(evaluate(m, 7, 0, {{"x", 0}}, parse_in(m, "P(x)")), EvalError);
}

TEST_CASE("Barcan and its converse hold on interpreted systems") {
    Rng rng(4);
    Formula bf = fml("((forall x . K 1 P(x)) -> K 1 forall x . P(x))", 2);
    Formula cbf = fml("((K 2 forall x . P(x)) -> forall x . K 2 P(x))", 2);
    for (int k = 0; k < 100; ++k) {
        Model m = random_model(small(Flavor::Qis, 2), {}, rng);
        REQUIRE(model_truth(m, bf).truth);
        REQUIRE(model_truth(m, cbf).truth);
    }
}

TEST_CASE("converse Barcan holds on mf-models") {
    Rng rng(5);
    Formula cbf = fml("((K 1 forall x . P(x)) -> forall x . K 1 P(x))");
    for (int k = 0; k < 150; ++k) REQUIRE(model_truth(random_model(small(Flavor::Mf), {}, rng), cbf).truth);
}

TEST_CASE("common knowledge is the limit of iterated E") {
    Rng rng(6);
    support::FormulaGen gen(8, {.agents = 2, .common = false, .constants = false});
    for (int k = 0; k < 60; ++k) {
        Model m = random_model(small(static_cast<Flavor>(k % 3), 2), {}, rng);
        Formula psi;
        do psi = gen(2);
        while (!free_variables(psi).empty() || !is_monodic(psi));
        Formula c = common(psi);
        std::vector<Formula> iter;
        Formula e = psi;
        for (int n = 0; n < m.state_count(); ++n) {
            e = everybody(2, e);
            iter.push_back(e);
        }
        Formula limit = conj_all(iter);
        for (auto& p : m.points()) REQUIRE(evaluate(m, p.run, p.phase, {}, c) == evaluate(m, p.run, p.phase, {}, limit));
    }
}

TEST_CASE("phase invariance") {
    Rng rng(7);
    support::FormulaGen gen(9, {.agents = 1, .constants = false});
    for (int k = 0; k < 60; ++k) {
        Model m = random_model(small(static_cast<Flavor>(k % 3)), {}, rng);
        Formula f;
        do f = gen(3);
        while (!is_monodic(f));
        auto fv = free_variables(f);
        std::vector<std::string> vars(fv.begin(), fv.end());
        for (auto& s : all_assignments(m, vars))
            for (int r = 0; r < static_cast<int>(m.runs.size()); ++r) {
                const LassoRun& run = m.runs[r];
                for (long long n = 0; n < run.phases(); ++n) {
                    long long later = n + static_cast<long long>(run.cycle.size()) * (1 + k % 3);
                    if (n < static_cast<long long>(run.prefix.size())) continue;
                    REQUIRE(evaluate(m, r, n, s, f) == evaluate(m, r, later, s, f));
                }
            }
    }
}

TEST_CASE("S5 laws hold on generated models") {
    Rng rng(10);
    support::FormulaGen gen(12, {.agents = 1, .constants = false});
    for (int k = 0; k < 80; ++k) {
        Model m = random_model(small(static_cast<Flavor>(k % 3)), {}, rng);
        Formula f;
        do f = gen(2);
        while (!is_monodic(f) || free_variables(f).size() > 1);
        for (auto name : {"T", "4", "5"}) {
            Formula inst = schema(name, f);
            INFO(to_string(inst));
            REQUIRE(model_truth(m, inst).truth);
        }
    }
}

TEST_CASE("validity probe: class-specific axioms") {
    Rng rng(12);
    Formula phi = fml("P(x)");
    Formula kt2 = schema("KT2", phi);
    ProbeReport a = validity_probe(small(Flavor::Qis), {kt2}, {.pr = true, .sync = true}, 100, rng);
    CHECK(a.models == 100);
    CHECK(a.failed == 0);
    Formula kt5 = schema("KT5", phi, nullptr, nullptr, 1, 2);
    ProbeReport b = validity_probe(small(Flavor::Qis, 2), {kt5}, {.shared = true}, 100, rng);
    CHECK(b.models == 100);
    CHECK(b.failed == 0);

    // KT4 on models without no learning: a failure shows up
    Formula kt4 = schema("KT4", phi);
    bool found = false;
    GenConfig cfg = small(Flavor::Kripke);
    for (int k = 0; k < 2000 && !found; ++k) {
        Model m = random_model(cfg, {}, rng);
        if (check_no_learning(m)) continue;
        found = probe_model(m, {kt4}).has_value();
    }
    CHECK(found);
}

TEST_CASE("all assignments are ordered by variable then domain") {
    Model m = fig1a();
    auto all = all_assignments(m, {"y", "x"});
    REQUIRE(all.size() == 4);
    CHECK(all[0] == Assignment{{"x", 0}, {"y", 0}});
    CHECK(all[1] == Assignment{{"x", 0}, {"y", 1}});
    CHECK(all[2] == Assignment{{"x", 1}, {"y", 0}});
}
