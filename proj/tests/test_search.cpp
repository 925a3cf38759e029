#include <doctest.h>

#include "qistk/search.hpp"
#include "support.hpp"

using namespace qistk;

namespace {

struct Case {
    Case(std::string t, int a = 1, std::set<std::string> c = {}, std::set<std::string> g = {})
        : text(std::move(t)), agents(a), constants(std::move(c)), tags(std::move(g)) {}
    std::string text;
    int agents;
    std::set<std::string> constants;
    std::set<std::string> tags;
};

Signature sig_for(const Case& c) {
    Signature s;
    s.agents = c.agents;
    for (auto& k : c.constants) s.declare_constant(k);
    return s;
}

OracleBudget budget() {
    OracleBudget b;
    b.seconds = 60;
    return b;
}

void check_sat(const Case& c) {
    Signature sig = sig_for(c);
    Formula phi = parse_formula_infer(c.text, sig);
    SearchResult r = bounded_sat_search(phi, sig, c.tags, budget());
    INFO(c.text << " " << r.note);
    REQUIRE(r.sat);
    REQUIRE(r.quasimodel);
    const Quasimodel& q = *r.quasimodel;
    QValidation v = validate_quasimodel(q);
    CHECK_MESSAGE(v.ok, (v.ok ? "" : v.violations[0].clause + ": " + v.violations[0].detail));
    for (auto& t : c.tags) CHECK(q.tags.count(t));
    Extraction e = extract_mf_model(q);
    CHECK(evaluate(e.model, e.run, e.time, e.sigma, phi));

    Model rm = relation_model(q);
    for (const Model* m : {&e.model, &rm}) {
        if (c.tags.count("sync")) CHECK(check_synchronicity(*m));
        if (c.tags.count("pr")) CHECK(check_perfect_recall(*m));
        if (c.tags.count("nl")) CHECK(check_no_learning(*m));
        if (c.tags.count("uis")) CHECK(check_unique_initial_state(*m));
    }
}

}  // namespace

TEST_CASE("satisfiable formulas are found") {
    std::vector<Case> cases{
        {"(p U q)"},
        {"(p & X ~p)"},
        {"K 1 p"},
        {"(~K 1 p & p)"},
        {"C p", 2},
        {"(exists x . P(x) & exists x . ~P(x))"},
        {"(K 1 X p & ~p)"},
        {"(G F p & G F ~p)"},
        {"forall x . (P(x) U Q(x))"},
        {"(K 1 p & ~K 2 p)", 2},
        {"(P(c) & ~K 1 P(c))", 1, {"c"}},
    };
    for (auto& c : cases) check_sat(c);
}

TEST_CASE("the request formula is satisfiable") {
    auto lines = support::lines_of(support::read_text(support::corpus("formula1.fml")));
    check_sat({lines.at(0), 2});
}

TEST_CASE("the Barcan failure has a quasimodel") {
    check_sat({"(forall x . K 1 P(x) & ~K 1 forall x . P(x))"});
}

TEST_CASE("class tags are honoured") {
    check_sat({"(K 1 p & ~K 2 p)", 2, {}, {"pr"}});
    check_sat({"(K 1 p & ~K 2 p)", 2, {}, {"nl"}});
    check_sat({"(p & X ~p)", 1, {}, {"sync"}});
    check_sat({"K 1 p", 1, {}, {"sync", "uis"}});
}

TEST_CASE("contradictions are never reported satisfiable") {
    OracleBudget b = budget();
    b.seconds = 10;
    b.domain_max = 1;
    b.states_max = 2;
    for (auto text : {"(p & ~p)", "(K 1 p & ~p)", "(G p & F ~p)", "(C p & ~K 1 p)"}) {
        Signature sig;
        Formula phi = parse_formula_infer(text, sig);
        SearchResult r = bounded_sat_search(phi, sig, {}, b);
        INFO(text);
        CHECK_FALSE(r.sat);
        CHECK_FALSE(r.quasimodel);
    }
}

TEST_CASE("search is deterministic") {
    Signature sig;
    sig.agents = 2;
    Formula phi = parse_formula_infer("(K 1 p & ~K 2 p)", sig);
    auto a = bounded_sat_search(phi, sig, {}, budget());
    auto b = bounded_sat_search(phi, sig, {}, budget());
    REQUIRE(a.quasimodel);
    REQUIRE(b.quasimodel);
    CHECK(save_quasimodel(*a.quasimodel) == save_quasimodel(*b.quasimodel));
    CHECK(a.shape.describe() == b.shape.describe());
}

TEST_CASE("single shapes") {
    Signature sig;
    Formula phi = parse_formula_infer("(p & X ~p)", sig);
    CHECK_FALSE(search_shape(phi, sig, {}, {1, 1, 0, 1}, 100000));
    auto q = search_shape(phi, sig, {}, {1, 1, 0, 2}, 100000);
    REQUIRE(q);
    CHECK(validate_quasimodel(*q).ok);
}
