#include <doctest.h>

#include <algorithm>

#include "qistk/ktree.hpp"
#include "qistk/oracle.hpp"
#include "qistk/types.hpp"
#include "support.hpp"

using namespace qistk;
using support::fml;

namespace {

const char* kRequests = "forall y . C ((forall z . Av(y,z)) U (exists x . Req(x,y)))";

FormulaSet golden_type() {
    FormulaSet t;
    for (auto& l : support::lines_of(support::read_text(support::corpus("table4.golden")))) t.insert(fml(l, 2));
    return t;
}

// Maximal subsets of cl0: one of each formula/negation pair.
std::vector<FormulaSet> maximal_subsets(const Closure& cl) {
    std::vector<Formula> pos;
    for (auto& g : cl.cl0())
        if (g->op != Op::Not) pos.push_back(g);
    std::vector<FormulaSet> out;
    for (unsigned mask = 0; mask < (1u << pos.size()); ++mask) {
        FormulaSet s;
        for (std::size_t k = 0; k < pos.size(); ++k) s.insert(mask >> k & 1 ? pos[k] : negate(pos[k]));
        out.push_back(s);
    }
    return out;
}

TypeSet type_of(FormulaSet m, Index ix = {}) { return TypeSet{std::move(ix), std::move(m)}; }

OracleBudget quick() {
    OracleBudget b;
    b.seconds = 20;
    b.samples = 5000;
    return b;
}

}  // namespace

TEST_CASE("the table4.golden set is a type") {
    Closure cl(fml(kRequests, 2), 2, "y");
    auto v = coherence_check(golden_type(), cl, Index{});
    CHECK_MESSAGE(!v, (v ? v->describe() : ""));
}

TEST_CASE("coherence violations name their rule") {
    Closure cp(fml("p"), 1, "x");
    Formula p = fml("p");
    auto v = coherence_check({p, neg(p), next(p)}, cp, {});
    REQUIRE(v);
    CHECK(v->rule == "negation");
    auto out = coherence_check({p, next(p), fml("q")}, cp, {});
    REQUIRE(out);
    CHECK(out->rule == "closure");

    Closure cu(fml("(p U q)"), 1, "x");
    FormulaSet bad{fml("(p U q)"), fml("~p"), fml("~q"), fml("X (p U q)"), fml("X p"), fml("X q")};
    auto u = coherence_check(bad, cu, {});
    REQUIRE(u);
    CHECK(u->rule == "until");
}

TEST_CASE("type enumeration matches brute force") {
    for (auto text : {"p", "(p U q)", "K 1 p", "(X p & ~q)", "C (p | q)"}) {
        Closure cl(fml(text), 1, "x");
        EnumResult e = enumerate_types(cl, {});
        REQUIRE(e.complete);
        std::vector<TypeSet> want;
        for (std::size_t k = 0; k < e.types.size(); ++k) {
            CHECK(e.types[k].index.empty());
            if (k) CHECK(e.types[k - 1] < e.types[k]);  // sorted, no duplicates
        }
        for (auto& s : maximal_subsets(cl))
            if (!coherence_check(s, cl, {})) want.push_back(type_of(s));
        std::sort(want.begin(), want.end());
        INFO(std::string(text) << ": " << e.types.size() << " vs " << want.size());
        CHECK(e.types == want);
        CHECK(std::is_sorted(e.types.begin(), e.types.end()));
    }
}

TEST_CASE("type counts") {
    CHECK(enumerate_types(Closure(fml("p"), 1, "x"), {}).types.size() == 4);
    // pUq is fixed by q | (p & X pUq); five free bits remain
    Closure cu(fml("(p U q)"), 1, "x");
    auto ts = enumerate_types(cu, {}).types;
    CHECK(ts.size() == 32);
    Formula u = fml("(p U q)"), p = fml("p"), q = fml("q"), xu = next(u);
    for (auto& t : ts) {
        bool expect = *holds_in(t.members, q) || (*holds_in(t.members, p) && *holds_in(t.members, xu));
        CHECK(*holds_in(t.members, u) == expect);
    }
}

TEST_CASE("the golden type is enumerated") {
    Closure cl(fml(kRequests, 2), 2, "y");
    EnumResult e = enumerate_types(cl, {});
    REQUIRE(e.complete);
    TypeSet t4 = type_of(golden_type());
    CHECK(std::find(e.types.begin(), e.types.end(), t4) != e.types.end());
}

TEST_CASE("alpha and beta are built from type formulas") {
    Closure cl(fml("forall x . (P(x) U q)"), 1, "x");
    auto ts = enumerate_types(cl, {}).types;
    REQUIRE(ts.size() >= 2);
    StateCandidate c{{}, {ts[0], ts[1]}, {}};
    c.normalise();
    Formula a = alpha_of(c, "x");
    CHECK(free_variables(a).empty());
    QPoint pt{c, 1};
    Formula b = beta_of(pt, "x");
    CHECK(free_variables(b) == std::set<std::string>{"x"});
    Formula tf = type_formula(ts[0], "x", Term::cst("d"));
    CHECK(free_variables(tf).empty());
    CHECK(constants_of(tf) == std::set<std::string>{"d"});
}

TEST_CASE("consistency oracle verdicts") {
    CHECK(consistent(fml("(p & ~p)"), quick()).verdict == Consistency::No);
    CHECK(consistent(fml("(K 1 p & Kd 1 ~p)"), quick()).verdict == Consistency::No);
    OracleResult y = consistent(fml("(p U q)"), quick());
    CHECK(y.verdict == Consistency::Yes);
    CHECK(y.witness.has_value());

    Closure cl(fml("(p U q)"), 1, "x");
    for (auto& t : enumerate_types(cl, {}).types) {
        StateCandidate c{{}, {t}, {}};
        OracleResult r = consistent(alpha_of(c, "x"), quick());
        if (r.verdict != Consistency::Yes) continue;
        REQUIRE(r.witness);
        CHECK(evaluate(*r.witness, r.run, r.time, r.sigma, alpha_of(c, "x")));
    }
}

TEST_CASE("next-suitability follows the X members") {
    Closure cl(fml(kRequests, 2), 2, "y");
    auto ts = enumerate_types(cl, {}).types;
    TypeSet t4 = type_of(golden_type());
    Formula phi = cl.phi();
    int succ = 0;
    for (auto& u : ts)
        if (next_suitable(t4, u, cl)) {
            ++succ;
            CHECK(u.contains(negate(phi)));
            CHECK(u.contains(fml("forall z . Av(y,z)", 2)));
        }
    CHECK(succ > 0);
    CHECK_FALSE(next_suitable(t4, t4, cl));
}

TEST_CASE("epistemic suitability is an equivalence") {
    Closure cl(fml("(K 1 p | K 2 (q & K 1 p))", 2), 2, "x");
    auto ts = enumerate_types(cl, {}).types;
    std::size_t n = ts.size();
    Formula k1 = fml("K 1 p", 2);
    for (int i = 1; i <= 2; ++i) {
        std::vector<std::vector<char>> rel(n, std::vector<char>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) rel[a][b] = epi_suitable(ts[a], ts[b], i, cl);
        bool refl = true, sym = true, trans = true, sep = true;
        for (std::size_t a = 0; a < n; ++a) {
            refl = refl && rel[a][a];
            for (std::size_t b = 0; b < n; ++b) {
                sym = sym && rel[a][b] == rel[b][a];
                if (i == 1 && rel[a][b]) sep = sep && *holds_in(ts[a].members, k1) == *holds_in(ts[b].members, k1);
                if (rel[a][b])
                    for (std::size_t c = 0; c < n; ++c) trans = trans && (!rel[b][c] || rel[a][c]);
            }
        }
        CHECK(refl);
        CHECK(sym);
        CHECK(trans);
        CHECK(sep);
    }
}

TEST_CASE("concordance and fusion") {
    Closure cl(fml("K 1 X p"), 1, "x");
    auto ts = enumerate_types(cl, {}).types;
    std::vector<TypeSet> a{ts[0]}, b{ts[0]};
    CHECK(concordant(a, b, 1, cl));
    for (auto& s : ts)
        for (auto& t : ts) {
            bool rel = epi_suitable(s, t, 1, cl);
            CHECK(concordant({s}, {t}, 1, cl) == rel);
        }
    std::vector<int> l{1, 2, 3}, m{3, 4};
    CHECK(fuse(l, m) == std::vector<int>{1, 2, 3, 4});
    CHECK_THROWS_AS(fuse(l, std::vector<int>{4}), std::invalid_argument);
}

TEST_CASE("phi conjunction collects suitable types") {
    Closure cl(fml("K 1 p"), 1, "x");
    auto ts = enumerate_types(cl, {}).types;
    for (auto& t : ts) {
        Formula f = phi_conjunction(t, 1, ts, cl);
        int n = 0;
        for (auto& u : ts) n += epi_suitable(t, u, 1, cl);
        CHECK(n >= 1);
        CHECK(free_variables(f).size() <= 1);
    }
}

TEST_CASE("k-trees") {
    Closure cl(fml("K 1 p"), 1, "x");
    auto root_types = enumerate_types(cl, {}).types;
    auto up_types = enumerate_types(cl, {1}).types;
    REQUIRE(!root_types.empty());
    REQUIRE(!up_types.empty());
    std::vector<TypeSet> universe = root_types;
    universe.insert(universe.end(), up_types.begin(), up_types.end());

    KTree single{0, {StateCandidate{{}, {root_types[0]}, {}}}};
    CHECK(validate_ktree(single, cl, universe).ok);

    KTree missing{1, {StateCandidate{{}, {root_types[0]}, {}}}};
    TreeCheck r = validate_ktree(missing, cl, universe);
    CHECK_FALSE(r.ok);
    CHECK(r.clause == "witness");

    KTree deep{2, {StateCandidate{{}, {root_types[0]}, {}}}};
    CHECK_THROWS_AS(validate_ktree(deep, cl, universe), TreeError);
    KTree two_roots{0, {StateCandidate{{}, {root_types[0]}, {}}, StateCandidate{{}, {root_types[1]}, {}}}};
    CHECK_THROWS_AS(validate_ktree(two_roots, cl, universe), TreeError);
}

TEST_CASE("synchronous tree steps have length two") {
    Closure cl(fml("p"), 1, "x");
    auto ts = enumerate_types(cl, {}).types;
    // a type whose X part agrees with itself is a fixpoint of next-suitability
    const TypeSet* fix = nullptr;
    for (auto& t : ts)
        if (next_suitable(t, t, cl)) fix = &t;
    REQUIRE(fix);
    QPoint pt{StateCandidate{{}, {*fix}, {}}, 0};
    PointTree a{0, {pt}}, b{0, {pt}};
    std::vector<std::vector<NodeRef>> two{{{0, 0}, {1, 0}}};
    CHECK(tree_step_check(a, b, two, StepMode::Sync, cl, "").ok);
    CHECK(tree_step_check(a, b, two, StepMode::Plain, cl, "").ok);
    std::vector<std::vector<NodeRef>> three{{{0, 0}, {0, 0}, {1, 0}}};
    CHECK(tree_step_check(a, b, three, StepMode::Plain, cl, "").ok);
    TreeCheck s = tree_step_check(a, b, three, StepMode::Sync, cl, "");
    CHECK_FALSE(s.ok);
    CHECK(s.clause == "sync");
}
