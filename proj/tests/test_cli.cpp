#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using qistk::cli::CommandResult;
using qistk::cli::run;

namespace {

std::string corpus(const std::string& n) { return support::corpus(n); }

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qistk_test_" + name)).string();
}

nlohmann::json json_of(const CommandResult& r) {
    REQUIRE_FALSE(r.json.empty());
    return nlohmann::json::parse(r.json);
}

}  // namespace

TEST_CASE("eval on fig1a") {
    CommandResult r = run({"eval", "--model", corpus("fig1a.qis"), "--formula", "forall x . K 1 P(x)", "--run", "r",
                           "--step", "0"});
    CHECK(r.code == 0);
    CHECK(r.text.rfind("true", 0) == 0);
    CommandResult f = run({"eval", "--model", corpus("fig1a.qis"), "--formula", "K 1 forall x . P(x)", "--run", "r",
                           "--step", "0"});
    CHECK(f.code == 1);
    CHECK(f.text.rfind("false", 0) == 0);
}

TEST_CASE("classify reports no unique initial state") {
    CommandResult r = run({"classify", "--model", corpus("fig1a.qis")});
    CHECK(r.code == 0);
    CHECK(r.text.find("uis=false") != std::string::npos);
    auto j = json_of(run({"classify", "--model", corpus("fig1a.qis"), "--json"}));
    CHECK(j["uis"] == false);
}

TEST_CASE("check-monodic") {
    CommandResult r =
        run({"check-monodic", "--formula", "forall x . K 1 (Process(x) -> forall y . F Access(x,y))"});
    CHECK(r.code == 1);
    CHECK(r.text.rfind("non-monodic", 0) == 0);
    CommandResult ok = run({"check-monodic", "--formula", "forall x . K 1 P(x)"});
    CHECK(ok.code == 0);
    CHECK(ok.text.rfind("monodic", 0) == 0);
}

TEST_CASE("json output carries the exit code") {
    for (auto args : std::vector<std::vector<std::string>>{
             {"parse", "-f", "(p U q)", "--json"},
             {"check-monodic", "-f", "forall x . K 1 (P(x) -> forall y . R(x,y))", "--json"},
             {"truth", "--model", corpus("fig1b.qis"), "-f",
              "(K 1 (Q(x) -> exists x . Q(x)) -> (K 1 Q(x) -> K 1 exists x . Q(x)))", "--json"},
             {"prove-check", "-d", corpus("bf-next.drv"), "--json"},
         }) {
        CommandResult r = run(args);
        auto j = json_of(r);
        CHECK(j["exit"] == r.code);
    }
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"eval", "--model", corpus("fig1a.qis")}).code == 2);
    CHECK(run({"parse", "-f", "(p &"}).code == 2);
    CHECK(run({"eval", "--model", "/nonexistent.qis", "-f", "p"}).code == 2);
    CHECK(run({"probe", "-f", "p", "--domain-max", "0"}).code == 2);
    CHECK(run({"parse", "--help"}).code == 0);
}

TEST_CASE("proof checking") {
    for (auto f : {"bf-next.drv", "bf-know.drv"}) {
        CommandResult r = run({"prove-check", "-d", corpus(f)});
        CHECK(r.code == 0);
        CHECK(r.text.rfind("accepted", 0) == 0);
    }
}

TEST_CASE("probe is reproducible") {
    std::vector<std::string> args{"probe", "-f", "(K 1 X P(x) -> X K 1 P(x))", "--class", "pr,sync", "--models", "40",
                                  "--seed", "9"};
    CommandResult a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.text == b.text);
    args.push_back("--json");
    CHECK(run(args).json == run(args).json);
}

TEST_CASE("a counterexample makes probe exit 1") {
    CommandResult r = run({"probe", "-f", "(K 1 p -> X K 1 p)", "--models", "200", "--seed", "2"});
    CHECK(r.code == 1);
}

TEST_CASE("quasimodel commands") {
    std::string out = tmp("puq.qm");
    CommandResult s = run({"qm-sat", "-f", "(p U q)", "-o", out});
    CHECK(s.code == 0);
    CHECK(s.text.rfind("sat", 0) == 0);
    CHECK(run({"qm-validate", "--quasimodel", out}).code == 0);
    CommandResult e = run({"qm-extract", "--quasimodel", out});
    CHECK(e.code == 0);
    CHECK(e.text.find("phi holds") != std::string::npos);
    std::remove(out.c_str());

    CommandResult u = run({"qm-sat", "-f", "(p & X ~p)", "--tags", "sync,uis", "--time-budget", "20"});
    CHECK(u.code == 3);
}

TEST_CASE("closure and transforms") {
    CommandResult c = run({"closure", "--file", corpus("formula1.fml"), "--agents", "2", "--kind", "sub-x", "--var", "y"});
    CHECK(c.code == 0);
    auto want = support::lines_of(support::read_text(corpus("table3.golden")));
    auto got = support::lines_of(c.text);
    CHECK(got.size() >= want.size());
    std::string k = tmp("k.qis"), g = tmp("g.qis"), m = tmp("m.qis");
    {
        std::ofstream out(k);
        out << "(model (flavor kripke) (agents 1) (domain d) (preds (p 0))\n"
               "  (states s0 s1 s2)\n"
               "  (runs (r0 (prefix s0) (cycle s1)) (r1 (prefix s0) (cycle s2)))\n"
               "  (epistemic (agent 1) (partition (s0) (s1 s2)))\n"
               "  (interp (p (at s1 ()))))\n";
    }
    CHECK(run({"transform-g", "--model", k, "-o", g}).code == 0);
    CHECK(run({"to-mf", "--model", k, "-o", m}).code == 0);
    for (auto& f : {k, g, m}) {
        CHECK(run({"eval", "--model", f, "-f", "X ~K 1 p", "--run", "r0", "--step", "0"}).code == 0);
        CHECK(run({"eval", "--model", f, "-f", "X p", "--run", "r1", "--step", "0"}).code == 1);
    }
    CHECK(run({"transform-g", "--model", corpus("fig1a.qis")}).code == 2);
    for (auto& f : {k, g, m}) std::remove(f.c_str());
}
