// Finite models over ultimately periodic runs: quantified interpreted systems,
// Kripke models and mf-models (relations indexed by individuals).
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qistk/formula.hpp"

namespace qistk {

enum class Flavor { Qis, Kripke, Mf };
std::string to_string(Flavor f);

struct LassoRun {
    std::string id;
    std::vector<int> prefix;  // state indices
    std::vector<int> cycle;   // non-empty

    int phases() const { return static_cast<int>(prefix.size() + cycle.size()); }
    int phase(long long n) const;
    int next_phase(int p) const;
    int state_at_phase(int p) const;
    int state_at(long long n) const { return state_at_phase(phase(n)); }
};

struct Point {
    int run = 0;
    int phase = 0;
    bool operator==(const Point& o) const { return run == o.run && phase == o.phase; }
    bool operator<(const Point& o) const { return run != o.run ? run < o.run : phase < o.phase; }
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Tuple = std::vector<int>;  // individuals by index

struct Model {
    Flavor flavor = Flavor::Kripke;
    Signature sig;
    std::vector<std::string> domain;
    std::map<std::string, int> constants;  // rigid: constant -> individual

    std::vector<std::string> states;
    std::vector<std::string> env;                  // qis only
    std::vector<std::vector<std::string>> locals;  // qis only: [state][agent-1]

    std::vector<LassoRun> runs;

    // Each local state implicitly carries the global clock: related points
    // must have equal time. Runs are then normalised to a common lasso shape.
    bool clock = false;

    // part[agent-1][individual or 0][state] = class id
    std::vector<std::vector<std::vector<int>>> part;

    // interp[state][predicate] = true tuples
    std::vector<std::map<std::string, std::set<Tuple>>> interp;

    int agents() const { return sig.agents; }
    int individuals() const { return static_cast<int>(domain.size()); }
    int state_count() const { return static_cast<int>(states.size()); }
    int run_index(const std::string& id) const;
    int individual_index(const std::string& name) const;
    int state_index(const std::string& name) const;

    int state_of(const Point& p) const { return runs[p.run].state_at_phase(p.phase); }
    Point successor(const Point& p) const { return {p.run, runs[p.run].next_phase(p.phase)}; }
    std::vector<Point> points() const;

    // State-level relation; `individual` is ignored unless flavor is mf.
    bool state_related(int agent, int individual, int s1, int s2) const;
    // Point-level relation (adds the clock constraint when present).
    bool related(int agent, int individual, const Point& p1, const Point& p2) const;
    bool related_at(int agent, int individual, int r1, long long n1, int r2, long long n2) const;

    // Reachability over the union of all agents' relations (for one individual).
    bool reachable(int individual, const Point& p1, const Point& p2) const;
    // All points reachable from p (including p).
    std::vector<Point> reachable_from(int individual, const Point& p) const;
    std::vector<Point> related_points(int agent, int individual, const Point& p) const;

    bool holds(int state, const std::string& pred, const Tuple& t) const;

    void validate() const;
    void normalise_clock();  // unroll runs to a common prefix / cycle length
};

Model load_model(const std::string& text);
Model load_model_file(const std::string& path);
std::string save_model(const Model& m);

// class predicates
struct WindowConfig {
    int cap = 4096;
    int scale = 1;  // multiplies the default bound (before the cap)
};
int window_bound(const Model& m, const WindowConfig& cfg = {});

bool check_synchronicity(const Model& m, const WindowConfig& cfg = {});
bool check_perfect_recall(const Model& m, int agent, const WindowConfig& cfg = {});
bool check_perfect_recall(const Model& m, const WindowConfig& cfg = {});
bool check_no_learning(const Model& m, int agent, const WindowConfig& cfg = {});
bool check_no_learning(const Model& m, const WindowConfig& cfg = {});
bool check_unique_initial_state(const Model& m);
bool check_shared_knowledge(const Model& m);

struct ClassReport {
    bool sync = false, pr = false, nl = false, uis = false, shared = false;
    int window = 0;
};
ClassReport classify(const Model& m, const WindowConfig& cfg = {});

Model g_transform(const Model& m);
Model kripke_to_mf(const Model& m);

}  // namespace qistk
