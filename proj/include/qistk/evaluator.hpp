// Satisfaction on finite lasso models (qis, kripke and mf flavors).
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qistk/formula.hpp"
#include "qistk/model.hpp"

namespace qistk {

using Assignment = std::map<std::string, int>;  // variable -> individual index

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Witness {
    int run = 0;
    int phase = 0;
    Assignment sigma;
};

struct Verdict {
    bool truth = true;
    std::optional<Witness> witness;
};

// Computes extensions (the set of points where a formula holds) bottom-up and
// caches them per (formula, values of its free variables).
class Evaluator {
public:
    explicit Evaluator(const Model& m);

    bool eval(const Point& p, const Assignment& sigma, const Formula& f);
    bool eval_at(int run, long long n, const Assignment& sigma, const Formula& f);
    // Truth value at every point, indexed like point_ids().
    const std::vector<char>& extension(const Formula& f, const Assignment& sigma);

    const std::vector<Point>& point_list() const { return pts_; }
    int point_id(const Point& p) const;
    const Model& model() const { return m_; }

private:
    using Key = std::pair<Formula, std::vector<int>>;
    struct KeyLess {
        bool operator()(const Key& x, const Key& y) const;
    };

    const std::vector<char>& compute(const Formula& f, const Assignment& sigma);
    std::vector<char> compute_uncached(const Formula& f, const Assignment& sigma);
    // groups[agent-1][individual] : point -> class id (respecting the clock)
    const std::vector<int>& groups(int agent, int individual);
    const std::vector<int>& components(int individual);
    int term_value(const Term& t, const Assignment& sigma) const;

    const Model& m_;
    std::vector<Point> pts_;
    std::vector<int> offset_;  // first point id of each run
    std::vector<int> succ_;
    std::vector<int> state_;
    std::map<Key, std::vector<char>, KeyLess> memo_;
    std::map<std::pair<int, int>, std::vector<int>> groups_;
    std::map<int, std::vector<int>> comps_;
};

bool evaluate(const Model& m, int run, long long n, const Assignment& sigma, const Formula& f);
bool point_truth(const Model& m, int run, long long n, const Formula& f);
Verdict model_truth(const Model& m, const Formula& f);
std::optional<Witness> find_counterexample(const Model& m, const Formula& f);

// All assignments of `vars` into the domain, lexicographic by variable name
// then domain order.
std::vector<Assignment> all_assignments(const Model& m, const std::vector<std::string>& vars);

}  // namespace qistk
