// Random finite lasso models with optional class constraints.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qistk/model.hpp"

namespace qistk {

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi], independent of the standard library's distributions.
int uniform(Rng& rng, int lo, int hi);

struct GenConfig {
    Flavor flavor = Flavor::Qis;
    int agents = 1;
    int domain_min = 1, domain_max = 3;
    int states_max = 4;
    int runs_max = 3;
    int prefix_max = 1;
    int cycle_max = 2;
    int locals_max = 3;  // local-state alphabet size per agent (qis)
    std::map<std::string, int> predicates{{"P", 1}, {"p", 0}};
    std::vector<std::string> constants;
};

struct ClassReq {
    bool pr = false, nl = false, sync = false, uis = false, shared = false;
};

std::string to_string(const ClassReq& r);
bool satisfies(const Model& m, const ClassReq& req);

Model random_model(const GenConfig& cfg, const ClassReq& req, Rng& rng);

struct GenResult {
    std::optional<Model> model;
    int tries = 0;
};
// Rejection sampling on the class predicates.
GenResult generate_in_class(const GenConfig& cfg, const ClassReq& req, Rng& rng, int max_tries);

}  // namespace qistk
