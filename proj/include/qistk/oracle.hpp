// Bounded consistency oracle: a refutation tier (local Hintikka propagation)
// and a confirmation tier (seeded sampling of small models).
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qistk/evaluator.hpp"
#include "qistk/formula.hpp"
#include "qistk/model.hpp"

namespace qistk {

struct OracleBudget {
    enum class Tier { Hintikka, BoundedSemantic };
    Tier tier = Tier::BoundedSemantic;
    int domain_max = 2;   // d: individuals (oracle) / objects (search)
    int states_max = 3;   // w: states (oracle) / runs (search)
    int prefix_max = 1;   // p
    int cycle_max = 2;    // c
    double seconds = 60;  // wall-clock budget
    long long samples = 20000;   // models tried by the semantic tier
    long long conflicts = 200000;  // per SAT call
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument on non-positive bounds
};

// Overrides fields from QISTK_DOMAIN_MAX, QISTK_STATES_MAX, QISTK_PREFIX_MAX,
// QISTK_CYCLE_MAX, QISTK_TIME_BUDGET, QISTK_SEED when set.
void apply_env(OracleBudget& b);

enum class Consistency { Yes, No, Unknown };
std::string to_string(Consistency v);
std::string to_string(OracleBudget::Tier t);

struct OracleResult {
    Consistency verdict = Consistency::Unknown;
    OracleBudget::Tier tier = OracleBudget::Tier::Hintikka;
    std::optional<Model> witness;  // Yes from the semantic tier
    int run = 0;
    long long time = 0;
    Assignment sigma;
    std::string note;
};

// gamma may have at most one free variable; its agents are those it mentions
// (at least `agents`).
OracleResult consistent(const Formula& gamma, const OracleBudget& budget, int agents = 1);

}  // namespace qistk
