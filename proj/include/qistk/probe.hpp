// Validity probing of formulas over randomly generated models of a class.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qistk/evaluator.hpp"
#include "qistk/generate.hpp"

namespace qistk {

struct ProbeFailure {
    Model model;
    Formula formula;
    Witness witness;
};

struct ProbeReport {
    int models = 0;       // models checked
    int tries = 0;        // models generated (including rejected ones)
    long long checks = 0; // formula/model pairs
    long long failed = 0;
    bool exhausted = false;  // could not find enough models of the class
    std::optional<ProbeFailure> first;
};

// Generator predicates/constants are extended with those used by the formulas.
ProbeReport validity_probe(GenConfig cfg, const std::vector<Formula>& formulas, const ClassReq& req,
                           int models, Rng& rng, int max_tries_per_model = 20000);

// Checks formulas on a single model; returns the first failure.
std::optional<ProbeFailure> probe_model(const Model& m, const std::vector<Formula>& formulas);

}  // namespace qistk
