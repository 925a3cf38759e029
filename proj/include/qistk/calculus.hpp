// Hilbert calculi QKT_m / QKTC_m with the knowledge-time interaction axioms,
// schema instantiation and recognition, and a derivation checker.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qistk/formula.hpp"

namespace qistk {

class CalculusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemSpec {
    bool common = false;    // QKTC instead of QKT
    std::set<int> kt;       // subset of {1,...,5}
    int agents = 1;

    std::string name() const;  // e.g. "QKTC^{2,3}_2"
    bool allows(const std::string& schema) const;
};
// Accepts "QKT", "QKTC", "QKT^2,3", "QKTC^{1,4,5}"; agent count given separately.
SystemSpec parse_system(const std::string& text, int agents);

struct Bindings {
    std::map<std::string, Formula> formulas;  // phi, psi, chi
    std::map<std::string, int> agents;        // i, j
    std::map<std::string, std::string> vars;  // x
    std::map<std::string, Term> terms;        // t
};

enum class SchemaKind { Axiom, Rule };

struct SchemaInfo {
    std::string name;
    SchemaKind kind;
    int premises;        // rules only
    std::string display; // human-readable template
};

const std::vector<SchemaInfo>& schema_catalogue();
const SchemaInfo* find_schema(const std::string& name);

struct Instance {
    std::vector<Formula> premises;
    Formula conclusion;
};

// Throws CalculusError on a missing binding, a side-condition violation or a
// non-monodic instance.
Instance instantiate_schema(const std::string& name, const Bindings& b, int agents);

struct Recognition {
    std::string schema;
    Bindings bindings;
};
// First axiom schema (fixed order, Taut last) that f instantiates in sys.
std::optional<Recognition> recognize_axiom(const Formula& f, const SystemSpec& sys);

enum class TautResult { Yes, No, TooLarge };
TautResult is_tautology(const Formula& f, int max_letters = 20);

// True when `conclusion` follows from `premises` by the named rule.
bool rule_applies(const std::string& rule, const std::vector<Formula>& premises, const Formula& conclusion,
                  const SystemSpec& sys);

struct DerivationLine {
    int number = 0;
    int source_line = 0;  // line in the file
    std::string text;
    Formula formula;
    bool is_axiom = false;
    std::string name;              // axiom or rule name
    std::vector<int> from;         // rule premises (line numbers)
    std::optional<Bindings> given; // explicit axiom bindings
};

struct Derivation {
    std::vector<DerivationLine> lines;
    Signature sig;
    std::optional<std::string> system;  // from a "system:" header
};

// Header lines: "agents: m", "system: QKT^{...}", "constants: c d". '#' comments.
Derivation parse_derivation(const std::string& text);
Derivation load_derivation_file(const std::string& path);

struct CheckResult {
    bool ok = true;
    int error_line = 0;  // derivation line number of the first error
    std::string message;
};
CheckResult check_derivation(const Derivation& d, const SystemSpec& sys);

// Axiom instances over a formula pool: unary schemas over the whole pool,
// binary over all pairs, ternary over consecutive triples. Non-monodic or
// ill-formed instances are skipped.
std::vector<std::pair<std::string, Formula>> axiom_instances(const SystemSpec& sys, const std::vector<Formula>& pool,
                                                            const std::vector<std::string>& schemas = {});

}  // namespace qistk
