// Quasimodels over lasso-shaped candidate sequences: representation, file
// format, validation and extraction of a witness mf-model.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qistk/evaluator.hpp"
#include "qistk/formula.hpp"
#include "qistk/model.hpp"
#include "qistk/syntax.hpp"
#include "qistk/types.hpp"

namespace qistk {

class QuasimodelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class QFlavor { Plain, Plus };

struct QSequence {
    std::string id;
    std::vector<int> prefix;  // candidate indices; -1 marks an undefined (padding) point
    std::vector<int> cycle;   // candidate indices, never -1

    int phases() const { return static_cast<int>(prefix.size() + cycle.size()); }
    int next_phase(int p) const;
    int at(int p) const;  // candidate index or -1
    int padding() const;  // number of leading undefined points
};

struct QCandidate {
    std::string name;
    Index index;
    std::vector<int> types;              // ids into Quasimodel::types, distinct
    std::map<std::string, int> con;      // constant -> type id
};

struct QObject {
    std::string name;
    std::map<std::pair<int, int>, int> at;  // (sequence, phase) -> type id
};

struct Quasimodel {
    Formula phi;
    Signature sig;
    std::string var = "x";  // closure variable of the types
    QFlavor flavor = QFlavor::Plain;
    std::set<std::string> tags;  // subset of {pr, nl, sync, uis}

    std::vector<TypeSet> types;
    std::vector<std::string> type_names;
    std::vector<QCandidate> candidates;
    std::vector<QSequence> sequences;
    std::vector<QObject> objects;
    // rel[agent-1][object][point id] = class id (points of every phase, see point_id)
    std::vector<std::vector<std::vector<int>>> rel;
    std::optional<std::pair<int, int>> designated;  // (sequence, phase)

    int agents() const { return sig.agents; }
    int point_count() const;
    int point_id(int seq, int phase) const;
    std::pair<int, int> point_of(int id) const;
    bool defined(int seq, int phase) const { return sequences[seq].at(phase) >= 0; }
    StateCandidate state_candidate(int cand) const;
    int object_type(int obj, int seq, int phase) const;  // -1 when missing
    int type_id(const TypeSet& t);                         // intern
    void singleton_relations();                            // all relations := identity
};

Quasimodel load_quasimodel(const std::string& text);
Quasimodel load_quasimodel_file(const std::string& path);
std::string save_quasimodel(const Quasimodel& q);

struct QViolation {
    std::string clause;  // frame.*, candidate, object.1-5, object.4+, quasimodel.1-5, derived.K, derived.C, class.*
    std::string detail;
};

struct QValidation {
    bool ok = true;
    std::vector<QViolation> violations;
};

// The ordinary mf-model relations of a quasimodel: one state per point, the
// relation of agent i for object o is rel[i-1][o]. Used for the class checks.
// A sync-tagged quasimodel reads phases as times (clock model).
Model relation_model(const Quasimodel& q);

QValidation validate_quasimodel(const Quasimodel& q, std::size_t max_violations = 64);

struct AcceptReport {
    bool ok = true;
    int step = -1;
    Formula formula;
    std::string constant;  // non-empty for the indexed-type variant
    std::string message;
};
// Every until formula of every type at every phase is realised along a chain
// of suitable types through the lasso; constants follow their indexed types.
AcceptReport acceptable_sequence_check(const std::vector<StateCandidate>& prefix,
                                       const std::vector<StateCandidate>& cycle, const Closure& cl);

struct Extraction {
    Model model;
    int run = 0;
    long long time = 0;
    Assignment sigma;
    int kappa = 1;
};

// kappa <= 0 picks min(8, number of distinct types in q).
Extraction extract_mf_model(const Quasimodel& q, int kappa = 0);

}  // namespace qistk
