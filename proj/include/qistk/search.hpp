// Bounded quasimodel search: a fixed number of objects, runs and a common
// lasso shape are encoded propositionally, solved, decoded into a
// quasimodel and checked by the validator.
#pragma once

#include <optional>
#include <set>
#include <string>

#include "qistk/oracle.hpp"
#include "qistk/quasimodel.hpp"

namespace qistk {

struct SearchShape {
    int objects = 1, runs = 1, prefix = 0, cycle = 1;
    std::string describe() const;
};

struct SearchResult {
    bool sat = false;  // otherwise unknown; the search never claims unsat
    std::optional<Quasimodel> quasimodel;
    SearchShape shape;
    int shapes_tried = 0;
    bool budget_exhausted = false;
    std::string note;
};

// Tags are a subset of {pr, nl, sync, uis}.
SearchResult bounded_sat_search(const Formula& phi, const Signature& sig, const std::set<std::string>& tags,
                                const OracleBudget& budget);

// One shape only; nullopt when the encoding is unsatisfiable or out of budget.
std::optional<Quasimodel> search_shape(const Formula& phi, const Signature& sig, const std::set<std::string>& tags,
                                       const SearchShape& shape, long long conflicts, bool* exhausted = nullptr);

}  // namespace qistk
