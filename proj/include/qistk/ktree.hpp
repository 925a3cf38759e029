// k-trees of state candidates and of points: structural validation, the
// step relation between trees of points, and tree formulas.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qistk/types.hpp"

namespace qistk {

class TreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KTree {
    int k = 0;
    std::vector<StateCandidate> nodes;
};

struct PointTree {
    int k = 0;
    std::vector<QPoint> nodes;
};

struct TreeCheck {
    bool ok = true;
    std::string clause;  // "root", "witness", "parent", "candidate", "step.1" .. "step.3", "sync"
    std::string detail;
};

// `universe` supplies the types that the witness clause quantifies over
// (types of other indexes are ignored). Throws TreeError on a malformed tree:
// no or several roots, an index deeper than k or than the alternation depth,
// or an index whose parent index has no node.
TreeCheck validate_ktree(const KTree& tr, const Closure& cl, const std::vector<TypeSet>& universe);
TreeCheck validate_point_tree(const PointTree& tr, const Closure& cl, const std::vector<TypeSet>& universe);

// A node of either tree: tree 0 is the source, tree 1 the target.
struct NodeRef {
    int tree = 0;
    int node = 0;
    bool operator==(const NodeRef& o) const { return tree == o.tree && node == o.node; }
};

enum class StepMode { Plain, Sync, Constant };

// f[p] is the sequence assigned to node p of `from`. Constant mode uses the
// suitability relation that follows `constant`.
TreeCheck tree_step_check(const PointTree& from, const PointTree& to, const std::vector<std::vector<NodeRef>>& f,
                          StepMode mode, const Closure& cl, const std::string& constant = "");

// beta of the point, conjoined with the dual-knowledge formulas of the
// i-related points one index level up (recursion on index length).
Formula tree_formula(const PointTree& tr, int node, const Closure& cl);

}  // namespace qistk
