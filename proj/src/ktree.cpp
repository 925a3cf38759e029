#include "qistk/ktree.hpp"

#include <set>

namespace qistk {

namespace {

template <typename Node>
const Index& index_of(const Node& n);
template <>
const Index& index_of(const StateCandidate& n) { return n.index; }
template <>
const Index& index_of(const QPoint& n) { return n.candidate.index; }

template <typename Node>
void shape_check(const std::vector<Node>& nodes, int k, const Closure& cl) {
    if (k < 0 || k > cl.depth()) throw TreeError("tree depth " + std::to_string(k) + " exceeds the alternation depth");
    int roots = 0;
    std::set<Index> present;
    for (const auto& n : nodes) {
        const Index& ix = index_of(n);
        if (!valid_index(ix, cl.agents())) throw TreeError("invalid index " + to_string(ix));
        if (static_cast<int>(ix.size()) > k) throw TreeError("index " + to_string(ix) + " is deeper than k");
        if (ix.empty()) ++roots;
        present.insert(ix);
    }
    if (roots != 1) throw TreeError(roots ? "more than one root" : "no root");
    for (const auto& ix : present)
        if (!ix.empty() && !present.count(Index(ix.begin(), ix.end() - 1)))
            throw TreeError("dangling index " + to_string(ix));
}

std::string where(const Index& ix, const TypeSet& t) {
    std::string s = "index " + to_string(ix) + ", type {";
    bool first = true;
    for (const auto& f : t.members) {
        s += (first ? "" : ", ") + to_string(f);
        first = false;
    }
    return s + "}";
}

}  // namespace

TreeCheck validate_ktree(const KTree& tr, const Closure& cl, const std::vector<TypeSet>& universe) {
    shape_check(tr.nodes, tr.k, cl);
    TreeCheck out;
    auto fail = [&](std::string clause, std::string detail) {
        out.ok = false;
        out.clause = std::move(clause);
        out.detail = std::move(detail);
        return out;
    };
    for (const auto& c : tr.nodes)
        if (auto v = candidate_violation(c, cl)) return fail("candidate", *v);
    for (const auto& c : tr.nodes)
        for (const auto& t : c.types)
            for (int i = 1; i <= cl.agents(); ++i) {
                Index up = absorptive_concat(c.index, i);
                if (static_cast<int>(up.size()) <= tr.k)
                    for (const auto& u : universe) {
                        if (u.index != up || !epi_suitable(t, u, i, cl)) continue;
                        bool found = false;
                        for (const auto& d : tr.nodes)
                            if (d.index == up && d.find(u) >= 0) found = true;
                        if (!found) return fail("witness", "no node of " + where(up, u) + " for agent " + std::to_string(i));
                    }
                if (!c.index.empty() && c.index.back() == i) {
                    Index parent(c.index.begin(), c.index.end() - 1);
                    bool found = false;
                    for (const auto& d : tr.nodes) {
                        if (d.index != parent) continue;
                        for (const auto& u : d.types)
                            if (epi_suitable(t, u, i, cl)) found = true;
                    }
                    if (!found) return fail("parent", "no related type one level up for " + where(c.index, t));
                }
            }
    return out;
}

TreeCheck validate_point_tree(const PointTree& tr, const Closure& cl, const std::vector<TypeSet>& universe) {
    shape_check(tr.nodes, tr.k, cl);
    TreeCheck out;
    auto fail = [&](std::string clause, std::string detail) {
        out.ok = false;
        out.clause = std::move(clause);
        out.detail = std::move(detail);
        return out;
    };
    for (const auto& p : tr.nodes) {
        if (auto v = candidate_violation(p.candidate, cl)) return fail("candidate", *v);
        if (p.type < 0 || p.type >= static_cast<int>(p.candidate.types.size()))
            return fail("candidate", "distinguished type out of range");
    }
    for (const auto& p : tr.nodes) {
        const TypeSet& t = p.distinguished();
        const Index& ix = p.candidate.index;
        for (int i = 1; i <= cl.agents(); ++i) {
            Index up = absorptive_concat(ix, i);
            if (static_cast<int>(up.size()) <= tr.k)
                for (const auto& u : universe) {
                    if (u.index != up || !epi_suitable(t, u, i, cl)) continue;
                    bool found = false;
                    for (const auto& d : tr.nodes)
                        if (d.candidate.index == up && d.distinguished() == u) found = true;
                    if (!found) return fail("witness", "no point with " + where(up, u) + " for agent " + std::to_string(i));
                }
            if (!ix.empty() && ix.back() == i) {
                Index parent(ix.begin(), ix.end() - 1);
                bool found = false;
                for (const auto& d : tr.nodes)
                    if (d.candidate.index == parent && epi_suitable(t, d.distinguished(), i, cl)) found = true;
                if (!found) return fail("parent", "no related point one level up for " + where(ix, t));
            }
        }
    }
    return out;
}

TreeCheck tree_step_check(const PointTree& from, const PointTree& to, const std::vector<std::vector<NodeRef>>& f,
                          StepMode mode, const Closure& cl, const std::string& constant) {
    TreeCheck out;
    auto fail = [&](std::string clause, std::string detail) {
        out.ok = false;
        out.clause = std::move(clause);
        out.detail = std::move(detail);
        return out;
    };
    if (f.size() != from.nodes.size()) return fail("step.1", "the map must cover every node of the source tree");
    auto node = [&](const NodeRef& r) -> const QPoint& {
        const auto& v = r.tree == 0 ? from.nodes : to.nodes;
        if (r.tree < 0 || r.tree > 1 || r.node < 0 || r.node >= static_cast<int>(v.size()))
            throw TreeError("node reference out of range");
        return v[r.node];
    };
    const std::string* c = mode == StepMode::Constant ? &constant : nullptr;
    bool long_one = false;
    for (std::size_t p = 0; p < f.size(); ++p) {
        const auto& seq = f[p];
        std::string who = "sequence of node " + std::to_string(p);
        if (seq.empty() || !(seq.front() == NodeRef{0, static_cast<int>(p)}))
            return fail("step.1", who + " does not start at the node");
        for (std::size_t j = 0; j + 1 < seq.size(); ++j)
            if (seq[j].tree != 0) return fail("step.1", who + " leaves the source tree before its end");
        if (seq.back().tree != 1) return fail("step.1", who + " does not end in the target tree");
        for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
            const QPoint &a = node(seq[j]), &b = node(seq[j + 1]);
            if (a.candidate.index != b.candidate.index || !point_next_suitable(a, b, cl, c))
                return fail("step.1", who + " is not a suitable sequence at position " + std::to_string(j));
        }
        if (mode == StepMode::Sync && seq.size() != 2)
            return fail("sync", who + " has length " + std::to_string(seq.size()) + ", expected exactly 2");
        if (seq.size() >= 2) long_one = true;
    }
    for (std::size_t p = 0; p < f.size(); ++p)
        for (std::size_t q = 0; q < f.size(); ++q)
            for (int i = 1; i <= cl.agents(); ++i) {
                if (!epi_suitable(from.nodes[p].distinguished(), from.nodes[q].distinguished(), i, cl)) continue;
                std::vector<TypeSet> a, b;
                for (const auto& r : f[p]) a.push_back(node(r).distinguished());
                for (const auto& r : f[q]) b.push_back(node(r).distinguished());
                if (!concordant(a, b, i, cl))
                    return fail("step.2", "sequences of nodes " + std::to_string(p) + " and " + std::to_string(q) +
                                              " are not concordant for agent " + std::to_string(i));
            }
    if (!long_one) return fail("step.3", "no sequence makes progress");
    return out;
}

Formula tree_formula(const PointTree& tr, int node, const Closure& cl) {
    const QPoint& p = tr.nodes.at(node);
    Formula beta = beta_of(p, cl.var());
    const Index& ix = p.candidate.index;
    if (ix.empty()) return beta;
    int i = ix.back();
    Index parent(ix.begin(), ix.end() - 1);
    std::vector<Formula> parts{beta};
    for (int q = 0; q < static_cast<int>(tr.nodes.size()); ++q) {
        const QPoint& r = tr.nodes[q];
        if (r.candidate.index != parent || !epi_suitable(p.distinguished(), r.distinguished(), i, cl)) continue;
        parts.push_back(know_dual(i, tree_formula(tr, q, cl)));
    }
    return conj_all(parts);
}

}  // namespace qistk
