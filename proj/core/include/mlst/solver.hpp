#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlst/graph.hpp"
#include "mlst/structure.hpp"

namespace mlst {

/// Number of degree-1 vertices of the tree given as an edge list.
int count_leaves(const EdgeList& tree);
/// True if `tree` is a spanning tree of the vertices of g using only edges of g.
bool is_spanning_tree(const Graph& g, const EdgeList& tree);

struct ExactResult {
    int leaves = 0;
    EdgeList tree;
};

/// Maximum number of leaves over all spanning trees, via n minus the size of
/// a minimum connected dominating set. Throws CapacityError for n > cap and
/// ContractViolation for disconnected graphs or n < 2.
ExactResult exact_max_leaves(const Graph& g, int cap = 30);

struct ForcedLeafQuery {
    const SuppressedGraph* s = nullptr;
    std::vector<VertexId> forced;  // L, a subset of V_{>=3}(G)
    int k = 0;
};

/// Whether some spanning tree has every vertex of L as a leaf.
bool forced_leaf_feasible(const ForcedLeafQuery& q);
/// Largest |L| + |L(T) \ V_{>=3}(G)| over spanning trees T with L among the
/// leaves, or nullopt if no such tree exists.
std::optional<int> achievable_leaves(const ForcedLeafQuery& q);
/// A spanning tree of the host graph realising achievable_leaves(q).
std::optional<EdgeList> forced_leaf_tree(const ForcedLeafQuery& q);

struct FptStats {
    std::uint64_t subsets_enumerated = 0;
    int reductions_applied = 0;
    int k_after_preprocess = 0;
    int n3_after_preprocess = 0;
    std::string decided_by;  // "step2-n3", "step2-leaves", "step2-k", "empty-S", "step4", "exhausted"
};

struct Verdict {
    bool yes = false;
    std::optional<EdgeList> witness;
    FptStats stats;
};

struct FptOptions {
    bool want_witness = false;
    int workers = 1;
};

/// Decides whether G has a spanning tree with at least k leaves.
Verdict fpt_decide(const Graph& g, int k, const FptOptions& opts = {});

std::string to_json(const FptStats& s);

}  // namespace mlst
