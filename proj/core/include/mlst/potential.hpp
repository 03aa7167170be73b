#pragma once

#include <optional>
#include <string>

#include "mlst/graph.hpp"
#include "mlst/structure.hpp"

namespace mlst {

/// Leaf potential of a subgraph F, kept as the integer 2P so that the
/// half-integral values stay exact:
///   2P = 5*leaves + dead_leaves - 2*nongoob - 12*cc
struct PotentialReport {
    int leaves = 0;
    int dead_leaves = 0;
    int nongoob = 0;
    int cc = 0;
    long long twice_p = 0;
};

/// Change (x, y, z) = (d nongoob, d leaves, d dead leaves); twice() is 2*Delta.
struct DeltaTriple {
    int x = 0;
    int y = 0;
    int z = 0;
    long long twice() const { return 5LL * y + z - 2LL * x; }
};

PotentialReport leaf_potential(const Graph& g, const SubgraphF& f);
DeltaTriple delta_between(const PotentialReport& before, const PotentialReport& after);

/// F plus N[v], joined by the edges from v to every neighbour not yet in F.
SubgraphF expand(const SubgraphF& f, VertexId v);

/// Grows F without adding a component and without lowering the potential:
/// first by expanding a boundary vertex that is not a leaf, then by the
/// best short expansion sequence that starts on the boundary. Returns
/// nullopt when no such extension exists.
std::optional<SubgraphF> try_augment(const Graph& g, const SubgraphF& f);

struct GreedyResult {
    EdgeList tree;
    int leaves = 0;
    PotentialReport report;  // potential of the final tree
    int n3 = 0;
    /// 3*leaves >= n3 + 4, i.e. leaves >= n3/3 + 4/3 in exact arithmetic.
    bool bound_met = false;
};

/// Heuristic spanning tree: reduce, grow F by augmentations and expansions,
/// join the components, undo the reductions, then apply leaf-improving edge
/// swaps. Throws ContractViolation for disconnected graphs or n < 2.
GreedyResult greedy_spanning_tree(const Graph& g);

std::string to_json(const PotentialReport& r);

}  // namespace mlst
