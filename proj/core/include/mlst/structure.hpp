#pragma once

#include <vector>

#include "mlst/graph.hpp"

namespace mlst {

struct Components {
    /// Component index per vertex id; -1 for holes.
    std::vector<int> of;
    /// Vertex lists, each ascending; components ordered by smallest vertex.
    std::vector<std::vector<VertexId>> parts;
    int count() const { return static_cast<int>(parts.size()); }
};

Components connected_components(const Graph& g);
bool is_connected(const Graph& g);

struct BridgeInfo {
    std::vector<EdgeId> bridges;         // ascending edge ids
    std::vector<VertexId> cut_vertices;  // ascending vertex ids
};

/// Bridges and articulation points. Parallel edges and loops are never bridges.
BridgeInfo bridges_and_cut_vertices(const Graph& g);

/// One edge of S(G): a maximal host path whose interior vertices all have degree 2.
struct SEdge {
    VertexId u = 0;
    VertexId v = 0;
    int internal = 0;                // number of suppressed degree-2 vertices
    int cost = 0;                    // min(internal, 2)
    std::vector<VertexId> path;      // u, interior..., v in host order
    std::vector<EdgeId> host_edges;  // host edge ids along path
    bool is_loop() const { return u == v; }
};

/// The graph obtained by suppressing every degree-2 vertex.
struct SuppressedGraph {
    std::vector<VertexId> vertices;  // L(G) and V_{>=3}(G), ascending
    std::vector<SEdge> edges;
    bool empty() const { return vertices.empty(); }
    /// Degree in S with loops counted twice.
    int degree(VertexId v) const;
    /// Host graph rebuilt by expanding every S-edge back into its path.
    Graph expand() const;
};

/// S(G). Returns an empty SuppressedGraph when G has no vertex of degree >= 3.
/// Throws ContractViolation if some component is a bare cycle of degree-2 vertices
/// while other vertices of degree >= 3 exist.
SuppressedGraph suppress(const Graph& g);

/// A subgraph F of a host graph, tracked by vertex and edge membership.
class SubgraphF {
public:
    explicit SubgraphF(const Graph& host);

    const Graph& host() const { return *host_; }
    bool contains(VertexId v) const { return v < static_cast<VertexId>(in_v_.size()) && in_v_[v]; }
    bool contains_edge(EdgeId e) const { return e < static_cast<EdgeId>(in_e_.size()) && in_e_[e]; }
    void add_vertex(VertexId v);
    /// Adds a host edge and both endpoints.
    void add_edge(EdgeId e);

    const std::vector<VertexId>& vertex_list() const { return verts_; }
    const std::vector<EdgeId>& edge_list() const { return edges_; }
    int num_vertices() const { return static_cast<int>(verts_.size()); }
    int degree(VertexId v) const { return deg_[v]; }
    bool spanning() const { return num_vertices() == host_->num_vertices(); }

    int components() const;
    /// Vertices of degree 1 in F.
    std::vector<VertexId> leaves() const;
    /// Leaves of F without a host neighbor outside V(F).
    std::vector<VertexId> dead_leaves() const;
    /// Vertices of F with host degree >= 3.
    int nongoob() const;

private:
    const Graph* host_;
    std::vector<char> in_v_;
    std::vector<char> in_e_;
    std::vector<int> deg_;
    std::vector<VertexId> verts_;
    std::vector<EdgeId> edges_;
};

/// F^C: the edge-induced subgraph on all host edges with an endpoint outside V(F).
/// Vertex ids are preserved. Throws ContractViolation if F is spanning.
Graph outside_subgraph(const Graph& g, const SubgraphF& f);

}  // namespace mlst
