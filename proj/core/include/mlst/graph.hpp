#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mlst {

using VertexId = int;
using EdgeId = int;

/// Edge list of a tree or forest as endpoint pairs.
using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    bool is_loop() const { return u == v; }
};

enum class VertexClass { goober, degree3, high_degree };

/// Undirected multigraph with stable vertex and edge ids.
///
/// Removing a vertex or an edge leaves a hole; ids are never reused, so
/// pattern matches and reduction traces recorded against an earlier state
/// still name the same objects. A loop contributes two to the degree and
/// appears twice in the incidence list of its vertex.
class Graph {
public:
    Graph() = default;
    /// Graph with vertices 1..n and no edges.
    explicit Graph(int n);

    /// Adds a vertex with the next free id (one above the largest id ever used).
    VertexId add_vertex();
    /// Adds a vertex with an explicit id; the id must not be alive.
    void add_vertex(VertexId id);
    /// Removes a vertex together with all incident edges.
    void remove_vertex(VertexId v);

    EdgeId add_edge(VertexId u, VertexId v);
    void remove_edge(EdgeId e);
    /// Removes one copy of uv (the one with the smallest edge id); false if absent.
    bool remove_edge_between(VertexId u, VertexId v);

    bool has_vertex(VertexId v) const {
        return v >= 0 && v < static_cast<VertexId>(alive_.size()) && alive_[v];
    }
    bool has_edge(EdgeId e) const {
        return e >= 0 && e < static_cast<EdgeId>(edges_.size()) && edge_alive_[e];
    }

    int degree(VertexId v) const { return static_cast<int>(inc_[v].size()); }
    const std::vector<EdgeId>& incident(VertexId v) const { return inc_[v]; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    VertexId other(EdgeId e, VertexId v) const {
        const Edge& ed = edges_[e];
        return ed.u == v ? ed.v : ed.u;
    }

    /// Neighbors with multiplicity; a loop lists v twice.
    std::vector<VertexId> neighbors(VertexId v) const;
    /// Distinct neighbors other than v itself, ascending.
    std::vector<VertexId> distinct_neighbors(VertexId v) const;
    int multiplicity(VertexId u, VertexId v) const;
    bool adjacent(VertexId u, VertexId v) const { return multiplicity(u, v) > 0; }
    /// Smallest alive edge id joining u and v, or -1.
    EdgeId find_edge(VertexId u, VertexId v) const;

    /// Alive vertex ids in ascending order.
    std::vector<VertexId> vertices() const;
    /// Alive edge ids in ascending order.
    std::vector<EdgeId> edge_ids() const;
    int num_vertices() const { return n_alive_; }
    int num_edges() const { return m_alive_; }
    /// One past the largest vertex id ever allocated; size for id-indexed arrays.
    VertexId id_bound() const { return static_cast<VertexId>(alive_.size()); }
    /// One past the largest edge id ever allocated.
    EdgeId edge_id_bound() const { return static_cast<EdgeId>(edges_.size()); }

    bool is_simple() const;
    int min_degree() const;
    int max_degree() const;
    /// n_{>=3}: number of vertices of degree at least three.
    int count_degree_at_least(int d) const;
    VertexClass vertex_class(VertexId v) const;
    bool is_goober(VertexId v) const { return degree(v) <= 2; }

    /// Sorted (min, max) endpoint pairs of all edges, with multiplicity.
    std::vector<std::pair<VertexId, VertexId>> edge_multiset() const;

    /// Copy of the graph restricted to the given vertices (ids preserved).
    Graph induced(const std::vector<VertexId>& keep) const;

private:
    void ensure_slot(VertexId v);
    void detach(EdgeId e);

    std::vector<char> alive_;
    std::vector<std::vector<EdgeId>> inc_;
    std::vector<Edge> edges_;
    std::vector<char> edge_alive_;
    int n_alive_ = 0;
    int m_alive_ = 0;
};

/// Same alive vertex ids and the same edge multiset.
bool same_graph(const Graph& a, const Graph& b);

}  // namespace mlst
