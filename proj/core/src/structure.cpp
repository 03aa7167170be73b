#include "mlst/structure.hpp"

#include <algorithm>
#include <tuple>

#include "mlst/errors.hpp"

namespace mlst {

Components connected_components(const Graph& g) {
    Components c;
    c.of.assign(g.id_bound(), -1);
    std::vector<VertexId> stack;
    for (VertexId s : g.vertices()) {
        if (c.of[s] >= 0) continue;
        const int id = c.count();
        c.parts.emplace_back();
        c.of[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            c.parts[id].push_back(v);
            for (EdgeId e : g.incident(v)) {
                VertexId w = g.other(e, v);
                if (c.of[w] < 0) {
                    c.of[w] = id;
                    stack.push_back(w);
                }
            }
        }
        std::sort(c.parts[id].begin(), c.parts[id].end());
    }
    return c;
}

bool is_connected(const Graph& g) { return connected_components(g).count() <= 1; }

BridgeInfo bridges_and_cut_vertices(const Graph& g) {
    BridgeInfo out;
    const VertexId nb = g.id_bound();
    std::vector<int> disc(nb, -1), low(nb, 0);
    std::vector<char> is_cut(nb, 0);
    struct Frame {
        VertexId v;
        EdgeId via;
        std::size_t next;
        int children;
    };
    std::vector<Frame> stack;
    int timer = 0;
    for (VertexId root : g.vertices()) {
        if (disc[root] >= 0) continue;
        disc[root] = low[root] = timer++;
        stack.push_back({root, -1, 0, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& inc = g.incident(f.v);
            if (f.next < inc.size()) {
                EdgeId e = inc[f.next++];
                VertexId w = g.other(e, f.v);
                if (e == f.via || w == f.v) continue;
                if (disc[w] < 0) {
                    disc[w] = low[w] = timer++;
                    ++f.children;
                    stack.push_back({w, e, 0, 0});
                } else {
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
                continue;
            }
            Frame done = f;
            stack.pop_back();
            if (stack.empty()) {
                if (done.children > 1) is_cut[done.v] = 1;
                continue;
            }
            Frame& parent = stack.back();
            low[parent.v] = std::min(low[parent.v], low[done.v]);
            if (low[done.v] > disc[parent.v]) out.bridges.push_back(done.via);
            if (parent.via >= 0 && low[done.v] >= disc[parent.v]) is_cut[parent.v] = 1;
        }
    }
    std::sort(out.bridges.begin(), out.bridges.end());
    for (VertexId v = 0; v < nb; ++v)
        if (is_cut[v]) out.cut_vertices.push_back(v);
    return out;
}

int SuppressedGraph::degree(VertexId v) const {
    int d = 0;
    for (const SEdge& e : edges) d += (e.u == v) + (e.v == v);
    return d;
}

Graph SuppressedGraph::expand() const {
    Graph g;
    auto ensure = [&](VertexId v) {
        if (!g.has_vertex(v)) g.add_vertex(v);
    };
    for (VertexId v : vertices) ensure(v);
    for (const SEdge& e : edges) {
        for (VertexId v : e.path) ensure(v);
        for (std::size_t i = 0; i + 1 < e.path.size(); ++i) g.add_edge(e.path[i], e.path[i + 1]);
    }
    return g;
}

SuppressedGraph suppress(const Graph& g) {
    SuppressedGraph s;
    if (g.count_degree_at_least(3) == 0) return s;
    std::vector<char> anchor(g.id_bound(), 0);
    for (VertexId v : g.vertices()) {
        if (g.degree(v) != 2 && g.degree(v) != 0) {
            anchor[v] = 1;
            s.vertices.push_back(v);
        }
    }
    std::vector<char> used(g.edge_id_bound(), 0);
    for (VertexId a : s.vertices) {
        for (EdgeId first : g.incident(a)) {
            if (used[first]) continue;
            SEdge se;
            se.u = a;
            se.path.push_back(a);
            EdgeId e = first;
            VertexId cur = a;
            while (true) {
                used[e] = 1;
                se.host_edges.push_back(e);
                cur = g.other(e, cur);
                se.path.push_back(cur);
                if (anchor[cur]) break;
                // cur has degree two; continue through its other edge
                const auto& inc = g.incident(cur);
                EdgeId next = inc[0] == e ? inc[1] : inc[0];
                e = next;
            }
            se.v = cur;
            se.internal = static_cast<int>(se.path.size()) - 2;
            se.cost = std::min(se.internal, 2);
            s.edges.push_back(std::move(se));
        }
    }
    for (VertexId v : g.vertices())
        if (g.degree(v) == 2)
            for (EdgeId e : g.incident(v))
                if (!used[e]) throw ContractViolation("suppress: component is a bare cycle of degree-2 vertices");
    return s;
}

SubgraphF::SubgraphF(const Graph& host)
    : host_(&host),
      in_v_(host.id_bound(), 0),
      in_e_(host.edge_id_bound(), 0),
      deg_(host.id_bound(), 0) {}

void SubgraphF::add_vertex(VertexId v) {
    if (!host_->has_vertex(v)) throw ContractViolation("SubgraphF: vertex not in host");
    if (in_v_[v]) return;
    in_v_[v] = 1;
    verts_.push_back(v);
}

void SubgraphF::add_edge(EdgeId e) {
    if (!host_->has_edge(e)) throw ContractViolation("SubgraphF: edge not in host");
    if (in_e_[e]) return;
    const Edge& ed = host_->edge(e);
    add_vertex(ed.u);
    add_vertex(ed.v);
    in_e_[e] = 1;
    edges_.push_back(e);
    ++deg_[ed.u];
    ++deg_[ed.v];
}

int SubgraphF::components() const {
    std::vector<VertexId> parent(in_v_.size());
    for (VertexId v : verts_) parent[v] = v;
    auto find = [&](VertexId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int count = num_vertices();
    for (EdgeId e : edges_) {
        VertexId a = find(host_->edge(e).u), b = find(host_->edge(e).v);
        if (a != b) {
            parent[a] = b;
            --count;
        }
    }
    return count;
}

std::vector<VertexId> SubgraphF::leaves() const {
    std::vector<VertexId> out;
    for (VertexId v : verts_)
        if (deg_[v] == 1) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> SubgraphF::dead_leaves() const {
    std::vector<VertexId> out;
    for (VertexId v : leaves()) {
        bool outside = false;
        for (EdgeId e : host_->incident(v))
            if (!in_v_[host_->other(e, v)]) outside = true;
        if (!outside) out.push_back(v);
    }
    return out;
}

int SubgraphF::nongoob() const {
    int count = 0;
    for (VertexId v : verts_)
        if (host_->degree(v) >= 3) ++count;
    return count;
}

Graph outside_subgraph(const Graph& g, const SubgraphF& f) {
    if (f.spanning()) throw ContractViolation("outside_subgraph: F is spanning");
    Graph out;
    for (EdgeId e : g.edge_ids()) {
        auto [u, v] = g.edge(e);
        if (f.contains(u) && f.contains(v)) continue;
        if (!out.has_vertex(u)) out.add_vertex(u);
        if (!out.has_vertex(v)) out.add_vertex(v);
        out.add_edge(u, v);
    }
    return out;
}

}  // namespace mlst
