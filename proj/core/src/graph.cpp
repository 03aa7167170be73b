#include "mlst/graph.hpp"

#include <algorithm>

#include "mlst/errors.hpp"

namespace mlst {

Graph::Graph(int n) {
    if (n < 0) throw InvalidArgument("negative vertex count");
    for (int v = 1; v <= n; ++v) add_vertex(v);
}

void Graph::ensure_slot(VertexId v) {
    if (v >= static_cast<VertexId>(alive_.size())) {
        alive_.resize(v + 1, 0);
        inc_.resize(v + 1);
    }
}

VertexId Graph::add_vertex() {
    VertexId id = std::max<VertexId>(1, id_bound());
    add_vertex(id);
    return id;
}

void Graph::add_vertex(VertexId id) {
    if (id < 0) throw InvalidArgument("negative vertex id");
    ensure_slot(id);
    if (alive_[id]) throw ContractViolation("vertex " + std::to_string(id) + " already exists");
    alive_[id] = 1;
    ++n_alive_;
}

void Graph::remove_vertex(VertexId v) {
    if (!has_vertex(v)) throw ContractViolation("no vertex " + std::to_string(v));
    while (!inc_[v].empty()) remove_edge(inc_[v].back());
    alive_[v] = 0;
    --n_alive_;
}

EdgeId Graph::add_edge(VertexId u, VertexId v) {
    if (!has_vertex(u) || !has_vertex(v))
        throw ContractViolation("edge endpoint missing: " + std::to_string(u) + "-" + std::to_string(v));
    EdgeId e = static_cast<EdgeId>(edges_.size());
    edges_.push_back({u, v});
    edge_alive_.push_back(1);
    inc_[u].push_back(e);
    inc_[v].push_back(e);  // a loop is listed twice at u
    ++m_alive_;
    return e;
}

void Graph::detach(EdgeId e) {
    const Edge& ed = edges_[e];
    auto drop_one = [&](VertexId x) {
        auto& list = inc_[x];
        auto it = std::find(list.begin(), list.end(), e);
        list.erase(it);
    };
    drop_one(ed.u);
    drop_one(ed.v);
}

void Graph::remove_edge(EdgeId e) {
    if (!has_edge(e)) throw ContractViolation("no edge id " + std::to_string(e));
    detach(e);
    edge_alive_[e] = 0;
    --m_alive_;
}

bool Graph::remove_edge_between(VertexId u, VertexId v) {
    EdgeId e = find_edge(u, v);
    if (e < 0) return false;
    remove_edge(e);
    return true;
}

std::vector<VertexId> Graph::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    out.reserve(inc_[v].size());
    for (EdgeId e : inc_[v]) out.push_back(other(e, v));
    return out;
}

std::vector<VertexId> Graph::distinct_neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (EdgeId e : inc_[v]) {
        VertexId w = other(e, v);
        if (w != v) out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int Graph::multiplicity(VertexId u, VertexId v) const {
    if (!has_vertex(u) || !has_vertex(v)) return 0;
    const VertexId scan = inc_[u].size() <= inc_[v].size() ? u : v;
    const VertexId target = scan == u ? v : u;
    int count = 0;
    for (EdgeId e : inc_[scan])
        if (other(e, scan) == target) ++count;
    return u == v ? count / 2 : count;
}

EdgeId Graph::find_edge(VertexId u, VertexId v) const {
    if (!has_vertex(u) || !has_vertex(v)) return -1;
    EdgeId best = -1;
    for (EdgeId e : inc_[u])
        if (other(e, u) == v && (best < 0 || e < best)) best = e;
    return best;
}

std::vector<VertexId> Graph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(n_alive_);
    for (VertexId v = 0; v < id_bound(); ++v)
        if (alive_[v]) out.push_back(v);
    return out;
}

std::vector<EdgeId> Graph::edge_ids() const {
    std::vector<EdgeId> out;
    out.reserve(m_alive_);
    for (EdgeId e = 0; e < edge_id_bound(); ++e)
        if (edge_alive_[e]) out.push_back(e);
    return out;
}

bool Graph::is_simple() const {
    for (VertexId v = 0; v < id_bound(); ++v) {
        if (!alive_[v]) continue;
        std::vector<VertexId> nb = neighbors(v);
        std::sort(nb.begin(), nb.end());
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] == v) return false;
            if (i > 0 && nb[i] == nb[i - 1]) return false;
        }
    }
    return true;
}

int Graph::min_degree() const {
    int best = -1;
    for (VertexId v : vertices())
        if (best < 0 || degree(v) < best) best = degree(v);
    return std::max(best, 0);
}

int Graph::max_degree() const {
    int best = 0;
    for (VertexId v : vertices()) best = std::max(best, degree(v));
    return best;
}

int Graph::count_degree_at_least(int d) const {
    int count = 0;
    for (VertexId v = 0; v < id_bound(); ++v)
        if (alive_[v] && degree(v) >= d) ++count;
    return count;
}

VertexClass Graph::vertex_class(VertexId v) const {
    const int d = degree(v);
    if (d <= 2) return VertexClass::goober;
    if (d == 3) return VertexClass::degree3;
    return VertexClass::high_degree;
}

std::vector<std::pair<VertexId, VertexId>> Graph::edge_multiset() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(m_alive_);
    for (EdgeId e = 0; e < edge_id_bound(); ++e) {
        if (!edge_alive_[e]) continue;
        auto [u, v] = edges_[e];
        out.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Graph Graph::induced(const std::vector<VertexId>& keep) const {
    Graph h;
    std::vector<char> in(id_bound(), 0);
    for (VertexId v : keep) {
        if (!has_vertex(v)) throw ContractViolation("induced: missing vertex");
        if (!in[v]) h.add_vertex(v);
        in[v] = 1;
    }
    for (EdgeId e = 0; e < edge_id_bound(); ++e) {
        if (!edge_alive_[e]) continue;
        if (in[edges_[e].u] && in[edges_[e].v]) h.add_edge(edges_[e].u, edges_[e].v);
    }
    return h;
}

bool same_graph(const Graph& a, const Graph& b) {
    return a.vertices() == b.vertices() && a.edge_multiset() == b.edge_multiset();
}

}  // namespace mlst
