#include "mlst/potential.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "json.hpp"
#include "mlst/errors.hpp"
#include "mlst/patterns.hpp"
#include "mlst/reductions.hpp"

namespace mlst {

namespace {

long long twice_potential(const SubgraphF& f) { return leaf_potential(f.host(), f).twice_p; }

std::vector<VertexId> boundary(const Graph& g, const SubgraphF& f) {
    std::vector<VertexId> out;
    for (VertexId v : f.vertex_list())
        for (VertexId w : g.distinct_neighbors(v))
            if (!f.contains(w)) {
                out.push_back(v);
                break;
            }
    std::sort(out.begin(), out.end());
    return out;
}

struct Candidate {
    std::vector<VertexId> sequence;
    long long gain = 0;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.sequence < b.sequence;
}

// Expansion sequences v1, v2, ... where v1 lies on the boundary and each later
// vertex was brought in by an earlier expansion of the same sequence. Such
// sequences never add a component, which is how the simple augmentations grow F.
void sequences_from(const SubgraphF& base, long long base_p, const SubgraphF& cur, std::vector<VertexId>& seq,
                    const std::vector<VertexId>& options, std::optional<Candidate>& best, int target_len) {
    if (static_cast<int>(seq.size()) == target_len) {
        if (cur.num_vertices() == base.num_vertices()) return;
        long long gain = twice_potential(cur) - base_p;
        if (gain < 0) return;
        Candidate c{seq, gain};
        if (!best || better(c, *best)) best = c;
        return;
    }
    for (VertexId v : options) {
        if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
        SubgraphF next = expand(cur, v);
        if (next.num_vertices() == cur.num_vertices()) continue;
        std::vector<VertexId> fresh;
        for (VertexId w : next.vertex_list())
            if (!base.contains(w)) fresh.push_back(w);
        std::sort(fresh.begin(), fresh.end());
        seq.push_back(v);
        sequences_from(base, base_p, next, seq, fresh, best, target_len);
        seq.pop_back();
    }
}

SubgraphF forest_from_edges(const Graph& g, const EdgeList& tree) {
    SubgraphF f(g);
    for (VertexId v : g.vertices()) f.add_vertex(v);
    for (auto [u, v] : tree) f.add_edge(g.find_edge(u, v));
    return f;
}

struct Forest {
    std::vector<int> deg;
    std::vector<int> parent;  // union-find
    explicit Forest(const Graph& g) : deg(g.id_bound(), 0), parent(g.id_bound()) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
};

// Adds edges of g between different components of the forest, each time
// choosing the edge whose insertion costs the fewest leaves.
EdgeList join_components(const Graph& g, EdgeList tree) {
    Forest fo(g);
    for (auto [u, v] : tree) {
        ++fo.deg[u];
        ++fo.deg[v];
        fo.parent[fo.find(u)] = fo.find(v);
    }
    auto edges = g.edge_multiset();
    for (;;) {
        int best_delta = -10;
        std::pair<VertexId, VertexId> pick{-1, -1};
        for (auto [u, v] : edges) {
            if (u == v || fo.find(u) == fo.find(v)) continue;
            int delta = 0;
            for (VertexId x : {u, v}) delta += (fo.deg[x] + 1 == 1) - (fo.deg[x] == 1);
            if (delta > best_delta) {
                best_delta = delta;
                pick = {u, v};
            }
        }
        if (pick.first < 0) break;
        tree.push_back(pick);
        ++fo.deg[pick.first];
        ++fo.deg[pick.second];
        fo.parent[fo.find(pick.first)] = fo.find(pick.second);
    }
    return tree;
}

// Leaf-increasing edge exchanges: add a non-tree edge, drop an edge of the
// cycle it closes, keep the exchange if the tree gains a leaf.
EdgeList improve_by_swaps(const Graph& g, EdgeList tree) {
    const VertexId nb = g.id_bound();
    std::vector<std::pair<VertexId, VertexId>> cand;
    for (auto e : g.edge_multiset())
        if (e.first != e.second) cand.push_back(e);
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    const int max_rounds = 4 * g.num_vertices() + 4;
    for (int round = 0; round < max_rounds; ++round) {
        std::vector<std::vector<VertexId>> adj(nb);
        std::vector<int> deg(nb, 0);
        std::map<std::pair<VertexId, VertexId>, int> in_tree;
        for (auto [u, v] : tree) {
            adj[u].push_back(v);
            adj[v].push_back(u);
            ++deg[u];
            ++deg[v];
            ++in_tree[std::minmax(u, v)];
        }
        bool improved = false;
        std::vector<VertexId> par(nb);
        VertexId rooted_at = -1;
        for (auto [u, v] : cand) {
            if (in_tree.count({u, v})) continue;
            if (rooted_at != u) {
                std::fill(par.begin(), par.end(), -1);
                std::vector<VertexId> queue{u};
                par[u] = u;
                for (std::size_t i = 0; i < queue.size(); ++i)
                    for (VertexId w : adj[queue[i]])
                        if (par[w] < 0) {
                            par[w] = queue[i];
                            queue.push_back(w);
                        }
                rooted_at = u;
            }
            if (par[v] < 0) continue;
            for (VertexId y = v; y != u; y = par[y]) {
                VertexId x = par[y];
                std::map<VertexId, int> change;
                ++change[u];
                ++change[v];
                --change[x];
                --change[y];
                int delta = 0;
                for (auto [w, c] : change) delta += (deg[w] + c == 1) - (deg[w] == 1);
                if (delta > 0) {
                    auto it = std::find(tree.begin(), tree.end(), std::pair<VertexId, VertexId>(std::minmax(x, y)));
                    if (it == tree.end()) it = std::find(tree.begin(), tree.end(), std::make_pair(y, x));
                    *it = {u, v};
                    improved = true;
                    break;
                }
            }
            if (improved) break;
        }
        if (!improved) break;
    }
    for (auto& e : tree) e = std::minmax(e.first, e.second);
    std::sort(tree.begin(), tree.end());
    return tree;
}

// Grows a forest spanning every non-trivial component of h.
EdgeList grow_forest(const Graph& h) {
    SubgraphF f(h);
    auto covered = [&]() {
        for (VertexId v : h.vertices())
            if (!f.contains(v) && h.degree(v) > 0) return false;
        return true;
    };
    while (!covered()) {
        if (auto next = try_augment(h, f)) {
            f = std::move(*next);
            continue;
        }
        // No augmentation: pick the single expansion with the best potential,
        // which may open a new component.
        std::vector<VertexId> cands = boundary(h, f);
        std::vector<char> near(h.id_bound(), 0);
        for (VertexId v : f.vertex_list())
            for (VertexId w : h.distinct_neighbors(v))
                for (VertexId z : h.distinct_neighbors(w)) near[w] = near[z] = 1;
        for (VertexId v : h.vertices())
            if (!f.contains(v) && h.degree(v) > 0 && (near[v] || h.degree(v) >= 4)) cands.push_back(v);
        if (cands.empty())
            for (VertexId v : h.vertices())
                if (!f.contains(v) && h.degree(v) > 0) cands.push_back(v);
        long long best_p = 0;
        VertexId best_v = -1;
        for (VertexId v : cands) {
            SubgraphF trial = expand(f, v);
            if (trial.num_vertices() == f.num_vertices()) continue;
            long long p = twice_potential(trial);
            if (best_v < 0 || p > best_p || (p == best_p && v < best_v)) {
                best_p = p;
                best_v = v;
            }
        }
        f = expand(f, best_v);
    }
    EdgeList out;
    for (EdgeId e : f.edge_list()) {
        auto [u, v] = h.edge(e);
        out.push_back(std::minmax(u, v));
    }
    // Expansions only attach new vertices, so F is a forest; join its pieces
    // inside each component of h.
    return join_components(h, out);
}

}  // namespace

PotentialReport leaf_potential(const Graph& g, const SubgraphF& f) {
    (void)g;
    PotentialReport r;
    r.leaves = static_cast<int>(f.leaves().size());
    r.dead_leaves = static_cast<int>(f.dead_leaves().size());
    r.nongoob = f.nongoob();
    r.cc = f.components();
    r.twice_p = 5LL * r.leaves + r.dead_leaves - 2LL * r.nongoob - 12LL * r.cc;
    return r;
}

DeltaTriple delta_between(const PotentialReport& before, const PotentialReport& after) {
    return {after.nongoob - before.nongoob, after.leaves - before.leaves, after.dead_leaves - before.dead_leaves};
}

SubgraphF expand(const SubgraphF& f, VertexId v) {
    const Graph& g = f.host();
    SubgraphF out = f;
    if (!out.contains(v)) out.add_vertex(v);
    for (VertexId w : g.distinct_neighbors(v))
        if (!f.contains(w)) out.add_edge(g.find_edge(v, w));
    return out;
}

std::optional<SubgraphF> try_augment(const Graph& g, const SubgraphF& f) {
    if (f.num_vertices() == 0 || f.spanning()) return std::nullopt;
    auto border = boundary(g, f);
    for (VertexId v : border)
        if (f.degree(v) != 1) {
            SubgraphF next = expand(f, v);
            if (twice_potential(next) >= twice_potential(f)) return next;
        }
    const long long base_p = twice_potential(f);
    for (int len = 1; len <= 3; ++len) {
        std::optional<Candidate> best;
        std::vector<VertexId> seq;
        sequences_from(f, base_p, f, seq, border, best, len);
        if (best) {
            SubgraphF out = f;
            for (VertexId v : best->sequence) out = expand(out, v);
            return out;
        }
    }
    return std::nullopt;
}

GreedyResult greedy_spanning_tree(const Graph& g) {
    if (g.num_vertices() < 2) throw ContractViolation("greedy_spanning_tree: graph needs at least two vertices");
    if (!is_connected(g)) throw ContractViolation("greedy_spanning_tree: graph is disconnected");

    Graph work = g;
    std::vector<ReductionStep> trace;
    if (check_invariant(g).ok) {
        ReductionResult red = reduce_to_irreducible(g);
        work = std::move(red.graph);
        trace = std::move(red.trace);
    }
    EdgeList tree = grow_forest(work);
    tree = reconstruct_through(work, trace, tree);
    tree = join_components(g, tree);
    tree = improve_by_swaps(g, tree);

    GreedyResult out;
    out.tree = tree;
    SubgraphF f = forest_from_edges(g, tree);
    out.report = leaf_potential(g, f);
    out.leaves = out.report.leaves;
    out.n3 = g.count_degree_at_least(3);
    out.bound_met = 3 * out.leaves >= out.n3 + 4;
    return out;
}

std::string to_json(const PotentialReport& r) {
    nlohmann::json j;
    j["leaves"] = r.leaves;
    j["dead_leaves"] = r.dead_leaves;
    j["nongoob"] = r.nongoob;
    j["cc"] = r.cc;
    j["twice_potential"] = r.twice_p;
    return j.dump();
}

}  // namespace mlst
