#include "mlst/generators.hpp"

#include <algorithm>
#include <random>

#include "mlst/errors.hpp"
#include "mlst/patterns.hpp"
#include "mlst/structure.hpp"

namespace mlst {

namespace {

void add_blossom(Graph& g, VertexId base) {
    using namespace blossom_role;
    auto v = [base](VertexId r) { return base + r - 1; };
    for (VertexId a : {a1, a2, a3, a4}) g.add_edge(v(b), v(a));
    g.add_edge(v(a1), v(a2));
    g.add_edge(v(a3), v(a4));
    g.add_edge(v(c1), v(a1));
    g.add_edge(v(c1), v(a4));
    g.add_edge(v(c2), v(a2));
    g.add_edge(v(c2), v(a3));
}

void add_flower(Graph& g, VertexId base) {
    using namespace blossom_role;
    auto v = [base](VertexId r) { return base + r - 1; };
    add_blossom(g, base);
    g.add_edge(v(c1), v(f1));
    g.add_edge(v(c2), v(f2));
    g.add_edge(v(f1), v(f2));
    g.add_edge(v(f1), v(h));
    g.add_edge(v(f2), v(h));
    g.add_edge(v(h), v(s));
    g.add_edge(v(s), v(g1));
    g.add_edge(v(s), v(g2));
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    std::uint64_t below(std::uint64_t n) { return gen() % n; }
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
};

Graph random_tree_plus(int n, double p, Rng& rng) {
    Graph g(n);
    for (int v = 2; v <= n; ++v) g.add_edge(v, 1 + static_cast<int>(rng.below(v - 1)));
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (!g.adjacent(u, v) && rng.unit() < p) g.add_edge(u, v);
    return g;
}

// Adds random edges at vertices of degree < 3 until none remain.
bool lift_min_degree(Graph& g, int n, Rng& rng) {
    for (int guard = 0; guard < 50 * n; ++guard) {
        std::vector<VertexId> low;
        for (VertexId v : g.vertices())
            if (g.degree(v) < 3) low.push_back(v);
        if (low.empty()) return true;
        VertexId u = low[rng.below(low.size())];
        // prefer another deficient vertex so degrees stay small
        std::vector<VertexId> cand;
        for (VertexId w : low)
            if (w != u && !g.adjacent(u, w)) cand.push_back(w);
        if (cand.empty())
            for (VertexId w : g.vertices())
                if (w != u && !g.adjacent(u, w)) cand.push_back(w);
        if (cand.empty()) return false;
        g.add_edge(u, cand[rng.below(cand.size())]);
    }
    return false;
}

// Degree-preserving swap of one edge inside the witness with a random edge.
bool swap_out(Graph& g, const PatternMatch& witness, Rng& rng) {
    std::vector<EdgeId> inside;
    for (VertexId v : witness.vertices)
        for (EdgeId e : g.incident(v))
            if (std::find(witness.vertices.begin(), witness.vertices.end(), g.other(e, v)) != witness.vertices.end())
                inside.push_back(e);
    auto all = g.edge_ids();
    if (inside.empty() || all.size() < 2) return false;
    for (int attempt = 0; attempt < 64; ++attempt) {
        EdgeId e1 = inside[rng.below(inside.size())];
        EdgeId e2 = all[rng.below(all.size())];
        auto [x, y] = g.edge(e1);
        auto [z, w] = g.edge(e2);
        if (rng.below(2)) std::swap(z, w);
        if (x == z || x == w || y == z || y == w) continue;
        if (g.adjacent(x, z) || g.adjacent(y, w)) continue;
        g.remove_edge(e1);
        g.remove_edge(e2);
        EdgeId n1 = g.add_edge(x, z), n2 = g.add_edge(y, w);
        if (is_connected(g)) return true;
        g.remove_edge(n1);
        g.remove_edge(n2);
        g.add_edge(x, y);
        g.add_edge(z, w);
    }
    return false;
}

}  // namespace

Graph blossom() {
    Graph g(7);
    add_blossom(g, 1);
    return g;
}

Graph g7() {
    using namespace blossom_role;
    Graph g = blossom();
    g.add_edge(c1, c2);
    g.add_edge(a1, a4);
    return g;
}

Graph q3() {
    Graph g(8);
    for (int x = 0; x < 8; ++x)
        for (int bit = 1; bit < 8; bit <<= 1)
            if ((x & bit) == 0) g.add_edge(x + 1, (x | bit) + 1);
    return g;
}

Graph flower() {
    Graph g(13);
    add_flower(g, 1);
    g.add_edge(blossom_role::g1, blossom_role::g2);
    return g;
}

Graph flowerbed(int i) {
    using namespace blossom_role;
    if (i < 2) throw InvalidArgument("flowerbed needs i >= 2");
    Graph g(13 * i);
    for (int j = 0; j < i; ++j) add_flower(g, 13 * j + 1);
    // joining cycle g1^0 g2^0 g1^1 g2^1 ... of length 2i
    for (int j = 0; j < i; ++j) {
        VertexId base = 13 * j, next = 13 * ((j + 1) % i);
        g.add_edge(base + g1, base + g2);
        g.add_edge(base + g2, next + g1);
    }
    return g;
}

Graph necklace(int k) {
    if (k < 1) throw InvalidArgument("necklace needs k >= 1");
    Graph g(3 * k + 1);
    for (int d = 0; d < k; ++d) {
        VertexId x = 3 * d + 1, i = x + 1, j = x + 2, y = x + 3;
        g.add_edge(i, j);
        g.add_edge(x, i);
        g.add_edge(x, j);
        g.add_edge(y, i);
        g.add_edge(y, j);
    }
    return g;
}

Graph necklace_ring(int k) {
    if (k < 1) throw InvalidArgument("necklace-ring needs k >= 1");
    Graph g(4 * k);
    for (int d = 0; d < k; ++d) {
        VertexId x = 4 * d + 1, i = x + 1, j = x + 2, y = x + 3;
        g.add_edge(i, j);
        g.add_edge(x, i);
        g.add_edge(x, j);
        g.add_edge(y, i);
        g.add_edge(y, j);
    }
    for (int d = 0; d < k; ++d) {
        VertexId right = 4 * d + 4, next_left = 4 * ((d + 1) % k) + 1;
        g.add_edge(right, next_left);
    }
    return g;
}

Graph random_connected_graph(int n, double p, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("random graph needs n >= 1");
    Rng rng(seed);
    return random_tree_plus(n, p, rng);
}

Graph random_invariant_graph(int n, int min_degree_target, std::uint64_t seed) {
    if (n < 4) throw InvalidArgument("random_invariant_graph needs n >= 4");
    Rng rng(seed);
    int failures = 0;
    for (int restart = 0; restart < 64; ++restart) {
        Graph g;
        if (min_degree_target >= 3) {
            g = random_tree_plus(n, 0.25 * rng.unit() * 6.0 / n, rng);
            if (!lift_min_degree(g, n, rng)) {
                ++failures;
                continue;
            }
        } else {
            g = random_tree_plus(n, (1.0 + 3.0 * rng.unit()) / n, rng);
            if (g.min_degree() > 2) {
                ++failures;
                continue;
            }
        }
        for (int round = 0; round < 200; ++round) {
            InvariantVerdict verdict = check_invariant(g);
            if (verdict.ok) return g;
            if (!verdict.pattern || !swap_out(g, *verdict.pattern, rng)) break;
        }
        ++failures;
    }
    throw CapacityError("random_invariant_graph: budget exhausted after " + std::to_string(failures) +
                        " rejected samples (n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")");
}

Family parse_family(const std::string& name) {
    if (name == "necklace") return Family::necklace;
    if (name == "necklace-ring") return Family::necklace_ring;
    if (name == "blossom") return Family::blossom;
    if (name == "g7") return Family::g7;
    if (name == "q3") return Family::q3;
    if (name == "flower") return Family::flower;
    if (name == "flowerbed") return Family::flowerbed;
    if (name == "random") return Family::random;
    throw InvalidArgument("unknown family '" + name + "'");
}

Graph generate(const FamilySpec& spec) {
    switch (spec.family) {
        case Family::necklace: return necklace(spec.param);
        case Family::necklace_ring: return necklace_ring(spec.param);
        case Family::blossom: return blossom();
        case Family::g7: return g7();
        case Family::q3: return q3();
        case Family::flower: return flower();
        case Family::flowerbed: return flowerbed(spec.param);
        case Family::random: return random_invariant_graph(spec.param, spec.min_degree, spec.seed);
    }
    throw InvalidArgument("unknown family");
}

}  // namespace mlst
