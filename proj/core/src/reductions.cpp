#include "mlst/reductions.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "mlst/errors.hpp"
#include "mlst/patterns.hpp"
#include "mlst/structure.hpp"

namespace mlst {

namespace {

constexpr RuleId kAllRules[] = {RuleId::L1, RuleId::L2, RuleId::L3, RuleId::L4, RuleId::L5,
                                RuleId::L6, RuleId::L7, RuleId::R1, RuleId::R2, RuleId::R3,
                                RuleId::R4, RuleId::R5, RuleId::F1, RuleId::F2};

std::vector<VertexId> nbrs(const Graph& g, VertexId v) {
    auto nb = g.neighbors(v);
    std::sort(nb.begin(), nb.end());
    return nb;
}

bool distinct(std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

bool contains(const std::vector<VertexId>& set, VertexId v) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

bool none_in(const std::vector<VertexId>& xs, const std::vector<VertexId>& set) {
    for (VertexId x : xs)
        if (x < 0 || contains(set, x)) return false;
    return true;
}

// Neighbors of v after removing one occurrence of each excluded vertex;
// empty optional if some excluded vertex is not a neighbor.
std::optional<std::vector<VertexId>> rest_of(const Graph& g, VertexId v, std::initializer_list<VertexId> excl) {
    auto nb = nbrs(g, v);
    for (VertexId x : excl) {
        auto it = std::find(nb.begin(), nb.end(), x);
        if (it == nb.end()) return std::nullopt;
        nb.erase(it);
    }
    return nb;
}

// The single remaining neighbor of v once `excl` is removed, or -1.
VertexId sole(const Graph& g, VertexId v, std::initializer_list<VertexId> excl) {
    auto r = rest_of(g, v, excl);
    if (!r || r->size() != 1 || (*r)[0] == v) return -1;
    return (*r)[0];
}

bool black(const Graph& g, VertexId v) { return g.degree(v) == 3 && distinct(nbrs(g, v)) && !g.adjacent(v, v); }
bool white(const Graph& g, VertexId v) { return g.degree(v) == 2; }

// Inner pair i<j of a diamond whose inner vertices have no other edges.
std::optional<std::pair<VertexId, VertexId>> closed_pair(const Graph& g, VertexId i, VertexId j) {
    if (i == j || !black(g, i) || !black(g, j)) return std::nullopt;
    auto ri = rest_of(g, i, {j}), rj = rest_of(g, j, {i});
    if (!ri || !rj || *ri != *rj) return std::nullopt;
    return std::make_pair((*ri)[0], (*ri)[1]);
}

// Outer-loop vertex lists: every vertex, or a given anchor set.
std::vector<VertexId> outer(const Graph& g, const std::vector<VertexId>* anchors) {
    if (!anchors) return g.vertices();
    std::vector<VertexId> out;
    for (VertexId v : *anchors)
        if (g.has_vertex(v)) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

using Matches = std::vector<RuleMatch>;

// L1 roles: a, b, g1, g2, g3, g4, x1, x2, y1, y2
void match_l1(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    for (VertexId a : outer(g, anchors)) {
        if (!black(g, a)) continue;
        for (VertexId b : nbrs(g, a)) {
            if (!black(g, b)) continue;
            auto ra = rest_of(g, a, {b}), rb = rest_of(g, b, {a});
            VertexId g1 = (*ra)[0], g2 = (*ra)[1], g3 = (*rb)[0], g4 = (*rb)[1];
            std::vector<VertexId> core{a, b, g1, g2, g3, g4};
            if (!distinct(core)) continue;
            if (!white(g, g1) || !white(g, g2) || !white(g, g3) || !white(g, g4)) continue;
            VertexId x1 = sole(g, g1, {a}), x2 = sole(g, g2, {a}), y1 = sole(g, g3, {b}), y2 = sole(g, g4, {b});
            if (!none_in({x1, x2, y1, y2}, core)) continue;
            out.push_back({RuleId::L1, {a, b, g1, g2, g3, g4, x1, x2, y1, y2}});
        }
    }
}

// L2 roles: u, v (an edge between two goobers)
void match_l2(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    std::set<std::pair<VertexId, VertexId>> seen;
    for (VertexId u : outer(g, anchors)) {
        if (g.degree(u) > 2) continue;
        for (VertexId v : g.neighbors(u)) {
            if (v == u || g.degree(v) > 2) continue;
            auto key = std::minmax(u, v);
            if (seen.insert(key).second) out.push_back({RuleId::L2, {key.first, key.second}});
        }
    }
}

// L3 roles: a, g1, b, g2, g3, x1, x2, y1, y2
void match_l3(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    for (VertexId a : outer(g, anchors)) {
        if (!black(g, a)) continue;
        auto na = nbrs(g, a);
        if (!white(g, na[0]) || !white(g, na[1]) || !white(g, na[2])) continue;
        for (int pick = 0; pick < 3; ++pick) {
            VertexId g1 = na[pick], g2 = na[(pick + 1) % 3], g3 = na[(pick + 2) % 3];
            if (g2 > g3) std::swap(g2, g3);
            VertexId b = sole(g, g1, {a});
            if (b < 0 || !black(g, b)) continue;
            std::vector<VertexId> core{a, g1, b, g2, g3};
            if (!distinct(core)) continue;
            auto rb = rest_of(g, b, {g1});
            if (!rb) continue;
            VertexId x1 = (*rb)[0], x2 = (*rb)[1];
            VertexId y1 = sole(g, g2, {a}), y2 = sole(g, g3, {a});
            if (!none_in({x1, x2, y1, y2}, core)) continue;
            out.push_back({RuleId::L3, {a, g1, b, g2, g3, x1, x2, y1, y2}});
        }
    }
}

// L4 roles: a, b, g1, g2, h, x1, x2, y1, y2 (x1 is b's direct exit, x2 leaves through h)
void match_l4(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    for (VertexId a : outer(g, anchors)) {
        if (!black(g, a)) continue;
        for (VertexId b : nbrs(g, a)) {
            if (!black(g, b)) continue;
            auto ra = rest_of(g, a, {b});
            VertexId g1 = (*ra)[0], g2 = (*ra)[1];
            if (!white(g, g1) || !white(g, g2)) continue;
            auto rb = rest_of(g, b, {a});
            for (int pick = 0; pick < 2; ++pick) {
                VertexId h = (*rb)[pick], x1 = (*rb)[1 - pick];
                if (!white(g, h)) continue;
                std::vector<VertexId> core{a, b, g1, g2, h};
                if (!distinct(core)) continue;
                VertexId x2 = sole(g, h, {b}), y1 = sole(g, g1, {a}), y2 = sole(g, g2, {a});
                if (!none_in({x1, x2, y1, y2}, core)) continue;
                out.push_back({RuleId::L4, {a, b, g1, g2, h, x1, x2, y1, y2}});
            }
        }
    }
}

// L5 roles: a, b, c1, c2, p, q, x1, x2, y1, y2
void match_l5(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    for (VertexId a : outer(g, anchors)) {
        if (!black(g, a)) continue;
        auto na = nbrs(g, a);
        std::set<VertexId> partners;
        for (VertexId c : na)
            for (VertexId b : g.neighbors(c))
                if (b > a && black(g, b) && !g.adjacent(a, b)) partners.insert(b);
        for (VertexId b : partners) {
            auto nb = nbrs(g, b);
            std::vector<VertexId> common;
            std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
            if (common.size() != 2) continue;
            VertexId c1 = common[0], c2 = common[1];
            VertexId p = sole(g, a, {c1, c2}), q = sole(g, b, {c1, c2});
            if (p < 0 || q < 0) continue;
            std::vector<VertexId> core{a, b, c1, c2, p, q};
            if (!distinct(core)) continue;
            bool ok = true;
            for (VertexId v : core) ok = ok && black(g, v);
            if (!ok || !g.adjacent(p, q)) continue;
            VertexId x1 = sole(g, c1, {a, b}), x2 = sole(g, c2, {a, b});
            VertexId y1 = sole(g, p, {a, q}), y2 = sole(g, q, {b, p});
            if (!none_in({x1, x2, y1, y2}, core)) continue;
            out.push_back({RuleId::L5, {a, b, c1, c2, p, q, x1, x2, y1, y2}});
        }
    }
}

// L6 roles: a, b, g, x, y (triangle a b g with goober g; a -> x, b -> y)
void match_l6(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    std::set<VertexId> goobers;
    for (VertexId v : outer(g, anchors)) {
        if (white(g, v)) goobers.insert(v);
        for (VertexId w : g.neighbors(v))
            if (white(g, w)) goobers.insert(w);
    }
    for (VertexId gv : goobers) {
        auto ng = nbrs(g, gv);
        VertexId a = ng[0], b = ng[1];
        if (a == b || a == gv || b == gv || !black(g, a) || !black(g, b) || !g.adjacent(a, b)) continue;
        VertexId x = sole(g, a, {b, gv}), y = sole(g, b, {a, gv});
        if (!none_in({x, y}, {a, b, gv})) continue;
        out.push_back({RuleId::L6, {a, b, gv, x, y}});
    }
}

// L7 roles: s, t, p1, p2, p3, e1, e2, e3 (K_{2,3} with parts {s,t} and {p1,p2,p3})
void match_l7(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    std::set<VertexId> starts;
    for (VertexId v : outer(g, anchors)) {
        starts.insert(v);
        if (anchors)
            for (VertexId w : g.neighbors(v)) starts.insert(w);
    }
    for (VertexId s : starts) {
        if (!black(g, s)) continue;
        auto ps = nbrs(g, s);
        bool ok = true;
        for (VertexId p : ps) ok = ok && black(g, p);
        if (!ok) continue;
        for (VertexId t : g.neighbors(ps[0])) {
            if (t <= s || !black(g, t) || nbrs(g, t) != ps) continue;
            std::vector<VertexId> core{s, t, ps[0], ps[1], ps[2]};
            VertexId e1 = sole(g, ps[0], {s, t}), e2 = sole(g, ps[1], {s, t}), e3 = sole(g, ps[2], {s, t});
            if (!none_in({e1, e2, e3}, core)) continue;
            out.push_back({RuleId::L7, {s, t, ps[0], ps[1], ps[2], e1, e2, e3}});
        }
    }
}

template <typename F>
void for_closed_pairs(const Graph& g, const std::vector<VertexId>* anchors, F&& f) {
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (VertexId v : outer(g, anchors)) {
        std::vector<VertexId> around{v};
        if (anchors)
            for (VertexId w : g.neighbors(v)) around.push_back(w);
        for (VertexId i : around)
            for (VertexId j : g.neighbors(i))
                if (i != j) pairs.insert(std::minmax(i, j));
    }
    for (auto [i, j] : pairs)
        if (auto tips = closed_pair(g, i, j)) f(i, j, tips->first, tips->second);
}

// R1 roles: t, i1, i2, p, w (t high degree tip, p degree-3 tip leaving to w)
void match_r1(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    for_closed_pairs(g, anchors, [&](VertexId i, VertexId j, VertexId x, VertexId y) {
        for (auto [t, p] : {std::pair{x, y}, std::pair{y, x}}) {
            if (g.degree(t) < 4 || !black(g, p)) continue;
            VertexId w = sole(g, p, {i, j});
            if (!none_in({w}, {t, i, j, p})) continue;
            out.push_back({RuleId::R1, {t, i, j, p, w}});
        }
    });
}

// R2 roles: u, i1, i2, v (both tips of degree >= 4)
void match_r2(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    for_closed_pairs(g, anchors, [&](VertexId i, VertexId j, VertexId x, VertexId y) {
        if (g.degree(x) >= 4 && g.degree(y) >= 4) out.push_back({RuleId::R2, {x, i, j, y}});
    });
}

// R3 roles: a, b, w, u, v (triangle a b w; a -> u, b -> v; the rewrite adds uw)
void match_r3(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    std::set<VertexId> starts;
    for (VertexId v : outer(g, anchors)) {
        starts.insert(v);
        if (anchors)
            for (VertexId w : g.neighbors(v)) starts.insert(w);
    }
    for (VertexId a : starts) {
        if (!black(g, a)) continue;
        for (VertexId b : nbrs(g, a)) {
            if (!black(g, b)) continue;
            for (VertexId w : nbrs(g, a)) {
                if (w == b || !g.adjacent(b, w)) continue;
                VertexId u = sole(g, a, {b, w}), v = sole(g, b, {a, w});
                if (u < 0 || v < 0 || !distinct({a, b, w, u, v})) continue;
                out.push_back({RuleId::R3, {a, b, w, u, v}});
            }
        }
    }
}

// R4 roles: x, p', q', r', s', p, q, r, s (bow tie centred at x)
void match_r4(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    std::set<VertexId> starts;
    for (VertexId v : outer(g, anchors)) {
        starts.insert(v);
        if (anchors)
            for (VertexId w : g.neighbors(v)) starts.insert(w);
    }
    for (VertexId x : starts) {
        if (g.degree(x) != 4) continue;
        auto nx = nbrs(g, x);
        if (!distinct(nx) || contains(nx, x)) continue;
        bool ok = true;
        for (VertexId v : nx) ok = ok && black(g, v);
        if (!ok) continue;
        const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (const auto& pr : pairings) {
            VertexId p1 = nx[pr[0]], q1 = nx[pr[1]], r1 = nx[pr[2]], s1 = nx[pr[3]];
            if (!g.adjacent(p1, q1) || !g.adjacent(r1, s1)) continue;
            VertexId p = sole(g, p1, {x, q1}), q = sole(g, q1, {x, p1}), r = sole(g, r1, {x, s1}),
                     s = sole(g, s1, {x, r1});
            std::vector<VertexId> core{x, p1, q1, r1, s1};
            if (!none_in({p, q, r, s}, core) || !distinct({p, q, r, s})) continue;
            out.push_back({RuleId::R4, {x, p1, q1, r1, s1, p, q, r, s}});
        }
    }
}

// R5 roles: u, v (a simple edge between two vertices of degree >= 4)
void match_r5(const Graph& g, const std::vector<VertexId>* anchors, Matches& out) {
    std::set<std::pair<VertexId, VertexId>> seen;
    for (VertexId u : outer(g, anchors)) {
        if (g.degree(u) < 4) continue;
        for (VertexId v : g.distinct_neighbors(u)) {
            if (g.degree(v) < 4 || g.multiplicity(u, v) != 1) continue;
            auto key = std::minmax(u, v);
            if (seen.insert(key).second) out.push_back({RuleId::R5, {key.first, key.second}});
        }
    }
}

void match_f(const Graph& g, RuleId rule, const std::vector<VertexId>* anchors, Matches& out) {
    auto kind = rule == RuleId::F1 ? PatternKind::two_terminal_diamond : PatternKind::two_terminal_blossom;
    for (const PatternMatch& pm : find_2terminal(g, kind)) {
        if (anchors) {
            bool hit = false;
            for (VertexId v : pm.vertices) hit = hit || contains(*anchors, v);
            if (!hit) continue;
        }
        out.push_back({rule, pm.vertices});
    }
}

Matches run_matcher(const Graph& g, RuleId rule, const std::vector<VertexId>* anchors) {
    Matches out;
    switch (rule) {
        case RuleId::L1: match_l1(g, anchors, out); break;
        case RuleId::L2: match_l2(g, anchors, out); break;
        case RuleId::L3: match_l3(g, anchors, out); break;
        case RuleId::L4: match_l4(g, anchors, out); break;
        case RuleId::L5: match_l5(g, anchors, out); break;
        case RuleId::L6: match_l6(g, anchors, out); break;
        case RuleId::L7: match_l7(g, anchors, out); break;
        case RuleId::R1: match_r1(g, anchors, out); break;
        case RuleId::R2: match_r2(g, anchors, out); break;
        case RuleId::R3: match_r3(g, anchors, out); break;
        case RuleId::R4: match_r4(g, anchors, out); break;
        case RuleId::R5: match_r5(g, anchors, out); break;
        case RuleId::F1:
        case RuleId::F2: match_f(g, rule, anchors, out); break;
    }
    std::sort(out.begin(), out.end(), [](const RuleMatch& a, const RuleMatch& b) { return a.roles < b.roles; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const RuleMatch& a, const RuleMatch& b) { return a.roles == b.roles; }),
              out.end());
    return out;
}

// Right-hand side of a rule. New vertices are referenced as -(index + 1).
struct Rewrite {
    std::vector<VertexId> remove_vertices;
    EdgeList remove_edges;
    int new_vertices = 0;
    EdgeList add_edges;
};

Rewrite rewrite_for(const RuleMatch& m) {
    const auto& r = m.roles;
    constexpr VertexId N0 = -1, N1 = -2, N2 = -3;
    Rewrite w;
    auto two_paths = [&](VertexId x1, VertexId x2, VertexId y1, VertexId y2) {
        w.new_vertices = 2;
        w.add_edges = {{x1, N0}, {N0, x2}, {y1, N1}, {N1, y2}};
    };
    switch (m.rule) {
        case RuleId::L1:
            w.remove_vertices = {r[0], r[1], r[2], r[3], r[4], r[5]};
            two_paths(r[6], r[7], r[8], r[9]);
            break;
        case RuleId::L2: w.remove_edges = {{r[0], r[1]}}; break;
        case RuleId::L3:
        case RuleId::L4:
            w.remove_vertices = {r[0], r[1], r[2], r[3], r[4]};
            two_paths(r[5], r[6], r[7], r[8]);
            break;
        case RuleId::L5:
            w.remove_vertices = {r[0], r[1], r[2], r[3], r[4], r[5]};
            two_paths(r[6], r[7], r[8], r[9]);
            break;
        case RuleId::L6:
            w.remove_vertices = {r[0], r[1], r[2]};
            w.new_vertices = 1;
            w.add_edges = {{r[3], N0}, {N0, r[4]}};
            break;
        case RuleId::L7:
            w.remove_vertices = {r[0], r[1]};
            w.add_edges = {{r[2], r[3]}, {r[3], r[4]}, {r[2], r[4]}};
            break;
        case RuleId::R1:
            w.remove_vertices = {r[1], r[2], r[3]};
            w.new_vertices = 1;
            w.add_edges = {{r[0], N0}, {N0, r[4]}};
            break;
        case RuleId::R2:
        case RuleId::F1:
            w.remove_vertices = {r[1], r[2]};
            w.new_vertices = 1;
            w.add_edges = {{r[0], N0}, {N0, r[3]}};
            break;
        case RuleId::R3:
            w.remove_vertices = {r[0], r[1]};
            w.add_edges = {{r[3], r[2]}};
            break;
        case RuleId::R4:
            w.remove_vertices = {r[0], r[1], r[2], r[3], r[4]};
            two_paths(r[5], r[6], r[7], r[8]);
            break;
        case RuleId::R5: w.remove_edges = {{r[0], r[1]}}; break;
        case RuleId::F2:
            w.remove_vertices = {r[0], r[1], r[2], r[3], r[4]};
            w.new_vertices = 3;
            w.add_edges = {{r[5], N0}, {N0, N1}, {N1, r[6]}, {r[6], N2}, {N2, r[5]}};
            break;
    }
    return w;
}

// Performs the rewrite, filling the structural fields of `step`.
void perform(Graph& g, const Rewrite& w, ReductionStep& step) {
    std::set<EdgeId> gone;
    for (VertexId v : w.remove_vertices)
        for (EdgeId e : g.incident(v)) gone.insert(e);
    for (auto [u, v] : w.remove_edges) {
        EdgeId e = g.find_edge(u, v);
        if (e < 0) throw ContractViolation("rewrite removes a missing edge");
        gone.insert(e);
    }
    for (EdgeId e : gone) {
        auto [u, v] = g.edge(e);
        step.removed_edges.emplace_back(u, v);
        g.remove_edge(e);
    }
    for (VertexId v : w.remove_vertices) {
        g.remove_vertex(v);
        step.removed_vertices.push_back(v);
    }
    std::vector<VertexId> fresh;
    for (int i = 0; i < w.new_vertices; ++i) fresh.push_back(g.add_vertex());
    step.added_vertices = fresh;
    auto resolve = [&](VertexId x) { return x < 0 ? fresh[-x - 1] : x; };
    for (auto [u, v] : w.add_edges) {
        u = resolve(u);
        v = resolve(v);
        g.add_edge(u, v);
        step.added_edges.emplace_back(u, v);
    }
}

std::vector<VertexId> touched_by(const ReductionStep& step, const Graph& after) {
    std::vector<VertexId> t;
    for (auto [u, v] : step.removed_edges)
        for (VertexId x : {u, v})
            if (after.has_vertex(x)) t.push_back(x);
    for (auto [u, v] : step.added_edges) {
        t.push_back(u);
        t.push_back(v);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

bool is_low_degree(RuleId r) { return r <= RuleId::L7; }

Admissibility reject(std::string why) { return {false, std::move(why)}; }

}  // namespace

std::string rule_name(RuleId r) {
    static const char* names[] = {"L1", "L2", "L3", "L4", "L5", "L6", "L7",
                                  "R1", "R2", "R3", "R4", "R5", "F1", "F2"};
    return names[static_cast<int>(r)];
}

std::optional<RuleId> parse_rule(const std::string& name) {
    for (RuleId r : kAllRules)
        if (rule_name(r) == name) return r;
    return std::nullopt;
}

bool is_fpt_rule(RuleId r) { return r == RuleId::F1 || r == RuleId::F2; }

std::vector<RuleMatch> find_matches(const Graph& g, RuleId rule) { return run_matcher(g, rule, nullptr); }

Admissibility admissible(const Graph& g, const RuleMatch& m) {
    for (VertexId v : m.roles)
        if (!g.has_vertex(v)) throw ContractViolation("match refers to a missing vertex");
    {
        Matches local = run_matcher(g, m.rule, &m.roles);
        bool found = false;
        for (const auto& c : local) found = found || c.roles == m.roles;
        if (!found) throw ContractViolation("match does not fit the template of " + rule_name(m.rule));
    }
    const auto& r = m.roles;
    switch (m.rule) {
        case RuleId::L1:
        case RuleId::L5:
        case RuleId::L3:
        case RuleId::L4: {
            std::size_t off = r.size() - 4;
            VertexId x1 = r[off], x2 = r[off + 1], y1 = r[off + 2], y2 = r[off + 3];
            // the exits' degrees are unchanged by the rewrite, so d_G decides goober status
            if (x1 == x2 && g.degree(x1) > 2) return reject("left outgoing edges share a non-goober end vertex");
            if (y1 == y2 && g.degree(y1) > 2) return reject("right outgoing edges share a non-goober end vertex");
            break;
        }
        case RuleId::L6:
            if (r[3] == r[4] && g.degree(r[3]) > 2) return reject("outgoing edges share a non-goober end vertex");
            break;
        case RuleId::L7:
            if (!distinct({r[5], r[6], r[7]})) return reject("a pair of outgoing edges shares an end vertex");
            break;
        case RuleId::R3:
            if (g.adjacent(r[3], r[2])) return reject("edge uw is already present");
            break;
        case RuleId::R5: {
            EdgeId e = g.find_edge(r[0], r[1]);
            for (EdgeId b : bridges_and_cut_vertices(g).bridges)
                if (b == e) return reject("uv is a bridge");
            break;
        }
        default: break;
    }
    if (is_fpt_rule(m.rule)) return {true, ""};

    Graph h = g;
    ReductionStep probe;
    perform(h, rewrite_for(m), probe);
    for (auto [u, v] : probe.added_edges)
        if (u == v || (h.multiplicity(u, v) > 1 && (h.degree(u) > 2 || h.degree(v) > 2)))
            return reject("introduces a multi-edge at a non-goober");
    const int cc_before = connected_components(g).count();
    const int cc_after = connected_components(h).count();
    if (m.rule == RuleId::R3) {
        if (cc_after != cc_before) return reject("rewrite changes the number of components");
        if (h.degree(r[4]) < 3 && h.degree(r[2]) < 3) return reject("both v and w would drop below degree 3");
    }
    if (m.rule == RuleId::R4 && cc_after <= cc_before) return reject("rewrite does not disconnect the graph");
    if (!is_low_degree(m.rule)) {
        auto seeds = touched_by(probe, h);
        auto before_seeds = seeds;
        for (auto [u, v] : probe.removed_edges) {
            before_seeds.push_back(u);
            before_seeds.push_back(v);
        }
        auto old = find_forbidden_near(g, before_seeds);
        for (const PatternMatch& pm : find_forbidden_near(h, seeds)) {
            if (std::find(old.begin(), old.end(), pm) != old.end()) continue;
            return reject(std::string("introduces a new ") + kind_name(pm.kind));
        }
    }
    return {true, ""};
}

ReductionStep apply(Graph& g, const RuleMatch& m) {
    Admissibility a = admissible(g, m);
    if (!a.ok) throw ContractViolation("inadmissible " + rule_name(m.rule) + ": " + a.reason);
    ReductionStep step;
    step.rule = m.rule;
    step.roles = m.roles;
    const int n3 = g.count_degree_at_least(3);
    const int cc = connected_components(g).count();
    perform(g, rewrite_for(m), step);
    step.delta_n3 = n3 - g.count_degree_at_least(3);
    step.delta_cc = connected_components(g).count() - cc;
    step.delta_k = is_fpt_rule(m.rule) ? 1 : 0;
    return step;
}

void replay(Graph& g, const ReductionStep& step) {
    for (auto [u, v] : step.removed_edges)
        if (!g.remove_edge_between(u, v)) throw ContractViolation("replay: missing edge");
    for (VertexId v : step.removed_vertices) {
        if (g.degree(v) != 0) throw ContractViolation("replay: vertex still has edges");
        g.remove_vertex(v);
    }
    for (VertexId v : step.added_vertices) g.add_vertex(v);
    for (auto [u, v] : step.added_edges) g.add_edge(u, v);
}

void unreplay(Graph& g, const ReductionStep& step) {
    for (auto [u, v] : step.added_edges)
        if (!g.remove_edge_between(u, v)) throw ContractViolation("unreplay: missing edge");
    for (VertexId v : step.added_vertices) g.remove_vertex(v);
    for (VertexId v : step.removed_vertices) g.add_vertex(v);
    for (auto [u, v] : step.removed_edges) g.add_edge(u, v);
}

std::optional<RuleMatch> first_admissible(const Graph& g) {
    for (RuleId r : kAllRules) {
        if (is_fpt_rule(r)) continue;
        for (const RuleMatch& m : find_matches(g, r))
            if (admissible(g, m).ok) return m;
    }
    return std::nullopt;
}

ReductionResult reduce_to_irreducible(const Graph& g) {
    InvariantVerdict inv = check_invariant(g);
    if (!inv.ok) throw ContractViolation("reduce: input violates the invariant (" + inv.reason + ")");
    ReductionResult res{g, {}};
    while (auto m = first_admissible(res.graph)) res.trace.push_back(apply(res.graph, *m));
    return res;
}

EdgeList reconstruct_tree(const Graph& pre, const ReductionStep& step, const EdgeList& post_forest) {
    // Keep every forest edge that survives in the pre-graph.
    std::multiset<std::pair<VertexId, VertexId>> added;
    for (auto [u, v] : step.added_edges) added.insert(std::minmax(u, v));
    EdgeList kept;
    for (auto [u, v] : post_forest) {
        auto key = std::minmax(u, v);
        auto it = added.find(key);
        if (it != added.end()) {
            added.erase(it);
            continue;
        }
        if (!pre.has_vertex(u) || !pre.has_vertex(v) || !pre.adjacent(u, v))
            throw ContractViolation("reconstruct: forest edge not present in either graph");
        kept.push_back(key);
    }
    const EdgeList& region = step.removed_edges;
    if (region.size() > 24) throw CapacityError("reconstruct: region too large for exhaustive completion");

    const VertexId nb = pre.id_bound();
    std::vector<VertexId> base_parent(nb);
    for (VertexId v = 0; v < nb; ++v) base_parent[v] = v;
    auto find = [](std::vector<VertexId>& p, VertexId x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    };
    std::vector<int> base_deg(nb, 0);
    int base_comps = pre.num_vertices();
    for (auto [u, v] : kept) {
        VertexId a = find(base_parent, u), b = find(base_parent, v);
        if (a == b) throw ContractViolation("reconstruct: post forest has a cycle in the pre-graph");
        base_parent[a] = b;
        --base_comps;
        ++base_deg[u];
        ++base_deg[v];
    }
    int base_leaves = 0;
    for (VertexId v : pre.vertices()) base_leaves += base_deg[v] == 1;

    int best_comps = base_comps + 1, best_leaves = -1;
    std::uint32_t best_mask = 0;
    const std::uint32_t limit = 1u << region.size();
    std::vector<VertexId> parent;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        parent = base_parent;
        bool acyclic = true;
        int comps = base_comps;
        for (std::size_t i = 0; i < region.size() && acyclic; ++i) {
            if (!(mask >> i & 1)) continue;
            VertexId a = find(parent, region[i].first), b = find(parent, region[i].second);
            if (a == b) acyclic = false;
            parent[a] = b;
            --comps;
        }
        if (!acyclic || comps > best_comps) continue;
        int leaves = base_leaves;
        // adjust leaf count only at region endpoints
        std::vector<std::pair<VertexId, int>> bump;
        for (std::size_t i = 0; i < region.size(); ++i) {
            if (!(mask >> i & 1)) continue;
            bump.emplace_back(region[i].first, 1);
            bump.emplace_back(region[i].second, 1);
        }
        std::sort(bump.begin(), bump.end());
        for (std::size_t i = 0; i < bump.size();) {
            std::size_t j = i;
            int add = 0;
            while (j < bump.size() && bump[j].first == bump[i].first) add += bump[j++].second;
            int d0 = base_deg[bump[i].first], d1 = d0 + add;
            leaves += (d1 == 1) - (d0 == 1);
            i = j;
        }
        if (comps < best_comps || leaves > best_leaves) {
            best_comps = comps;
            best_leaves = leaves;
            best_mask = mask;
        }
    }
    EdgeList out = kept;
    for (std::size_t i = 0; i < region.size(); ++i)
        if (best_mask >> i & 1) out.push_back(std::minmax(region[i].first, region[i].second));
    std::sort(out.begin(), out.end());
    return out;
}

EdgeList reconstruct_through(const Graph& reduced, const std::vector<ReductionStep>& trace, EdgeList forest) {
    Graph cur = reduced;
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
        Graph pre = cur;
        unreplay(pre, *it);
        forest = reconstruct_tree(pre, *it, forest);
        cur = std::move(pre);
    }
    return forest;
}

FptPreprocessResult fpt_preprocess(const Graph& g, int k) {
    FptPreprocessResult res{g, k, {}};
    // Worklist of vertices near which a 2-terminal structure may sit; smallest id first.
    std::set<VertexId> work;
    for (VertexId v : g.vertices()) work.insert(v);
    while (!work.empty()) {
        VertexId v = *work.begin();
        work.erase(work.begin());
        if (!res.graph.has_vertex(v)) continue;
        std::optional<RuleMatch> hit;
        for (RuleId r : {RuleId::F1, RuleId::F2}) {
            std::vector<VertexId> anchor{v};
            Matches local = run_matcher(res.graph, r, &anchor);
            if (!local.empty()) {
                hit = local.front();
                break;
            }
        }
        if (!hit) continue;
        ReductionStep step = apply(res.graph, *hit);
        --res.k;
        for (VertexId t : touched_by(step, res.graph)) {
            work.insert(t);
            for (VertexId w : res.graph.neighbors(t)) {
                work.insert(w);
                for (VertexId z : res.graph.neighbors(w)) work.insert(z);
            }
        }
        res.trace.push_back(std::move(step));
    }
    return res;
}

std::string to_json_line(const ReductionStep& s) {
    nlohmann::json j;
    j["rule"] = rule_name(s.rule);
    j["roles"] = s.roles;
    j["removed_vertices"] = s.removed_vertices;
    j["added_vertices"] = s.added_vertices;
    auto pairs = [](const EdgeList& es) {
        nlohmann::json a = nlohmann::json::array();
        for (auto [u, v] : es) a.push_back({u, v});
        return a;
    };
    j["removed_edges"] = pairs(s.removed_edges);
    j["added_edges"] = pairs(s.added_edges);
    j["delta_n3"] = s.delta_n3;
    j["delta_cc"] = s.delta_cc;
    j["delta_k"] = s.delta_k;
    return j.dump();
}

ReductionStep step_from_json(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("trace line is not JSON: ") + e.what());
    }
    ReductionStep s;
    auto rule = parse_rule(j.value("rule", ""));
    if (!rule) throw ParseError(0, "trace line has an unknown rule");
    s.rule = *rule;
    s.roles = j.at("roles").get<std::vector<VertexId>>();
    s.removed_vertices = j.at("removed_vertices").get<std::vector<VertexId>>();
    s.added_vertices = j.at("added_vertices").get<std::vector<VertexId>>();
    for (const auto& e : j.at("removed_edges")) s.removed_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    for (const auto& e : j.at("added_edges")) s.added_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    s.delta_n3 = j.value("delta_n3", 0);
    s.delta_cc = j.value("delta_cc", 0);
    s.delta_k = j.value("delta_k", 0);
    return s;
}

}  // namespace mlst
