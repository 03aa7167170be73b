#include "mlst/patterns.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "json.hpp"
#include "mlst/errors.hpp"
#include "mlst/structure.hpp"

namespace mlst {

std::string kind_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::diamond: return "diamond";
        case PatternKind::cubic_diamond: return "cubic-diamond";
        case PatternKind::necklace: return "necklace";
        case PatternKind::two_necklace: return "2-necklace";
        case PatternKind::blossom: return "blossom";
        case PatternKind::two_blossom: return "2-blossom";
        case PatternKind::two_terminal_diamond: return "2-terminal-diamond";
        case PatternKind::two_terminal_blossom: return "2-terminal-blossom";
    }
    return "?";
}

std::optional<PatternKind> parse_kind(const std::string& name) {
    for (PatternKind k : {PatternKind::diamond, PatternKind::cubic_diamond, PatternKind::necklace,
                          PatternKind::two_necklace, PatternKind::blossom, PatternKind::two_blossom,
                          PatternKind::two_terminal_diamond, PatternKind::two_terminal_blossom}) {
        std::string n = kind_name(k);
        std::string compact;
        for (char ch : n)
            if (ch != '-') compact += ch;
        if (name == n || name == compact) return k;
    }
    return std::nullopt;
}

namespace {

// Neighbors of v with multiplicity, sorted.
std::vector<VertexId> sorted_nbrs(const Graph& g, VertexId v) {
    auto nb = g.neighbors(v);
    std::sort(nb.begin(), nb.end());
    return nb;
}

// A diamond whose inner pair (i, j) has no edges leaving the diamond.
// Returns the tips (x < y) if i, j have degree 3 and share exactly the two
// other neighbors x != y.
std::optional<std::pair<VertexId, VertexId>> closed_inner_pair(const Graph& g, VertexId i, VertexId j) {
    if (i == j || g.degree(i) != 3 || g.degree(j) != 3) return std::nullopt;
    auto ni = sorted_nbrs(g, i), nj = sorted_nbrs(g, j);
    auto drop = [](std::vector<VertexId>& v, VertexId x) {
        auto it = std::find(v.begin(), v.end(), x);
        if (it == v.end()) return false;
        v.erase(it);
        return true;
    };
    if (!drop(ni, j) || !drop(nj, i)) return std::nullopt;
    if (ni != nj || ni[0] == ni[1]) return std::nullopt;
    if (ni[0] == i || ni[0] == j || ni[1] == i || ni[1] == j) return std::nullopt;
    return std::make_pair(ni[0], ni[1]);
}

struct Unit {
    VertexId x, i, j, y;  // tips x < y, inner i < j
};

// Units that have t as a tip.
std::vector<Unit> units_at_tip(const Graph& g, VertexId t) {
    std::vector<Unit> out;
    auto nb = g.distinct_neighbors(t);
    for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b) {
            if (!g.adjacent(nb[a], nb[b])) continue;
            auto tips = closed_inner_pair(g, nb[a], nb[b]);
            if (tips && (tips->first == t || tips->second == t))
                out.push_back({tips->first, nb[a], nb[b], tips->second});
        }
    return out;
}

VertexId other_tip(const Unit& u, VertexId t) { return u.x == t ? u.y : u.x; }

// Walks from unit `start` through tip `t`, appending (inner pair, next tip) blocks.
// Returns the final tip if the walk ends at a degree-3 vertex, or -1.
VertexId walk(const Graph& g, Unit cur, VertexId t, std::vector<Unit>& chain, std::set<VertexId>& seen) {
    while (true) {
        if (g.degree(t) == 3) return t;
        if (g.degree(t) != 4) return -1;
        auto units = units_at_tip(g, t);
        if (units.size() != 2) return -1;
        const Unit& next = (units[0].i == cur.i && units[0].j == cur.j) ? units[1] : units[0];
        // t must have no neighbor outside the two diamonds
        std::vector<VertexId> expect{cur.i, cur.j, next.i, next.j};
        std::sort(expect.begin(), expect.end());
        if (sorted_nbrs(g, t) != expect) return -1;
        VertexId nt = other_tip(next, t);
        if (seen.count(next.i) || seen.count(next.j) || seen.count(nt)) return -1;  // closed ring
        seen.insert({next.i, next.j, nt});
        chain.push_back(next);
        cur = next;
        t = nt;
    }
}

std::optional<PatternMatch> necklace_from_unit(const Graph& g, const Unit& u) {
    std::vector<Unit> right, left;
    std::set<VertexId> seen{u.x, u.i, u.j, u.y};
    VertexId end_r = walk(g, u, u.y, right, seen);
    if (end_r < 0) return std::nullopt;
    VertexId end_l = walk(g, u, u.x, left, seen);
    if (end_l < 0) return std::nullopt;
    // assemble from end_l through left (reversed), u, right to end_r
    std::vector<VertexId> seq{end_l};
    VertexId at = end_l;
    auto push_unit = [&](const Unit& w) {
        seq.push_back(w.i);
        seq.push_back(w.j);
        at = other_tip(w, at);
        seq.push_back(at);
    };
    for (auto it = left.rbegin(); it != left.rend(); ++it) push_unit(*it);
    push_unit(u);
    for (const Unit& w : right) push_unit(w);
    PatternMatch m;
    m.kind = PatternKind::two_necklace;
    m.k = static_cast<int>(left.size() + right.size() + 1);
    if (seq.back() < seq.front()) {
        // orient so that c1 < c2; inner pairs keep ascending order
        std::vector<VertexId> rev{seq.back()};
        for (int d = m.k - 1; d >= 0; --d) {
            rev.push_back(seq[1 + 3 * d]);
            rev.push_back(seq[2 + 3 * d]);
            rev.push_back(seq[3 * d]);
        }
        seq = rev;
    }
    m.vertices = seq;
    m.terminals = {seq.front(), seq.back()};
    return m;
}

void collect_necklaces(const Graph& g, const std::vector<VertexId>& inner_candidates,
                       std::vector<PatternMatch>& out) {
    std::set<std::vector<VertexId>> seen;
    for (VertexId i : inner_candidates) {
        if (!g.has_vertex(i) || g.degree(i) != 3) continue;
        for (VertexId j : g.distinct_neighbors(i)) {
            auto tips = closed_inner_pair(g, i, j);
            if (!tips) continue;
            Unit u{tips->first, std::min(i, j), std::max(i, j), tips->second};
            auto m = necklace_from_unit(g, u);
            if (m && seen.insert(m->vertices).second) out.push_back(*m);
        }
    }
}

// Canonical blossom labeling centred at b, if any.
std::optional<PatternMatch> blossom_at(const Graph& g, VertexId b, bool cubic_terminals) {
    if (g.degree(b) != 4) return std::nullopt;
    auto nb = sorted_nbrs(g, b);
    for (std::size_t q = 1; q < nb.size(); ++q)
        if (nb[q] == nb[q - 1] || nb[q] == b) return std::nullopt;
    for (VertexId a : nb)
        if (g.degree(a) != 3) return std::nullopt;
    // third neighbor of a given its partner
    auto third = [&](VertexId a, VertexId partner) -> VertexId {
        auto na = sorted_nbrs(g, a);
        std::vector<VertexId> rest;
        for (VertexId w : na)
            if (w != b && w != partner) rest.push_back(w);
        if (rest.size() != 1 || std::count(na.begin(), na.end(), b) != 1 ||
            std::count(na.begin(), na.end(), partner) != 1)
            return -1;
        return rest[0];
    };
    const std::array<std::array<int, 4>, 3> pairings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    std::optional<PatternMatch> best;
    for (const auto& p : pairings) {
        VertexId p1 = nb[p[0]], p2 = nb[p[1]], q1 = nb[p[2]], q2 = nb[p[3]];
        if (!g.adjacent(p1, p2) || !g.adjacent(q1, q2)) continue;
        VertexId tp1 = third(p1, p2), tp2 = third(p2, p1), tq1 = third(q1, q2), tq2 = third(q2, q1);
        if (tp1 < 0 || tp2 < 0 || tq1 < 0 || tq2 < 0) continue;
        // try every labeling; keep the lexicographically smallest valid one
        const std::array<std::array<VertexId, 4>, 4> orders{{
            {p1, p2, q1, q2}, {p2, p1, q2, q1}, {q1, q2, p1, p2}, {q2, q1, p2, p1}}};
        for (auto o : orders) {
            for (int flip = 0; flip < 2; ++flip) {
                VertexId a1 = o[0], a2 = o[1], a3 = flip ? o[3] : o[2], a4 = flip ? o[2] : o[3];
                VertexId c1 = third(a1, a2);
                VertexId c2 = third(a2, a1);
                if (third(a4, a3) != c1 || third(a3, a4) != c2 || c1 == c2) continue;
                std::set<VertexId> core{b, a1, a2, a3, a4};
                if (core.count(c1) || core.count(c2)) continue;
                if (cubic_terminals ? (g.degree(c1) != 3 || g.degree(c2) != 3)
                                    : (g.degree(c1) < 3 || g.degree(c2) < 3))
                    continue;
                PatternMatch m;
                m.kind = cubic_terminals ? PatternKind::two_blossom : PatternKind::two_terminal_blossom;
                m.vertices = {b, a1, a2, a3, a4, c1, c2};
                m.terminals = {c1, c2};
                if (!best || m.vertices < best->vertices) best = m;
            }
        }
    }
    return best;
}

std::vector<VertexId> ball(const Graph& g, const std::vector<VertexId>& seeds, int radius) {
    std::vector<int> dist(g.id_bound(), -1);
    std::vector<VertexId> frontier, out;
    for (VertexId s : seeds)
        if (g.has_vertex(s) && dist[s] < 0) {
            dist[s] = 0;
            frontier.push_back(s);
            out.push_back(s);
        }
    for (int r = 0; r < radius; ++r) {
        std::vector<VertexId> next;
        for (VertexId v : frontier)
            for (EdgeId e : g.incident(v)) {
                VertexId w = g.other(e, v);
                if (dist[w] < 0) {
                    dist[w] = r + 1;
                    next.push_back(w);
                    out.push_back(w);
                }
            }
        frontier.swap(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<PatternMatch> find_diamonds(const Graph& g) {
    std::vector<PatternMatch> out;
    for (VertexId i : g.vertices())
        for (VertexId j : g.distinct_neighbors(i)) {
            if (j <= i) continue;
            auto ni = g.distinct_neighbors(i), nj = g.distinct_neighbors(j);
            std::vector<VertexId> common;
            std::set_intersection(ni.begin(), ni.end(), nj.begin(), nj.end(), std::back_inserter(common));
            for (std::size_t a = 0; a < common.size(); ++a)
                for (std::size_t b = a + 1; b < common.size(); ++b) {
                    PatternMatch m;
                    m.kind = PatternKind::diamond;
                    m.vertices = {common[a], i, j, common[b]};
                    // terminals: vertices whose host degree exceeds their degree in the diamond
                    for (VertexId v : m.vertices) {
                        int dh = (v == i || v == j) ? 3 : 2;
                        if (g.degree(v) > dh) m.terminals.push_back(v);
                    }
                    out.push_back(m);
                }
        }
    return out;
}

std::vector<PatternMatch> find_cubic_diamonds(const Graph& g) {
    std::vector<PatternMatch> out;
    for (PatternMatch m : find_diamonds(g)) {
        VertexId x = m.vertices[0], y = m.vertices[3];
        if (g.adjacent(x, y)) continue;
        bool cubic = true;
        for (VertexId v : m.vertices) cubic = cubic && g.degree(v) == 3;
        if (!cubic) continue;
        m.kind = PatternKind::cubic_diamond;
        m.terminals = {x, y};
        out.push_back(m);
    }
    return out;
}

std::vector<PatternMatch> find_2necklaces(const Graph& g) {
    std::vector<PatternMatch> out;
    collect_necklaces(g, g.vertices(), out);
    std::sort(out.begin(), out.end(), [](const PatternMatch& a, const PatternMatch& b) { return a.vertices < b.vertices; });
    return out;
}

std::vector<PatternMatch> find_2blossoms(const Graph& g) {
    std::vector<PatternMatch> out;
    for (VertexId b : g.vertices())
        if (auto m = blossom_at(g, b, true)) out.push_back(*m);
    return out;
}

std::vector<PatternMatch> find_2terminal(const Graph& g, PatternKind kind) {
    std::vector<PatternMatch> out;
    if (kind == PatternKind::two_terminal_blossom) {
        for (VertexId b : g.vertices())
            if (auto m = blossom_at(g, b, false)) out.push_back(*m);
        return out;
    }
    if (kind != PatternKind::two_terminal_diamond)
        throw InvalidArgument("find_2terminal: kind must be a 2-terminal kind");
    for (VertexId i : g.vertices())
        for (VertexId j : g.distinct_neighbors(i)) {
            if (j <= i) continue;
            auto tips = closed_inner_pair(g, i, j);
            if (!tips || g.degree(tips->first) < 3 || g.degree(tips->second) < 3) continue;
            PatternMatch m;
            m.kind = PatternKind::two_terminal_diamond;
            m.vertices = {tips->first, i, j, tips->second};
            m.terminals = {tips->first, tips->second};
            out.push_back(m);
        }
    std::sort(out.begin(), out.end(), [](const PatternMatch& a, const PatternMatch& b) { return a.vertices < b.vertices; });
    return out;
}

std::vector<PatternMatch> find_forbidden_near(const Graph& g, const std::vector<VertexId>& seeds) {
    std::vector<PatternMatch> out;
    collect_necklaces(g, ball(g, seeds, 1), out);
    for (VertexId b : ball(g, seeds, 2))
        if (auto m = blossom_at(g, b, true)) out.push_back(*m);
    return out;
}

bool verify_match(const Graph& g, const PatternMatch& m) {
    for (VertexId v : m.vertices)
        if (!g.has_vertex(v)) return false;
    std::set<VertexId> distinct(m.vertices.begin(), m.vertices.end());
    if (distinct.size() != m.vertices.size()) return false;
    auto has = [&](VertexId a, VertexId b) { return g.multiplicity(a, b) == 1; };
    auto diamond_ok = [&](VertexId x, VertexId i, VertexId j, VertexId y) {
        return has(i, j) && has(x, i) && has(x, j) && has(y, i) && has(y, j);
    };
    switch (m.kind) {
        case PatternKind::diamond:
            return m.vertices.size() == 4 && diamond_ok(m.vertices[0], m.vertices[1], m.vertices[2], m.vertices[3]);
        case PatternKind::cubic_diamond: {
            if (m.vertices.size() != 4) return false;
            for (VertexId v : m.vertices)
                if (g.degree(v) != 3) return false;
            return diamond_ok(m.vertices[0], m.vertices[1], m.vertices[2], m.vertices[3]) &&
                   !g.adjacent(m.vertices[0], m.vertices[3]);
        }
        case PatternKind::two_terminal_diamond: {
            if (m.vertices.size() != 4) return false;
            VertexId x = m.vertices[0], i = m.vertices[1], j = m.vertices[2], y = m.vertices[3];
            return diamond_ok(x, i, j, y) && g.degree(i) == 3 && g.degree(j) == 3 && g.degree(x) >= 3 &&
                   g.degree(y) >= 3;
        }
        case PatternKind::necklace:
        case PatternKind::two_necklace: {
            const auto& s = m.vertices;
            if (m.k < 1 || static_cast<int>(s.size()) != 3 * m.k + 1) return false;
            std::vector<int> dn(g.id_bound(), 0);
            for (int d = 0; d < m.k; ++d) {
                VertexId x = s[3 * d], i = s[3 * d + 1], j = s[3 * d + 2], y = s[3 * d + 3];
                if (!diamond_ok(x, i, j, y)) return false;
                dn[x] += 2;
                dn[y] += 2;
                dn[i] += 3;
                dn[j] += 3;
            }
            if (m.kind == PatternKind::necklace) return true;
            for (std::size_t q = 1; q + 1 < s.size(); ++q)
                if (g.degree(s[q]) != dn[s[q]]) return false;
            return g.degree(s.front()) == 3 && g.degree(s.back()) == 3;
        }
        case PatternKind::blossom:
        case PatternKind::two_blossom:
        case PatternKind::two_terminal_blossom: {
            if (m.vertices.size() != 7) return false;
            auto [b, a1, a2, a3, a4, c1, c2] =
                std::array<VertexId, 7>{m.vertices[0], m.vertices[1], m.vertices[2], m.vertices[3],
                                        m.vertices[4], m.vertices[5], m.vertices[6]};
            bool wiring = has(b, a1) && has(b, a2) && has(b, a3) && has(b, a4) && has(a1, a2) && has(a3, a4) &&
                          has(c1, a1) && has(c1, a4) && has(c2, a2) && has(c2, a3);
            if (!wiring) return false;
            if (m.kind == PatternKind::blossom) return true;
            bool closed = g.degree(b) == 4 && g.degree(a1) == 3 && g.degree(a2) == 3 && g.degree(a3) == 3 &&
                          g.degree(a4) == 3;
            if (m.kind == PatternKind::two_blossom) return closed && g.degree(c1) == 3 && g.degree(c2) == 3;
            return closed && g.degree(c1) >= 3 && g.degree(c2) >= 3;
        }
    }
    return false;
}

InvariantVerdict check_invariant(const Graph& g) {
    InvariantVerdict v;
    Components cc = connected_components(g);
    if (cc.count() > 1) {
        for (int c = 0; c < cc.count(); ++c) {
            bool goober = false;
            for (VertexId x : cc.parts[c]) goober = goober || g.degree(x) <= 2;
            if (!goober) {
                v.ok = false;
                v.clause = 1;
                v.component = c;
                v.reason = "disconnected and a component has no goober";
                return v;
            }
        }
    }
    for (int c = 0; c < cc.count(); ++c) {
        Graph h = g.induced(cc.parts[c]);
        if (h.is_simple()) continue;
        bool k2e = h.num_vertices() == 2 && h.num_edges() == 2 && h.multiplicity(cc.parts[c][0], cc.parts[c][1]) == 2;
        if (!k2e) {
            v.ok = false;
            v.clause = 2;
            v.component = c;
            v.reason = "component is neither simple nor a K2+e";
            return v;
        }
    }
    auto necklaces = find_2necklaces(g);
    if (!necklaces.empty()) {
        v.ok = false;
        v.clause = 3;
        v.pattern = necklaces.front();
        v.reason = "contains a 2-necklace";
        return v;
    }
    auto blossoms = find_2blossoms(g);
    if (!blossoms.empty()) {
        v.ok = false;
        v.clause = 4;
        v.pattern = blossoms.front();
        v.reason = "contains a 2-blossom";
        return v;
    }
    return v;
}

namespace {
nlohmann::json match_json(const PatternMatch& m) {
    nlohmann::json j;
    j["kind"] = kind_name(m.kind);
    if (m.kind == PatternKind::necklace || m.kind == PatternKind::two_necklace) j["k"] = m.k;
    j["vertices"] = m.vertices;
    j["terminals"] = m.terminals;
    return j;
}
}  // namespace

std::string to_json(const PatternMatch& m) { return match_json(m).dump(); }

std::string to_json(const std::vector<PatternMatch>& ms) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : ms) arr.push_back(match_json(m));
    return arr.dump();
}

}  // namespace mlst
