#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlst/graph.hpp"

namespace mlst {

enum class PatternKind {
    diamond,
    cubic_diamond,
    necklace,
    two_necklace,
    blossom,
    two_blossom,
    two_terminal_diamond,
    two_terminal_blossom,
};

/// A located structure. Vertex order by kind:
///  - diamonds: (tip, inner, inner, tip), inner pair ascending, tips ascending
///  - 2-necklace N_k: c1, then per diamond its inner pair and the next tip; ends with c2
///  - blossoms: (b, a1, a2, a3, a4, c1, c2) with the canonical wiring
///    b-a1 b-a2 b-a3 b-a4 a1-a2 a3-a4 c1-a1 c1-a4 c2-a2 c2-a3
struct PatternMatch {
    PatternKind kind = PatternKind::diamond;
    int k = 0;  // number of diamonds for necklace kinds, otherwise 0
    std::vector<VertexId> vertices;
    std::vector<VertexId> terminals;

    bool operator==(const PatternMatch&) const = default;
};

std::string kind_name(PatternKind kind);
std::optional<PatternKind> parse_kind(const std::string& name);

/// Every K4-minus-an-edge subgraph (not necessarily induced).
std::vector<PatternMatch> find_diamonds(const Graph& g);
/// Induced diamonds whose four vertices all have degree 3 in G.
std::vector<PatternMatch> find_cubic_diamonds(const Graph& g);
/// Diamond necklaces whose only terminals c1, c2 have degree 3 in G.
std::vector<PatternMatch> find_2necklaces(const Graph& g);
/// Blossoms whose only terminals c1, c2 have degree 3 in G.
std::vector<PatternMatch> find_2blossoms(const Graph& g);
/// 2-terminal diamonds or blossoms: the two structure-degree-2 vertices are
/// the only terminals and may have any host degree above 2.
/// `kind` must be two_terminal_diamond or two_terminal_blossom.
std::vector<PatternMatch> find_2terminal(const Graph& g, PatternKind kind);

/// 2-necklaces and 2-blossoms that contain at least one of the seed vertices.
std::vector<PatternMatch> find_forbidden_near(const Graph& g, const std::vector<VertexId>& seeds);

/// Re-checks a match against its definition edge by edge.
bool verify_match(const Graph& g, const PatternMatch& m);

struct InvariantVerdict {
    bool ok = true;
    /// 0 when ok; otherwise 1 = disconnected without goober, 2 = non-simple
    /// component other than K2+e, 3 = 2-necklace, 4 = 2-blossom.
    int clause = 0;
    std::string reason;
    int component = -1;  // witness for clauses 1 and 2 (index in connected_components)
    std::optional<PatternMatch> pattern;  // witness for clauses 3 and 4
};

InvariantVerdict check_invariant(const Graph& g);

std::string to_json(const PatternMatch& m);
std::string to_json(const std::vector<PatternMatch>& ms);

}  // namespace mlst
