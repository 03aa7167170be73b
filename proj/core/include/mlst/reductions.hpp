#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlst/graph.hpp"

namespace mlst {

enum class RuleId { L1, L2, L3, L4, L5, L6, L7, R1, R2, R3, R4, R5, F1, F2 };

std::string rule_name(RuleId r);
std::optional<RuleId> parse_rule(const std::string& name);
bool is_fpt_rule(RuleId r);

/// A structural occurrence of a rule's left-hand side. Role order per rule
/// is documented next to each matcher in reductions.cpp.
struct RuleMatch {
    RuleId rule = RuleId::L1;
    std::vector<VertexId> roles;
};

/// One applied rewrite, recorded with enough detail to replay and invert it.
struct ReductionStep {
    RuleId rule = RuleId::L1;
    std::vector<VertexId> roles;
    std::vector<VertexId> removed_vertices;
    std::vector<VertexId> added_vertices;
    EdgeList removed_edges;  // every edge of the pre-graph that is absent afterwards
    EdgeList added_edges;
    int delta_n3 = 0;  // n3(before) - n3(after)
    int delta_cc = 0;  // cc(after) - cc(before)
    int delta_k = 0;   // 1 for the parameter rules, else 0
};

struct Admissibility {
    bool ok = false;
    std::string reason;
};

/// Structural matches of one rule, in canonical (lexicographic role) order.
std::vector<RuleMatch> find_matches(const Graph& g, RuleId rule);

/// Checks the rule-specific conditions, the multi-edge restrictions and, for
/// the high-degree rules, that no new 2-necklace or 2-blossom appears.
/// Throws ContractViolation if `m` does not fit the rule's template.
Admissibility admissible(const Graph& g, const RuleMatch& m);

/// Applies an admissible match in place. Throws ContractViolation carrying the
/// rejection reason if the match is not admissible.
ReductionStep apply(Graph& g, const RuleMatch& m);

/// Re-applies / undoes a recorded step on a graph in the matching state.
void replay(Graph& g, const ReductionStep& step);
void unreplay(Graph& g, const ReductionStep& step);

struct ReductionResult {
    Graph graph;
    std::vector<ReductionStep> trace;
};

/// Applies low- then high-degree rules (lowest id, smallest match first)
/// until none is admissible. The input must satisfy the invariant.
ReductionResult reduce_to_irreducible(const Graph& g);

/// First admissible low/high-degree match, if any.
std::optional<RuleMatch> first_admissible(const Graph& g);

/// Turns a spanning forest of the post-graph (covering its non-trivial
/// components) into a spanning forest of `pre` with as many leaves as possible,
/// changing only edges inside the rewritten region.
EdgeList reconstruct_tree(const Graph& pre, const ReductionStep& step, const EdgeList& post_forest);

/// Applies reconstruct_tree through a whole trace, last step first. `reduced`
/// is the graph after the final step.
EdgeList reconstruct_through(const Graph& reduced, const std::vector<ReductionStep>& trace, EdgeList forest);

struct FptPreprocessResult {
    Graph graph;
    int k = 0;
    std::vector<ReductionStep> trace;
};

/// Exhaustively applies F1 (2-terminal diamonds) and F2 (2-terminal blossoms),
/// decrementing k once per application.
FptPreprocessResult fpt_preprocess(const Graph& g, int k);

std::string to_json_line(const ReductionStep& step);
ReductionStep step_from_json(const std::string& line);

}  // namespace mlst
