#pragma once

#include <iosfwd>
#include <string>

#include "mlst/graph.hpp"

namespace mlst {

/// Reads the text graph format:
///   c <comment>
///   p <n> <m>
///   e <u> <v>     (m lines, 1-based ids)
/// Parallel edges are accepted, loops are rejected.
Graph parse_graph(std::istream& in);
Graph parse_graph(const std::string& text);
Graph read_graph_file(const std::string& path);

/// Writes the same format. Graphs with holes in their id range are
/// renumbered densely in ascending id order.
std::string write_graph(const Graph& g);

/// Graphviz rendering: one node per vertex, one edge line per edge copy.
std::string to_dot(const Graph& g, const std::string& name = "G");

}  // namespace mlst
