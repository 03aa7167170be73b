#include "mlst/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "mlst/errors.hpp"

namespace mlst {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

long long to_int(const std::string& tok, int line) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    return value;
}

}  // namespace

Graph parse_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool have_header = false;
    long long n = 0, m = 0, seen = 0;
    Graph g;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty() || tok[0] == "c") continue;
        if (tok[0] == "p") {
            if (have_header) throw ParseError(lineno, "duplicate header");
            // tolerate the classic DIMACS form "p edge n m"
            std::size_t at = (tok.size() == 4) ? 2 : 1;
            if (tok.size() - at != 2) throw ParseError(lineno, "header must be 'p <n> <m>'");
            n = to_int(tok[at], lineno);
            m = to_int(tok[at + 1], lineno);
            if (n < 0 || m < 0) throw ParseError(lineno, "negative size in header");
            g = Graph(static_cast<int>(n));
            have_header = true;
        } else if (tok[0] == "e") {
            if (!have_header) throw ParseError(lineno, "edge before header");
            if (tok.size() != 3) throw ParseError(lineno, "edge line must be 'e <u> <v>'");
            long long u = to_int(tok[1], lineno), v = to_int(tok[2], lineno);
            if (u < 1 || u > n || v < 1 || v > n)
                throw RangeError("line " + std::to_string(lineno) + ": endpoint out of range 1.." +
                                 std::to_string(n));
            if (u == v) throw ParseError(lineno, "loops are not allowed in input graphs");
            if (++seen > m) throw ParseError(lineno, "more edges than announced in header");
            g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
        } else {
            throw ParseError(lineno, "unknown line type '" + tok[0] + "'");
        }
    }
    if (!have_header) throw ParseError(lineno, "missing header");
    if (seen != m)
        throw ParseError(lineno, "header announces " + std::to_string(m) + " edges, found " + std::to_string(seen));
    return g;
}

Graph parse_graph(const std::string& text) {
    std::istringstream ss(text);
    return parse_graph(ss);
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot open '" + path + "'");
    return parse_graph(f);
}

std::string write_graph(const Graph& g) {
    std::vector<int> index(g.id_bound(), 0);
    int next = 0;
    for (VertexId v : g.vertices()) index[v] = ++next;
    std::ostringstream out;
    out << "p " << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (EdgeId e : g.edge_ids()) out << "e " << index[g.edge(e).u] << ' ' << index[g.edge(e).v] << '\n';
    return out.str();
}

std::string to_dot(const Graph& g, const std::string& name) {
    std::ostringstream out;
    out << "graph " << name << " {\n";
    for (VertexId v : g.vertices()) out << "  " << v << ";\n";
    for (EdgeId e : g.edge_ids()) out << "  " << g.edge(e).u << " -- " << g.edge(e).v << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace mlst
