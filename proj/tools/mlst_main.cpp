#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlst/errors.hpp"
#include "mlst/generators.hpp"
#include "mlst/io.hpp"
#include "mlst/patterns.hpp"
#include "mlst/potential.hpp"
#include "mlst/reductions.hpp"
#include "mlst/solver.hpp"
#include "mlst/structure.hpp"

namespace {

using namespace mlst;
using nlohmann::json;

constexpr const char* kVersion = "mlst 0.1.0 (graph format 1, trace format 1)";

// Exit codes.
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

Graph load(const std::string& path) {
    if (path == "-") return parse_graph(std::cin);
    return read_graph_file(path);
}

json edges_json(const EdgeList& edges) {
    json a = json::array();
    for (auto [u, v] : edges) a.push_back({u, v});
    return a;
}

// A spanning tree in the input format, so it can be parsed back as a graph.
std::string tree_text(const Graph& g, const EdgeList& tree) {
    std::ostringstream out;
    out << "p " << g.num_vertices() << " " << tree.size() << "\n";
    for (auto [u, v] : tree) out << "e " << u << " " << v << "\n";
    return out.str();
}

struct SolveArgs {
    std::string input;
    int k = 0;
    bool witness = false;
    bool stats = false;
    int workers = 1;
};

int run_solve(const SolveArgs& a, bool as_json) {
    Graph g = load(a.input);
    Verdict v = fpt_decide(g, a.k, {a.witness, a.workers});
    if (as_json) {
        json j{{"k", a.k}, {"answer", v.yes ? "YES" : "NO"}};
        if (a.witness && v.witness) j["witness"] = edges_json(*v.witness);
        if (a.stats) j["stats"] = json::parse(to_json(v.stats));
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (v.yes ? "YES" : "NO") << "\n";
        if (a.witness && v.witness) std::cout << tree_text(g, *v.witness);
        if (a.stats) std::cout << to_json(v.stats) << "\n";
    }
    return v.yes ? kOk : kNo;
}

struct MaximizeArgs {
    std::string input;
    bool exact = false;
    bool heuristic = false;
};

int run_maximize(const MaximizeArgs& a, bool as_json) {
    Graph g = load(a.input);
    EdgeList tree;
    int leaves = 0;
    if (a.heuristic) {
        GreedyResult r = greedy_spanning_tree(g);
        tree = r.tree;
        leaves = r.leaves;
    } else {
        ExactResult r = exact_max_leaves(g);
        tree = r.tree;
        leaves = r.leaves;
    }
    const int n3 = g.count_degree_at_least(3);
    // Bound n3/3 + 4/3 compared in thirds.
    const bool met = 3 * leaves >= n3 + 4;
    if (as_json) {
        json j{{"method", a.heuristic ? "heuristic" : "exact"},
               {"leaves", leaves},
               {"n3", n3},
               {"bound", (n3 + 4) / 3.0},
               {"bound_thirds", n3 + 4},
               {"met", met},
               {"edges", edges_json(tree)}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "leaves " << leaves << "\n";
        std::cout << "c bound n3/3+4/3 = " << n3 + 4 << "/3, " << (met ? "met" : "not met") << "\n";
        std::cout << tree_text(g, tree);
    }
    return kOk;
}

struct ReduceArgs {
    std::string input;
    std::string trace_out;
    std::string replay_in;
    int fpt_k = 0;
};

std::vector<ReductionStep> read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file '" + path + "'");
    std::vector<ReductionStep> steps;
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) steps.push_back(step_from_json(line));
    return steps;
}

int run_reduce(const ReduceArgs& a, bool as_json) {
    Graph g = load(a.input);
    std::vector<ReductionStep> trace;
    Graph out;
    int k_after = 0;
    if (!a.replay_in.empty()) {
        trace = read_trace(a.replay_in);
        out = g;
        for (const auto& s : trace) replay(out, s);
    } else if (a.fpt_k > 0) {
        FptPreprocessResult r = fpt_preprocess(g, a.fpt_k);
        out = std::move(r.graph);
        trace = std::move(r.trace);
        k_after = r.k;
    } else {
        ReductionResult r = reduce_to_irreducible(g);
        out = std::move(r.graph);
        trace = std::move(r.trace);
    }
    if (!a.trace_out.empty()) {
        std::ofstream t(a.trace_out);
        if (!t) throw Error("cannot write trace file '" + a.trace_out + "'");
        for (const auto& s : trace) t << to_json_line(s) << "\n";
    }
    if (as_json) {
        json steps = json::array();
        for (const auto& s : trace) steps.push_back(json::parse(to_json_line(s)));
        json j{{"steps", steps}, {"n", out.num_vertices()}, {"m", out.num_edges()}, {"graph", write_graph(out)}};
        if (a.fpt_k > 0) j["k"] = k_after;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "c " << trace.size() << " reduction steps";
        if (a.fpt_k > 0) std::cout << ", k now " << k_after;
        std::cout << "\n" << write_graph(out);
    }
    return kOk;
}

int run_detect(const std::string& input, const std::string& pattern, bool as_json) {
    auto kind = parse_kind(pattern);
    if (!kind) throw InvalidArgument("unknown pattern '" + pattern + "'");
    Graph g = load(input);
    std::vector<PatternMatch> ms;
    switch (*kind) {
        case PatternKind::diamond: ms = find_diamonds(g); break;
        case PatternKind::cubic_diamond: ms = find_cubic_diamonds(g); break;
        case PatternKind::two_necklace: ms = find_2necklaces(g); break;
        case PatternKind::two_blossom: ms = find_2blossoms(g); break;
        case PatternKind::two_terminal_diamond:
        case PatternKind::two_terminal_blossom: ms = find_2terminal(g, *kind); break;
        default: throw InvalidArgument("no detector for pattern '" + pattern + "'");
    }
    if (as_json) {
        std::cout << to_json(ms) << "\n";
        return kOk;
    }
    for (const auto& m : ms) {
        std::cout << kind_name(m.kind);
        if (m.k) std::cout << " k=" << m.k;
        std::cout << " vertices";
        for (VertexId v : m.vertices) std::cout << " " << v;
        std::cout << " terminals";
        for (VertexId v : m.terminals) std::cout << " " << v;
        std::cout << "\n";
    }
    std::cout << "c " << ms.size() << " matches\n";
    return kOk;
}

int run_suppress(const std::string& input, bool as_json) {
    Graph g = load(input);
    SuppressedGraph s = suppress(g);
    if (as_json) {
        json edges = json::array();
        for (const auto& e : s.edges)
            edges.push_back({{"u", e.u}, {"v", e.v}, {"internal", e.internal}, {"cost", e.cost}, {"path", e.path}});
        std::cout << json{{"vertices", s.vertices}, {"edges", edges}}.dump() << "\n";
        return kOk;
    }
    std::cout << "c " << s.vertices.size() << " vertices, " << s.edges.size() << " edges; s <u> <v> <internal> <cost>\n";
    for (const auto& e : s.edges) std::cout << "s " << e.u << " " << e.v << " " << e.internal << " " << e.cost << "\n";
    return kOk;
}

struct GenerateArgs {
    std::string family;
    int param = 0;
    std::uint64_t seed = 0;
    int min_degree = 3;
    std::string output;
    bool dot = false;
};

int run_generate(const GenerateArgs& a) {
    FamilySpec spec;
    spec.family = parse_family(a.family);
    spec.param = a.param;
    spec.seed = a.seed;
    spec.min_degree = a.min_degree;
    Graph g = generate(spec);
    std::string text = a.dot ? to_dot(g, a.family) : write_graph(g);
    if (a.output.empty() || a.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(a.output);
        if (!out) throw Error("cannot write '" + a.output + "'");
        out << text;
    }
    return kOk;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

CheckResult check_g7() {
    Graph g = g7();
    int best = exact_max_leaves(g).leaves;
    int deletions = 0, blossoms = 0;
    for (auto [u, v] : g.edge_multiset()) {
        if (g.degree(u) != 4 || g.degree(v) != 4) continue;
        ++deletions;
        Graph h = g;
        h.remove_edge_between(u, v);
        blossoms += !find_2blossoms(h).empty();
    }
    std::ostringstream d;
    d << "optimum " << best << ", " << blossoms << "/" << deletions << " deletions give a 2-blossom";
    return {"g7", best == 4 && deletions == 3 && blossoms == 3, d.str()};
}

CheckResult check_q3() {
    int best = exact_max_leaves(q3()).leaves;
    return {"q3", best == 4, "optimum " + std::to_string(best)};
}

CheckResult check_flowerbed() {
    Graph g = flowerbed(2);
    bool yes10 = fpt_decide(g, 10).yes;
    bool yes11 = fpt_decide(g, 11).yes;
    std::string d = std::string("k=10 ") + (yes10 ? "YES" : "NO") + ", k=11 " + (yes11 ? "YES" : "NO");
    return {"flowerbed", yes10 && !yes11, d};
}

CheckResult check_leaf_bound_sample(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    int checked = 0, violations = 0;
    for (int i = 0; checked < samples && i < 10 * samples; ++i) {
        int n = 6 + static_cast<int>(rng() % 9);
        Graph g;
        try {
            g = random_invariant_graph(n, i % 2 ? 2 : 3, rng());
        } catch (const CapacityError&) {
            continue;
        }
        int leaves = exact_max_leaves(g).leaves;
        int n3 = g.count_degree_at_least(3);
        int slack = g.min_degree() >= 3 ? 4 : 6;
        violations += 3 * leaves < n3 + slack;
        ++checked;
    }
    std::ostringstream d;
    d << checked << " graphs, " << violations << " violations";
    return {"theorem1-sample", checked == samples && violations == 0, d.str()};
}

int run_verify(std::vector<std::string> names, int samples, std::uint64_t seed, bool as_json) {
    if (names.empty()) names = {"g7", "q3", "flowerbed", "theorem1-sample"};
    std::vector<CheckResult> results;
    for (const auto& n : names) {
        if (n == "g7") results.push_back(check_g7());
        else if (n == "q3") results.push_back(check_q3());
        else if (n == "flowerbed") results.push_back(check_flowerbed());
        else if (n == "theorem1-sample") results.push_back(check_leaf_bound_sample(samples, seed));
        else throw InvalidArgument("unknown check '" + n + "'");
    }
    bool all = true;
    json arr = json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        if (as_json)
            arr.push_back({{"check", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        else
            std::cout << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail << ")\n";
    }
    if (as_json) std::cout << json{{"checks", arr}, {"pass", all}}.dump() << "\n";
    return all ? kOk : kNo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximum leaf spanning trees: exact, parameterized and heuristic solvers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    bool as_json = false;
    app.add_flag("--json", as_json, "Emit a single JSON document");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Decide whether a spanning tree with at least k leaves exists");
    solve->add_option("-k", solve_args.k, "Leaf target")->required()->check(CLI::PositiveNumber);
    solve->add_option("input", solve_args.input, "Graph file, or - for stdin")->required();
    solve->add_flag("--witness", solve_args.witness, "Print a witness tree on YES");
    solve->add_flag("--stats", solve_args.stats, "Print solver statistics as JSON");
    solve->add_option("--workers", solve_args.workers, "Worker threads for the subset enumeration")
        ->check(CLI::Range(1, 256));
    solve->add_flag("--json", as_json, "Emit a single JSON document");

    MaximizeArgs max_args;
    auto* maximize = app.add_subcommand("maximize", "Find a spanning tree with many leaves");
    auto* exact_flag = maximize->add_flag("--exact", max_args.exact, "Exact optimum (default)");
    maximize->add_flag("--heuristic", max_args.heuristic, "Potential-guided greedy tree")->excludes(exact_flag);
    maximize->add_option("input", max_args.input, "Graph file, or - for stdin")->required();
    maximize->add_flag("--json", as_json, "Emit a single JSON document");

    ReduceArgs red_args;
    auto* reduce = app.add_subcommand("reduce", "Apply reduction rules until none is admissible");
    reduce->add_option("input", red_args.input, "Graph file, or - for stdin")->required();
    reduce->add_option("--trace", red_args.trace_out, "Write the applied steps as JSON lines");
    auto* replay_opt = reduce->add_option("--replay", red_args.replay_in, "Replay a recorded trace instead");
    reduce->add_option("--fpt", red_args.fpt_k, "Apply only the parameter rules, starting from this k")
        ->check(CLI::PositiveNumber)
        ->excludes(replay_opt);
    reduce->add_flag("--json", as_json, "Emit a single JSON document");

    std::string detect_input, pattern;
    auto* detect = app.add_subcommand("detect", "List occurrences of a pattern");
    detect->add_option("--pattern", pattern, "diamond, cubic-diamond, 2-necklace, 2-blossom, 2-terminal-diamond, "
                                             "2-terminal-blossom")
        ->required();
    detect->add_option("input", detect_input, "Graph file, or - for stdin")->required();
    detect->add_flag("--json", as_json, "Emit a single JSON document");

    std::string suppress_input;
    auto* suppress_cmd = app.add_subcommand("suppress", "Print the graph with degree-2 vertices suppressed");
    suppress_cmd->add_option("input", suppress_input, "Graph file, or - for stdin")->required();
    suppress_cmd->add_flag("--json", as_json, "Emit a single JSON document");

    GenerateArgs gen_args;
    auto* generate_cmd = app.add_subcommand("generate", "Write a named graph family");
    generate_cmd->add_option("--family", gen_args.family, "necklace, necklace-ring, blossom, g7, q3, flower, "
                                                          "flowerbed, random")
        ->required();
    generate_cmd->add_option("--param", gen_args.param, "k for necklaces, i for flowerbeds, n for random");
    generate_cmd->add_option("--seed", gen_args.seed, "Seed for random graphs");
    generate_cmd->add_option("--min-degree", gen_args.min_degree, "Random only: 3 for min degree >= 3, else <= 2");
    generate_cmd->add_option("-o,--output", gen_args.output, "Output file (default stdout)");
    generate_cmd->add_flag("--dot", gen_args.dot, "Write Graphviz instead of the graph format");

    std::vector<std::string> checks;
    int samples = 50;
    std::uint64_t verify_seed = 1;
    auto* verify = app.add_subcommand("verify", "Run named checks: g7, q3, flowerbed, theorem1-sample");
    verify->add_option("checks", checks, "Checks to run (default: all)");
    verify->add_option("--samples", samples, "Graphs for theorem1-sample")->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "Seed for theorem1-sample");
    verify->add_flag("--json", as_json, "Emit a single JSON document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve) return run_solve(solve_args, as_json);
        if (*maximize) return run_maximize(max_args, as_json);
        if (*reduce) return run_reduce(red_args, as_json);
        if (*detect) return run_detect(detect_input, pattern, as_json);
        if (*suppress_cmd) return run_suppress(suppress_input, as_json);
        if (*generate_cmd) return run_generate(gen_args);
        if (*verify) return run_verify(checks, samples, verify_seed, as_json);
    } catch (const std::exception& e) {
        std::cerr << "mlst: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
