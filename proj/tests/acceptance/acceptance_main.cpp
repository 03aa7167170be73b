// Acceptance checks. Each criterion prints exactly one PASS/FAIL line; the
// process exits non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "mlst/errors.hpp"
#include "mlst/generators.hpp"
#include "mlst/patterns.hpp"
#include "mlst/reductions.hpp"
#include "mlst/solver.hpp"
#include "mlst/structure.hpp"
#include "oracles.hpp"

using namespace mlst;

namespace {

// Pinned limits (seconds) and sample sizes.
constexpr double kLimitFast = 1.0;           // criteria 1, 2, 3
constexpr double kLimitFlowerbed = 600.0;    // criterion 4
constexpr double kLimitRing = 60.0;          // criterion 5
constexpr double kLimitLeafBound = 600.0;      // criterion 6
constexpr double kLimitEquivalence = 900.0;  // criterion 7
constexpr int kLeafBoundSamples = 200;
constexpr int kEquivalenceGraphs = 300;
constexpr int kShiftInstances = 100;
constexpr int kFuzzApplications = 500;
constexpr int kForcedCorpus = 2000;
constexpr int kForcedMaxL = 4;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome timed(double limit, const std::function<Outcome()>& body, double& elapsed) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    elapsed = seconds_since(t0);
    if (elapsed > limit) {
        o.pass = false;
        o.detail += "; over the time limit of " + std::to_string(limit) + " s";
    }
    return o;
}

Outcome g7_optimum() {
    int v = exact_max_leaves(g7()).leaves;
    return {v == 4, "exact optimum " + std::to_string(v) + ", expected 4"};
}

Outcome cube_optimum() {
    int v = exact_max_leaves(q3()).leaves;
    return {v == 4, "exact optimum " + std::to_string(v) + ", expected 4"};
}

Outcome g7_deletion() {
    Graph g = g7();
    int edges = 0, with_blossom = 0;
    for (auto [u, v] : g.edge_multiset()) {
        if (g.degree(u) != 4 || g.degree(v) != 4) continue;
        ++edges;
        Graph h = g;
        h.remove_edge_between(u, v);
        if (!find_2blossoms(h).empty()) ++with_blossom;
    }
    return {edges == 3 && with_blossom == 3, std::to_string(with_blossom) + " of " + std::to_string(edges) +
                                                 " deletions between degree-4 vertices yield a 2-blossom"};
}

Outcome flowerbed_bound() {
    Graph r2 = flowerbed(2);
    Verdict yes = fpt_decide(r2, 10, {true, 1});
    Verdict no = fpt_decide(r2, 11);
    bool witness_ok = yes.witness && is_spanning_tree(r2, *yes.witness) && count_leaves(*yes.witness) >= 10;
    std::ostringstream d;
    d << "n=" << r2.num_vertices() << ", k=10 -> " << (yes.yes ? "YES" : "NO") << " (witness "
      << (witness_ok ? "valid" : "invalid") << "), k=11 -> " << (no.yes ? "YES" : "NO") << ", subsets "
      << yes.stats.subsets_enumerated << "/" << no.stats.subsets_enumerated;
    return {yes.yes && !no.yes && witness_ok && r2.num_vertices() == 26, d.str()};
}

Outcome ring_bound() {
    Graph g = necklace_ring(3);
    int v = exact_max_leaves(g).leaves;
    return {v == 5 && g.num_vertices() == 12, "exact optimum " + std::to_string(v) + " at n=12, expected 5"};
}

Outcome leaf_bound() {
    int checked = 0, violations = 0, skipped = 0, cubicish = 0;
    std::mt19937_64 rng(20240611);
    for (int i = 0; checked < kLeafBoundSamples && i < 10 * kLeafBoundSamples; ++i) {
        int n = 6 + static_cast<int>(rng() % 9);
        int target = (i % 2 == 0) ? 3 : 2;
        Graph g;
        try {
            g = random_invariant_graph(n, target, rng());
        } catch (const CapacityError&) {
            ++skipped;
            continue;
        }
        if (!check_invariant(g).ok || !is_connected(g) || !g.is_simple()) return {false, "generator broke its contract"};
        int leaves = exact_max_leaves(g).leaves;
        if (leaves != oracle::max_leaves_by_cds(g)) return {false, "exact solver disagrees with the CDS oracle"};
        int n3 = g.count_degree_at_least(3);
        bool delta3 = g.min_degree() >= 3;
        cubicish += delta3;
        // leaves >= n3/3 + 4/3 (resp. + 2), compared as 3*leaves >= n3 + 4 (resp. + 6)
        if (3 * leaves < n3 + (delta3 ? 4 : 6)) ++violations;
        ++checked;
    }
    std::ostringstream d;
    d << checked << " graphs (" << cubicish << " with min degree >= 3), " << violations << " violations, " << skipped
      << " generator retries";
    return {checked == kLeafBoundSamples && violations == 0, d.str()};
}

Outcome oracle_equivalence(std::uint64_t& step4_runs, std::uint64_t& bound_breaks) {
    int graphs = 0, disagreements = 0, bad_witness = 0;
    long long queries = 0;
    std::mt19937_64 rng(77);
    for (; graphs < kEquivalenceGraphs; ++graphs) {
        int n = 2 + static_cast<int>(rng() % 11);
        Graph g = corpus::random_graph(n, rng);
        if (graphs % 3 == 0) g = corpus::subdivide_to(g, std::min(12, n + 3), rng);
        int opt = oracle::max_leaves_by_cds(g);
        for (int k = 1; k <= g.num_vertices(); ++k) {
            Verdict v = fpt_decide(g, k, {true, 1 + graphs % 3});
            ++queries;
            if (v.yes != (opt >= k)) ++disagreements;
            if (v.yes && (!v.witness || !is_spanning_tree(g, *v.witness) || count_leaves(*v.witness) < k))
                ++bad_witness;
            if (v.stats.decided_by == "step4" || v.stats.decided_by == "exhausted") {
                ++step4_runs;
                int kp = v.stats.k_after_preprocess;
                // k * C(3k, k) with k after preprocessing
                long double bound = kp;
                for (int i = 1; i <= kp; ++i) bound = bound * (2 * kp + i) / i;
                if (static_cast<long double>(v.stats.subsets_enumerated) > bound) ++bound_breaks;
            }
        }
    }
    std::ostringstream d;
    d << graphs << " graphs, " << queries << " (G,k) queries, " << disagreements << " disagreements, " << bad_witness
      << " invalid witnesses";
    return {disagreements == 0 && bad_witness == 0, d.str()};
}

Outcome parameter_rule_shift() {
    int instances = 0, violations = 0, applications = 0, blossoms = 0;
    std::mt19937_64 rng(4242);
    while (instances < kShiftInstances) {
        Graph g = corpus::random_with_two_terminal(14, rng);
        FptPreprocessResult red = fpt_preprocess(g, g.num_vertices());
        if (red.trace.empty()) continue;
        ++instances;
        int apps = static_cast<int>(red.trace.size());
        applications += apps;
        for (const auto& s : red.trace) blossoms += s.rule == RuleId::F2;
        if (oracle::max_leaves_by_cds(g) != oracle::max_leaves_by_cds(red.graph) + apps) ++violations;
    }
    std::ostringstream d;
    d << instances << " instances, " << applications << " applications (" << blossoms << " blossom), " << violations
      << " violations";
    return {violations == 0 && blossoms > 0, d.str()};
}

Outcome invariant_fuzz() {
    int applied = 0, violations = 0, graphs = 0;
    std::map<std::string, int> per_rule;
    std::mt19937_64 rng(99);
    for (int round = 0; applied < kFuzzApplications && round < 20000; ++round) {
        Graph g;
        int n = 6 + static_cast<int>(rng() % 15);
        try {
            if (round % 3 == 0) {
                g = random_invariant_graph(n, round % 2 ? 3 : 2, rng());
            } else {
                g = corpus::random_graph(n, rng);
                if (round % 3 == 2) g = corpus::subdivide_to(g, n + 4, rng);
            }
        } catch (const CapacityError&) {
            continue;
        }
        if (!g.is_simple() || !check_invariant(g).ok) continue;
        ++graphs;
        // apply one admissible match of every rule that has one, plus a full reduction
        for (int r = 0; r <= static_cast<int>(RuleId::R5); ++r) {
            for (const RuleMatch& m : find_matches(g, static_cast<RuleId>(r))) {
                if (!admissible(g, m).ok) continue;
                Graph h = g;
                apply(h, m);
                ++applied;
                ++per_rule[rule_name(m.rule)];
                if (!check_invariant(h).ok) ++violations;
                break;
            }
        }
        ReductionResult red = reduce_to_irreducible(g);
        Graph cur = g;
        for (const auto& step : red.trace) {
            replay(cur, step);
            ++applied;
            ++per_rule[rule_name(step.rule)];
            if (!check_invariant(cur).ok) ++violations;
        }
    }
    std::ostringstream d;
    d << applied << " applications on " << graphs << " graphs, " << violations << " violations; per rule:";
    for (auto& [name, count] : per_rule) d << " " << name << "=" << count;
    return {applied >= kFuzzApplications && violations == 0, d.str()};
}

Outcome forced_leaf_formula(std::uint64_t step4_runs_before, std::uint64_t& bound_breaks) {
    int graphs = 0, comparisons = 0, violations = 0, feasible = 0, bad_trees = 0;
    std::uint64_t step4_runs = step4_runs_before;
    std::mt19937_64 rng(1234567);
    while (graphs < kForcedCorpus) {
        int n = 3 + static_cast<int>(rng() % 9);
        Graph g = corpus::random_graph(n, rng);
        if (graphs % 2 == 1) g = corpus::subdivide_to(g, std::min(11, n + 1 + static_cast<int>(rng() % 5)), rng);
        if (g.count_degree_at_least(3) == 0) continue;
        ++graphs;
        SuppressedGraph s = suppress(g);
        oracle::ForcedLeafTable table(g);
        std::vector<VertexId> high;
        for (VertexId v : g.vertices())
            if (g.degree(v) >= 3) high.push_back(v);
        const int h = static_cast<int>(high.size());
        for (std::uint32_t mask = 0; mask < (1u << h); ++mask) {
            if (std::popcount(mask) > kForcedMaxL) continue;
            std::vector<VertexId> l;
            for (int i = 0; i < h; ++i)
                if (mask >> i & 1) l.push_back(high[i]);
            ForcedLeafQuery q{&s, l, 0};
            auto got = achievable_leaves(q);
            auto want = table.value(l);
            ++comparisons;
            if (got != want) {
                ++violations;
                continue;
            }
            if (!want) continue;
            ++feasible;
            auto tree = forced_leaf_tree(q);
            bool ok = tree && is_spanning_tree(g, *tree);
            if (ok) {
                std::map<VertexId, int> deg;
                for (auto [u, v] : *tree) ++deg[u], ++deg[v];
                int value = static_cast<int>(l.size());
                for (VertexId v : l) ok = ok && deg[v] == 1;
                for (VertexId v : g.vertices()) value += deg[v] == 1 && g.degree(v) <= 2;
                ok = ok && value == *want;
            }
            bad_trees += !ok;
        }
        // subset counter on the same graph
        for (int k = 3; k <= g.num_vertices(); ++k) {
            Verdict v = fpt_decide(g, k);
            if (v.stats.decided_by != "step4" && v.stats.decided_by != "exhausted") continue;
            ++step4_runs;
            int kp = v.stats.k_after_preprocess;
            long double bound = kp;
            for (int i = 1; i <= kp; ++i) bound = bound * (2 * kp + i) / i;
            if (static_cast<long double>(v.stats.subsets_enumerated) > bound) ++bound_breaks;
        }
    }
    std::ostringstream d;
    d << graphs << " graphs, " << comparisons << " forced sets (" << feasible << " feasible), " << violations
      << " value mismatches, " << bad_trees << " bad witness trees; subset counter within k*C(3k,k) on "
      << step4_runs - bound_breaks << "/" << step4_runs << " enumerations";
    return {violations == 0 && bad_trees == 0 && bound_breaks == 0 && feasible > 0, d.str()};
}

}  // namespace

int main() {
    std::uint64_t step4_runs = 0, bound_breaks = 0;
    struct Criterion {
        int id;
        const char* name;
        double limit;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {1, "G7 optimum is 4", kLimitFast, g7_optimum},
        {2, "cube optimum is 4", kLimitFast, cube_optimum},
        {3, "G7 deletion yields 2-blossoms", kLimitFast, g7_deletion},
        {4, "flowerbed R_2 optimum is 10", kLimitFlowerbed, flowerbed_bound},
        {5, "necklace ring of 3 has optimum 5", kLimitRing, ring_bound},
        {6, "leaf bound on invariant graphs", kLimitLeafBound, leaf_bound},
        {7, "FPT agrees with the exact oracle", kLimitEquivalence,
         [&] { return oracle_equivalence(step4_runs, bound_breaks); }},
        {8, "2-terminal rules shift the optimum by one", 1e9, parameter_rule_shift},
        {9, "rules preserve the invariant", 1e9, invariant_fuzz},
        {10, "forced-leaf formula matches exhaustive search", 1e9,
         [&] { return forced_leaf_formula(step4_runs, bound_breaks); }},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        double elapsed = 0;
        Outcome o = timed(c.limit, c.run, elapsed);
        failed += !o.pass;
        std::printf("criterion %2d %s: %s (%s; %.3f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    elapsed);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
