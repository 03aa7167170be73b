#pragma once

#include <cstdint>
#include <string>

#include "mlst/graph.hpp"

namespace mlst {

// Vertex numbering of the fixed families (all ids are 1-based):
//   blossom:  b=1, a1..a4=2..5, c1=6, c2=7
//   g7:       blossom plus c1-c2 and a1-a4
//   flower:   blossom plus f1=8, f2=9, h=10, s=11, g1=12, g2=13
//   flowerbed(i): flower j (0-based) uses ids 13j+1 .. 13j+13
//   necklace(k):  tip t_d = 3d+1, inner pair 3d+2, 3d+3; c1 = 1, c2 = 3k+1
//   necklace-ring(k): diamond d uses 4d+1 (left tip), 4d+2, 4d+3 (inner), 4d+4 (right tip)
namespace blossom_role {
constexpr VertexId b = 1, a1 = 2, a2 = 3, a3 = 4, a4 = 5, c1 = 6, c2 = 7;
constexpr VertexId f1 = 8, f2 = 9, h = 10, s = 11, g1 = 12, g2 = 13;
}  // namespace blossom_role

Graph blossom();
Graph g7();
Graph q3();
Graph flower();
Graph flowerbed(int i);
Graph necklace(int k);
Graph necklace_ring(int k);

/// Connected simple random graph: a random spanning tree plus each other pair
/// independently with probability p. Deterministic per seed.
Graph random_connected_graph(int n, double p, std::uint64_t seed);

/// Connected simple graph that satisfies the invariant. With
/// min_degree_target >= 3 the minimum degree is at least 3, otherwise it is
/// at most 2. Forbidden structures are repaired by degree-preserving edge swaps.
/// Throws CapacityError when the sampling budget runs out.
Graph random_invariant_graph(int n, int min_degree_target, std::uint64_t seed);

enum class Family { necklace, necklace_ring, blossom, g7, q3, flower, flowerbed, random };

struct FamilySpec {
    Family family = Family::q3;
    int param = 0;           // k for necklaces, i for flowerbeds, n for random
    int min_degree = 3;      // random only
    std::uint64_t seed = 0;  // random only
};

Family parse_family(const std::string& name);
Graph generate(const FamilySpec& spec);

}  // namespace mlst
