// Builders for the two hard instance families used as adversarial inputs:
// a bit-gadget family whose replacement distances encode set intersection
// across a narrow tree cut, and a constant-diameter family whose second
// simple shortest path distances reveal one side's input bits. Each build
// verifies its distance claims against the brute-force oracles.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dso/graph.hpp"

namespace dso {

struct DisjointnessInstance {
  // bits[i][j] for the tree family (k x q); bits[i][0] for the flat family
  std::vector<std::vector<char>> bits_a, bits_b;
  bool disjoint() const;
  static DisjointnessInstance random(int k, int q, std::uint64_t seed,
                                     bool with_b);
};

struct Fig1Build {
  Graph graph;
  int k = 0, q = 0, ell = 0;
  std::vector<VertexId> a, b;          // a_i, b_i
  std::vector<VertexId> star_path;     // detour path, ell vertices
  std::vector<std::vector<VertexId>> bit_paths;  // q paths, ell+1 vertices
  std::vector<VertexId> leaves;        // tree leaves u_1..u_ell
  std::vector<int> star_edges;         // edge ids along the detour path
  DisjointnessInstance bits;
};

// Balanced binary tree over ell leaves, q bit paths, one detour path, and
// 2k endpoint vertices wired per the input bits. Throws GraphError when
// k > n/2 after sizing.
Fig1Build build_fig1(int k, int q, int ell, const DisjointnessInstance& bits);

struct Fig2Build {
  Graph graph;
  int n_bits = 0;
  int stretch = 1;
  bool directed = false;
  std::vector<VertexId> a;  // a_1..a_n
  VertexId c = -1, c_prime = -1, p = -1, q = -1, hub = -1;
  std::vector<char> bits_a;
};

// Constant-diameter second-path family; with stretch > 1 the bit gap grows
// from {3, >=5} to {k+2, >=3k+2}. The directed variant drops all second
// paths for zero bits. Exactly two links cross the cut between the a-side
// and the p/q-side.
Fig2Build build_fig2(int n_bits, const std::vector<char>& bits_a, int stretch,
                     bool directed = false);

struct ClaimReport {
  struct Claim {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Claim> claims;
  bool all_pass() const;
};

ClaimReport verify_fig1_claims(const Fig1Build& b);
ClaimReport verify_fig2_claims(const Fig2Build& b);

// JSON-lines manifest of named vertices and expected claims.
void write_fig1_manifest(const Fig1Build& b, const ClaimReport& r,
                         std::ostream& os);
void write_fig2_manifest(const Fig2Build& b, const ClaimReport& r,
                         std::ostream& os);

}  // namespace dso
