// Centralized brute-force ground truth for everything the simulated
// algorithms compute. Deliberately coded without reusing the Dijkstra in
// graph.cpp so the two act as genuine cross-checks.
#pragma once

#include <vector>

#include "dso/graph.hpp"

namespace dso::oracle {

// Predecessor choice among ties when reconstructing a shortest path.
enum class TieRule { kSmallestId, kLargestId };

// Shortest path distances from s, optionally on a filtered edge set.
std::vector<Dist> sp(const Graph& g, VertexId s,
                     const std::vector<char>* edge_alive = nullptr);

struct RefTree {
  std::vector<Dist> dist;
  std::vector<int> hops;
  std::vector<VertexId> parent;
};

// Independent re-derivation of the deterministic shortest-path tree
// (lexicographic (dist, hops), predecessor chosen per rule).
RefTree sp_tree_ref(const Graph& g, VertexId s,
                    TieRule rule = TieRule::kSmallestId,
                    const std::vector<char>* edge_alive = nullptr);

// Replacement path distance d(s,t,e).
Dist rp(const Graph& g, VertexId s, VertexId t, int edge_id);

// Distances from s in G - E(P) for an explicit edge set.
std::vector<Dist> excluded(const Graph& g, VertexId s,
                           const std::vector<int>& removed_edges);

// Second simple shortest path distance d2(s,t): min over the edges of the
// tie-broken s-t shortest path of d(s,t,e). Infinity when s==t, t is
// unreachable, or no second simple path exists.
Dist sisp2(const Graph& g, VertexId s, VertexId t,
           TieRule rule = TieRule::kSmallestId);

// Distance table from each source in S (rows follow S's order).
std::vector<std::vector<Dist>> ksssp(const Graph& g,
                                     const std::vector<VertexId>& S,
                                     const std::vector<char>* edge_alive =
                                         nullptr);

// Hop-limited distances: min weight over paths of at most h edges.
std::vector<Dist> hop_limited(const Graph& g, VertexId s, int h,
                              const std::vector<char>* edge_alive = nullptr);

// Minimum hop count among minimum-weight s->t paths in the filtered graph;
// -1 if unreachable.
int min_hops_of_shortest(const Graph& g, VertexId s, VertexId t,
                         const std::vector<char>* edge_alive = nullptr);

struct BfsRef {
  std::vector<int> hop;           // -1 unreached
  std::vector<VertexId> nearest;  // -1 unreached; ties to smaller source id
};

// Multi-source BFS truncated at h hops. directed=false walks the underlying
// undirected graph.
BfsRef bfs(const Graph& g, const std::vector<VertexId>& sources, int h,
           bool directed, const std::vector<char>* edge_alive = nullptr);

// Convenience: mask with one edge removed.
std::vector<char> mask_without(const Graph& g, int edge_id);
std::vector<char> mask_without(const Graph& g, const std::vector<int>& ids);

}  // namespace dso::oracle
