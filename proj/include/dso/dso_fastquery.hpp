// Distance sensitivity oracle optimized for query rounds: heavy
// preprocessing (APSP, short-hop excludes near every source and sink, and
// interval excludes between the level vertices of every shortest-path tree)
// buys answers in a constant number of pipelined broadcasts per query.
#pragma once

#include <map>
#include <vector>

#include "dso/graph.hpp"
#include "dso/queries.hpp"
#include "dso/simulator.hpp"

namespace dso {

// Level structure of one shortest-path tree. Type-2 level depths sit at
// multiples of ceil(sqrt(n)); a depth is type-1 when some vertex there has
// two or more children with subtree size >= ceil(sqrt(n)). Between two
// consecutive level depths the vertices with subtree size > ceil(sqrt(n))
// form vertex-disjoint chains; those chains are the interval exclusion sets.
struct LevelCut {
  int sqrt_n = 0;
  std::vector<int> level_depths;              // sorted, may include 0
  std::vector<char> depth_is_type1;           // aligned with level_depths
  std::vector<VertexId> type1_generators;     // >= 2 heavy children
  std::vector<char> is_level;                 // per vertex

  struct Chain {
    int pair_index = 0;  // consecutive level-depth pair
    std::vector<VertexId> vertices;  // top (at depth d_a) ... bottom (d_b)
  };
  // chains grouped by consecutive level-depth pair; each group independent
  std::vector<std::vector<Chain>> families;

  // per vertex: (depth, ancestor id) for every level depth on its root path
  std::vector<std::vector<std::pair<int, VertexId>>> level_ancestors;
};

LevelCut tree_cut(const ShortestPathTree& tree);

struct FastQueryState {
  int n = 0;
  int sqrt_n = 0;
  int H = 0;  // short-hop exclude depth, 2 * ceil(sqrt(n))

  std::vector<std::vector<Dist>> dist;  // dist[x][v]
  std::vector<ShortestPathTree> fwd_tree;
  std::vector<ShortestPathTree> rev_tree;  // on the reversed graph
  std::vector<LevelCut> cut;               // per forward tree

  struct ExclEntry {
    Dist val = kInf;
    VertexId tail = -1, head = -1;  // the excluded edge, in the run graph
  };
  // fwd_excl[y][x][i]: exclude of the depth-(i+1) edge on y's root path in
  // T_x (present for depths up to min(H, depth)).
  std::vector<std::vector<std::vector<ExclEntry>>> fwd_excl;
  // rev_excl[x][b][i]: same for x's root path in the reverse tree of b; tags
  // are stored as (tail, head) of the original graph edge.
  std::vector<std::vector<std::vector<ExclEntry>>> rev_excl;
  // interval_excl[y][(x, chain bottom)] = d(x, y, chain)
  std::vector<std::map<std::pair<VertexId, VertexId>, Dist>> interval_excl;

  std::int64_t storage_words_per_node_max() const;
};

FastQueryState preprocess_fast_query(NetworkRun& run, std::uint64_t seed);

// Answers land at each query's sink and are then broadcast; per-row case_tag
// is one of off_path, short_hop_fwd, short_hop_rev, level.
std::vector<AnswerRow> answer_batch_fast(NetworkRun& run,
                                         const FastQueryState& state,
                                         const QueryBatch& batch);

}  // namespace dso
