// Distance sensitivity oracle optimized for preprocessing rounds: APSP plus
// shortest paths from sampled sources inside randomly sampled subgraphs, one
// geometric level per replacement-path hop scale. Queries combine a
// hop-limited Bellman-Ford in G-{e} with the sampled distances from graphs
// that exclude e. Answers never undershoot the true replacement distance and
// match it with high probability.
#pragma once

#include <vector>

#include "dso/graph.hpp"
#include "dso/queries.hpp"
#include "dso/simulator.hpp"

namespace dso {

struct FastPreParams {
  double c = 2.0;    // source-sampling constant
  double c_g = 4.0;  // subgraph-count constant (h_hat = ceil(c_g * h * ln n))
  std::uint64_t seed = 0;
};

// Membership of an edge in sampled subgraph (level j, index i): pure hash of
// (seed, j, i, edge), kept with probability 1 - 1/h. Subgraphs are never
// materialized.
bool edge_in_subgraph(std::uint64_t seed, int j, int i, int edge_id,
                      std::int64_t h);

struct SampledLevel {
  int j = 0;
  std::int64_t h = 0;  // 2^(j+1)
  int num_graphs = 0;  // ceil(c_g * h * ln n)
  double p_source = 0;
  std::vector<VertexId> sources;  // S_j, sorted
};

struct FastPreState {
  int n = 0;
  int sqrt_n = 0;
  FastPreParams params;
  std::vector<std::vector<Dist>> apsp;  // apsp[x][v] = d(x,v)

  struct LevelData {
    SampledLevel meta;
    // from[si][gi][v] = d_i^j(s, v); to[si][gi][v] = d_i^j(v, s)
    std::vector<std::vector<std::vector<Dist>>> from, to;
  };
  std::vector<LevelData> levels;

  // indices (level, i) with e absent from subgraph i of that level
  std::vector<std::pair<int, int>> absent_sets(int edge_id) const;
  std::int64_t storage_words_per_node_max() const;
};

FastPreState preprocess_fast_pre(NetworkRun& run, const FastPreParams& params);

// case_tag: off_path, short_hop (Bellman-Ford term), sampled.
std::vector<AnswerRow> answer_batch_pre(NetworkRun& run,
                                        const FastPreState& state,
                                        const QueryBatch& batch);

}  // namespace dso
