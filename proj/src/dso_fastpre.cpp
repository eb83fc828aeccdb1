#include "dso/dso_fastpre.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dso/oracle.hpp"
#include "dso/rng.hpp"

namespace dso {

bool edge_in_subgraph(std::uint64_t seed, int j, int i, int edge_id,
                      std::int64_t h) {
  std::uint64_t x = hash_tuple(seed, static_cast<std::uint64_t>(j) << 32 |
                                         static_cast<std::uint32_t>(i),
                               static_cast<std::uint64_t>(edge_id), 0x9d5f);
  // dropped with probability 1/h
  return x >= std::numeric_limits<std::uint64_t>::max() / h;
}

namespace {

std::vector<char> subgraph_mask(const Graph& g, std::uint64_t seed, int j,
                                int i, std::int64_t h) {
  std::vector<char> mask(g.m());
  for (int e = 0; e < g.m(); ++e) mask[e] = edge_in_subgraph(seed, j, i, e, h);
  return mask;
}

}  // namespace

std::vector<std::pair<int, int>> FastPreState::absent_sets(int edge_id) const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const SampledLevel& meta = levels[li].meta;
    for (int i = 0; i < meta.num_graphs; ++i)
      if (!edge_in_subgraph(params.seed, meta.j, i, edge_id, meta.h))
        out.push_back({static_cast<int>(li), i});
  }
  return out;
}

std::int64_t FastPreState::storage_words_per_node_max() const {
  // identical layout per node: one distance per (level, source, graph, dir)
  std::int64_t w = n;  // APSP column
  for (const LevelData& ld : levels)
    w += 2 * static_cast<std::int64_t>(ld.meta.sources.size()) *
         ld.meta.num_graphs;
  return w;
}

FastPreState preprocess_fast_pre(NetworkRun& run,
                                 const FastPreParams& params) {
  const Graph& g = run.graph();
  const Graph gr = g.reversed();
  const int n = g.n();
  FastPreState st;
  st.n = n;
  st.sqrt_n = ceil_sqrt(n);
  st.params = params;

  run.begin_phase("fastpre.broadcast_trees");
  run.charge_broadcast_tree_setup();
  run.end_phase();

  run.begin_phase("fastpre.apsp");
  st.apsp.assign(n, {});
  {
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (VertexId x = 0; x < n; ++x)
      insts.push_back(
          [&, x](NetworkRun& r) { st.apsp[x] = r.sssp(x).dist; });
    std::int64_t C =
        run.config().cost_model.mode == CostMode::kCharged
            ? run.config().cost_model.charged_sssp_congestion(n)
            : 4 * static_cast<std::int64_t>(n);
    std::int64_t R = run.config().cost_model.mode == CostMode::kCharged
                         ? run.config().cost_model.charged_sssp_rounds(n)
                         : 4 * static_cast<std::int64_t>(n);
    run.schedule_random_delays(insts, C, R, hash_tuple(params.seed, 0xa1));
  }
  run.end_phase();

  // Levels and sampled sources: local coin flips, no communication.
  const double ln_n = std::log(std::max(2, n));
  const int jmin = ceil_log2(st.sqrt_n);
  const int jmax = ceil_log2(n);
  for (int j = jmin; j <= jmax; ++j) {
    SampledLevel lvl;
    lvl.j = j;
    lvl.h = std::int64_t{1} << (j + 1);
    lvl.num_graphs = static_cast<int>(
        std::ceil(params.c_g * static_cast<double>(lvl.h) * ln_n));
    lvl.p_source =
        std::min(1.0, params.c * ln_n / static_cast<double>(std::int64_t{1} << j));
    for (VertexId v = 0; v < n; ++v) {
      std::uint64_t hsh = hash_tuple(params.seed, 0x50c5, j, v);
      if (static_cast<double>(hsh >> 11) * 0x1.0p-53 < lvl.p_source)
        lvl.sources.push_back(v);
    }
    FastPreState::LevelData ld;
    ld.meta = std::move(lvl);
    st.levels.push_back(std::move(ld));
  }

  run.begin_phase("fastpre.sampled_sssp");
  {
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (std::size_t li = 0; li < st.levels.size(); ++li) {
      FastPreState::LevelData& ld = st.levels[li];
      const int ns = static_cast<int>(ld.meta.sources.size());
      ld.from.assign(ns, std::vector<std::vector<Dist>>(ld.meta.num_graphs));
      ld.to.assign(ns, std::vector<std::vector<Dist>>(ld.meta.num_graphs));
      for (int si = 0; si < ns; ++si) {
        for (int gi = 0; gi < ld.meta.num_graphs; ++gi) {
          insts.push_back([&, li, si, gi](NetworkRun& r) {
            FastPreState::LevelData& l = st.levels[li];
            std::vector<char> mask = subgraph_mask(
                r.graph(), st.params.seed, l.meta.j, gi, l.meta.h);
            l.from[si][gi] = r.sssp(l.meta.sources[si], &mask).dist;
            l.to[si][gi] = r.sssp(l.meta.sources[si], &mask, nullptr, false,
                                  &gr).dist;
          });
        }
      }
    }
    std::int64_t C =
        run.config().cost_model.mode == CostMode::kCharged
            ? 2 * run.config().cost_model.charged_sssp_congestion(n)
            : 8 * static_cast<std::int64_t>(n);
    std::int64_t R = run.config().cost_model.mode == CostMode::kCharged
                         ? 2 * run.config().cost_model.charged_sssp_rounds(n)
                         : 8 * static_cast<std::int64_t>(n);
    run.schedule_random_delays(insts, C, R, hash_tuple(params.seed, 0xa2));
  }
  run.end_phase();
  return st;
}

std::vector<AnswerRow> answer_batch_pre(NetworkRun& run,
                                        const FastPreState& st,
                                        const QueryBatch& batch) {
  const Graph& g = run.graph();
  const int n = g.n();
  std::vector<AnswerRow> rows(batch.size());
  struct View {
    bool valid = false;
    int edge_id = -1;
    bool on_path = false;
  };
  std::vector<View> views(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    rows[i].q = batch[i];
    const Query& q = batch[i];
    if (q.x < 0 || q.x >= n || q.y < 0 || q.y >= n) {
      rows[i].error = "vertex out of range";
      continue;
    }
    auto e = g.find_edge(q.u, q.v);
    if (!e) {
      rows[i].error = "edge not in graph";
      continue;
    }
    views[i].valid = true;
    views[i].edge_id = *e;
    // on some shortest path iff d(x,y) = d(x,z) + w(e) + d(z',y)
    Dist lhs = st.apsp[q.x][q.y];
    Dist rhs = sat_add(st.apsp[q.x][q.u],
                       sat_add(g.edge(*e).w, st.apsp[q.v][q.y]));
    views[i].on_path = lhs < kInf && lhs == rhs;
  }

  run.begin_phase("fastpre.query");
  // announce; failed-edge endpoint's d(x,z); sink's verdict
  std::vector<WaveItem> w1, w2, w3;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!views[i].valid) continue;
    w1.push_back({batch[i].x, 3});
    w2.push_back({batch[i].u, 1});
    w3.push_back({batch[i].y, 1});
  }
  std::int64_t rounds = run.wave(w1) + run.wave(w2) + run.wave(w3);

  // per-query Bellman-Ford in G - {e}, run sequentially, then the sampled
  // distance broadcasts, pipelined
  std::vector<Dist> bf_term(batch.size(), kInf);
  std::vector<WaveItem> w4;
  std::vector<std::vector<std::pair<int, int>>> absents(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!views[i].valid || !views[i].on_path) continue;
    const Query& q = batch[i];
    std::vector<char> mask = oracle::mask_without(g, views[i].edge_id);
    auto bf = run.bellman_ford(q.x, st.sqrt_n, &mask);
    bf_term[i] = bf.dist[q.y];
    absents[i] = st.absent_sets(views[i].edge_id);
    std::int64_t words = 0;
    for (auto [li, gi] : absents[i]) {
      (void)gi;
      words += 2;  // the (j, i) pair announced by e's endpoint
      words += static_cast<std::int64_t>(
          st.levels[li].meta.sources.size());  // x's distances to S_j
    }
    if (words > 0) {
      w4.push_back({q.u, 2 * static_cast<std::int64_t>(absents[i].size())});
      w4.push_back({q.x, words});
    }
  }
  rounds += run.wave(w4);
  std::vector<WaveItem> w5;
  for (std::size_t i = 0; i < batch.size(); ++i)
    if (views[i].valid) w5.push_back({batch[i].y, 1});
  rounds += run.wave(w5);
  run.end_phase();

  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!views[i].valid) continue;
    AnswerRow& row = rows[i];
    row.rounds_charged = run.ledger().phases().back().rounds;
    const Query& q = batch[i];
    if (!views[i].on_path) {
      row.case_tag = "off_path";
      row.distance = st.apsp[q.x][q.y];
      continue;
    }
    Dist sampled = kInf;
    for (auto [li, gi] : absents[i]) {
      const FastPreState::LevelData& ld = st.levels[li];
      for (std::size_t si = 0; si < ld.meta.sources.size(); ++si) {
        Dist cand = sat_add(ld.to[si][gi][q.x], ld.from[si][gi][q.y]);
        sampled = std::min(sampled, cand);
      }
    }
    if (bf_term[i] <= sampled) {
      row.case_tag = "short_hop";
      row.distance = bf_term[i];
    } else {
      row.case_tag = "sampled";
      row.distance = sampled;
    }
  }
  (void)rounds;
  return rows;
}

}  // namespace dso
