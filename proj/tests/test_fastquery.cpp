#include <cmath>
#include <set>

#include "doctest.h"
#include "dso/dso_fastquery.hpp"
#include "dso/oracle.hpp"
#include "dso/rng.hpp"

using namespace dso;

namespace {

EngineConfig charged() {
  EngineConfig cfg;
  cfg.cost_model.mode = CostMode::kCharged;
  return cfg;
}

Graph path_tree_graph(int n) {
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, 1});
  return Graph(n, std::move(es));
}

// chain backbone + light random chords: deep trees with detours
Graph deep_graph(int n, int extra, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i)
    es.push_back({i, i + 1, 1 + static_cast<Dist>(rng.bounded(4))});
  std::set<std::pair<VertexId, VertexId>> seen;
  for (int i = 0; i + 1 < n; ++i) seen.insert({i, i + 1});
  int added = 0;
  while (added < extra) {
    auto u = static_cast<VertexId>(rng.bounded(n));
    auto v = static_cast<VertexId>(rng.bounded(n));
    if (u == v || !seen.insert({u, v}).second) continue;
    es.push_back({u, v, 200 + static_cast<Dist>(rng.bounded(200))});
    ++added;
  }
  return Graph(n, std::move(es));
}

void check_batch(const Graph& g, const std::vector<AnswerRow>& rows) {
  for (const AnswerRow& r : rows) {
    if (!r.error.empty()) continue;
    auto e = g.find_edge(r.q.u, r.q.v);
    CAPTURE(r.q.x);
    CAPTURE(r.q.y);
    CAPTURE(r.q.u);
    CAPTURE(r.q.v);
    CAPTURE(r.case_tag);
    CHECK(r.distance == oracle::rp(g, r.q.x, r.q.y, *e));
  }
}

}  // namespace

TEST_CASE("tree_cut on a path tree has only type-2 depths") {
  Graph g = path_tree_graph(25);
  ShortestPathTree t = build_sp_tree(g, 0);
  LevelCut cut = tree_cut(t);
  CHECK(cut.sqrt_n == 5);
  CHECK(cut.level_depths == std::vector<int>{5, 10, 15, 20});
  for (char t1 : cut.depth_is_type1) CHECK(!t1);
  CHECK(cut.type1_generators.empty());
}

TEST_CASE("tree_cut on a star tree has no level depths") {
  std::vector<Edge> es;
  for (int i = 1; i < 10; ++i) es.push_back({0, i, 1});
  Graph g(10, std::move(es));
  LevelCut cut = tree_cut(build_sp_tree(g, 0));
  CHECK(cut.level_depths.empty());
}

TEST_CASE("tree_cut flags the root of a complete binary tree as type-1") {
  // 63 vertices, sqrt rounds to 8, both root children have size 31 >= 8
  std::vector<Edge> es;
  for (int v = 1; v < 63; ++v) es.push_back({(v - 1) / 2, v, 1});
  Graph g(63, std::move(es));
  LevelCut cut = tree_cut(build_sp_tree(g, 0));
  REQUIRE(!cut.level_depths.empty());
  CHECK(cut.level_depths[0] == 0);
  CHECK(cut.depth_is_type1[0]);
  bool root_gen = false;
  for (VertexId v : cut.type1_generators) root_gen = root_gen || v == 0;
  CHECK(root_gen);
}

TEST_CASE("tree_cut structural bounds on random trees") {
  Rng rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 16 + static_cast<int>(rng.bounded(113));
    Graph g = trial % 2 ? deep_graph(n, n / 2, rng.next())
                        : generate_random(n, 3 * n, 30, rng.next());
    ShortestPathTree t = build_sp_tree(g, 0);
    LevelCut cut = tree_cut(t);
    int s = cut.sqrt_n;
    CHECK(static_cast<int>(cut.level_depths.size()) <= 2 * s);
    CHECK(static_cast<int>(cut.type1_generators.size()) <= s);
    // flanking: every tree path of >= s hops contains a level vertex
    for (VertexId v = 0; v < g.n(); ++v) {
      if (!t.reachable(v) || t.depth[v] < s) continue;
      // the ancestor path segment [depth - s, depth] must contain one
      int lo = t.depth[v] - s;
      bool found = false;
      for (int d : cut.level_depths)
        if (d >= lo && d <= t.depth[v]) found = true;
      CHECK(found);
    }
    // interval families are independent path sets
    for (const auto& family : cut.families) {
      if (family.empty()) continue;
      std::vector<PathSpec> specs;
      for (const auto& ch : family) {
        PathSpec p;
        p.source = 0;
        p.start_vertex = ch.vertices.front();
        for (std::size_t i = 0; i + 1 < ch.vertices.size(); ++i)
          p.edges.push_back({ch.vertices[i], ch.vertices[i + 1]});
        specs.push_back(std::move(p));
      }
      CHECK(is_independent(t, specs));
    }
  }
}

TEST_CASE("complete digraph: every stored short-hop exclude is exact") {
  std::vector<Edge> es;
  for (VertexId u = 0; u < 4; ++u)
    for (VertexId v = 0; v < 4; ++v)
      if (u != v) es.push_back({u, v, 1});
  Graph g(4, std::move(es));
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 1);
  for (VertexId x = 0; x < 4; ++x) {
    const ShortestPathTree& t = st.fwd_tree[x];
    for (VertexId y = 0; y < 4; ++y) {
      for (std::size_t i = 0; i < st.fwd_excl[y][x].size(); ++i) {
        const auto& e = st.fwd_excl[y][x][i];
        REQUIRE(e.head >= 0);
        CHECK(t.parent[e.head] == e.tail);
        CHECK(e.val == oracle::rp(g, x, y, *g.find_edge(e.tail, e.head)));
      }
    }
  }
}

TEST_CASE("query answers match the oracle on random graphs") {
  Rng rng(333);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 20 + static_cast<int>(rng.bounded(29));
    Graph g = generate_random(n, std::min<long long>(1LL * n * (n - 1), 3LL * n),
                              25, rng.next());
    NetworkRun run(g, charged());
    FastQueryState st = preprocess_fast_query(run, rng.next());
    QueryBatch batch;
    for (int qi = 0; qi < 40; ++qi) {
      auto x = static_cast<VertexId>(rng.bounded(n));
      auto y = static_cast<VertexId>(rng.bounded(n));
      const Edge& e = g.edge(static_cast<int>(rng.bounded(g.m())));
      batch.push_back({x, y, e.u, e.v});
    }
    // bias half the queries onto tree paths so failures actually matter
    for (int qi = 0; qi < 40; qi += 2) {
      VertexId x = batch[qi].x;
      const ShortestPathTree& t = st.fwd_tree[x];
      auto y = static_cast<VertexId>(rng.bounded(n));
      if (!t.reachable(y) || t.depth[y] < 1) continue;
      auto path = t.path_from_root(y);
      std::size_t idx = rng.bounded(path.size() - 1);
      batch[qi] = {x, y, path[idx], path[idx + 1]};
    }
    auto rows = answer_batch_fast(run, st, batch);
    check_batch(g, rows);
  }
}

TEST_CASE("deep graphs exercise the level-vertex formula") {
  Graph g = deep_graph(80, 50, 97);
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 5);
  Rng rng(6);
  QueryBatch batch;
  const ShortestPathTree& t0 = st.fwd_tree[0];
  for (int qi = 0; qi < 120; ++qi) {
    auto y = static_cast<VertexId>(rng.bounded(g.n()));
    if (!t0.reachable(y) || t0.depth[y] < 2) continue;
    auto path = t0.path_from_root(y);
    std::size_t idx = rng.bounded(path.size() - 1);
    batch.push_back({0, y, path[idx], path[idx + 1]});
  }
  // a couple of clearly-off-path queries for case variety
  batch.push_back({0, 1, batch[0].u, batch[0].v});
  auto rows = answer_batch_fast(run, st, batch);
  check_batch(g, rows);
  std::set<std::string> tags;
  for (const auto& r : rows)
    tags.insert(r.case_tag.substr(0, r.case_tag.find(':')));
  CHECK(tags.count("level") == 1);        // deep queries hit the interval path
  CHECK(tags.count("short_hop_fwd") == 1);
  CHECK(tags.count("short_hop_rev") == 1);
  CHECK(tags.count("off_path") == 1);
}

TEST_CASE("level formula: each term is the unique minimizer somewhere") {
  // Unit-weight chain 0..39 (sqrt 7, short-hop depth 14, level depths at
  // multiples of 7) plus one detour edge per scenario. Failed edge (17,18)
  // sits deeper than 14 on both sides, so the flanking pair is a=14, b=21.
  const int n = 40;
  auto chain_with = [&](VertexId du, VertexId dv, Dist w) {
    std::vector<Edge> es;
    for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, 1});
    es.push_back({du, dv, w});
    return Graph(n, std::move(es));
  };
  struct Scenario {
    VertexId du, dv;
    Dist w;  // heavier than the skipped chain portion, so the chain stays
             // the shortest path and the failed edge stays on it
    const char* tag;
  };
  // detour inside the interval above the failure -> only the through-a term;
  // detour from above the interval rejoining inside -> only the through-b
  // term; detour skipping the whole interval -> only the interval-exclude
  // term
  for (Scenario sc :
       {Scenario{16, 30, 20, "level:t1"}, Scenario{5, 19, 20, "level:t2"},
        Scenario{5, 30, 30, "level:t3"}}) {
    Graph g = chain_with(sc.du, sc.dv, sc.w);
    NetworkRun run(g, charged());
    FastQueryState st = preprocess_fast_query(run, 2);
    auto rows = answer_batch_fast(run, st, {{0, 39, 17, 18}});
    REQUIRE(rows[0].error.empty());
    CHECK(rows[0].case_tag == sc.tag);
    CHECK(rows[0].distance == oracle::rp(g, 0, 39, *g.find_edge(17, 18)));
    CHECK(rows[0].distance < kInf);
  }
}

TEST_CASE("faithful mode: same answers as charged, real messages") {
  Graph g = generate_random(18, 54, 9, 31);
  EngineConfig slow;
  slow.cost_model.mode = CostMode::kFaithful;
  NetworkRun run_a(g, charged()), run_b(g, slow);
  FastQueryState sa = preprocess_fast_query(run_a, 4);
  FastQueryState sb = preprocess_fast_query(run_b, 4);
  Rng rng(8);
  QueryBatch batch;
  for (int i = 0; i < 25; ++i) {
    const Edge& e = g.edge(static_cast<int>(rng.bounded(g.m())));
    batch.push_back({static_cast<VertexId>(rng.bounded(g.n())),
                     static_cast<VertexId>(rng.bounded(g.n())), e.u, e.v});
  }
  auto ra = answer_batch_fast(run_a, sa, batch);
  auto rb = answer_batch_fast(run_b, sb, batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(ra[i].distance == rb[i].distance);
    CHECK(ra[i].case_tag == rb[i].case_tag);
  }
  check_batch(g, rb);
  CHECK(run_b.ledger().bandwidth_violations() == 0);
}

TEST_CASE("exhaustive: every (x,y,e) triple on small graphs, zero weights included") {
  std::vector<Graph> graphs;
  graphs.push_back(Graph(6, {{0, 1, 0},
                             {1, 2, 0},
                             {2, 3, 4},
                             {0, 3, 5},
                             {3, 4, 0},
                             {4, 1, 0},
                             {2, 5, 1},
                             {5, 0, 2}}));
  graphs.push_back(generate_random(8, 24, 3, 71));
  graphs.push_back(Graph(5, {{0, 1, 1}, {1, 2, 1}, {3, 4, 2}}));  // disconnected
  for (const Graph& g : graphs) {
    NetworkRun run(g, charged());
    FastQueryState st = preprocess_fast_query(run, 9);
    QueryBatch batch;
    for (VertexId x = 0; x < g.n(); ++x)
      for (VertexId y = 0; y < g.n(); ++y)
        for (const Edge& e : g.edges()) batch.push_back({x, y, e.u, e.v});
    auto rows = answer_batch_fast(run, st, batch);
    check_batch(g, rows);
  }
}

TEST_CASE("per-query error flags") {
  Graph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 1);
  QueryBatch batch{{0, 3, 0, 2}, {0, 9, 0, 1}, {0, 3, 1, 2}};
  auto rows = answer_batch_fast(run, st, batch);
  CHECK(rows[0].error == "edge not in graph");
  CHECK(rows[1].error == "vertex out of range");
  CHECK(rows[2].error.empty());
  CHECK(rows[2].distance == kInf);
}

TEST_CASE("off-path queries return the plain distance") {
  Graph g(5, {{0, 1, 1}, {1, 2, 1}, {0, 3, 5}, {3, 2, 5}, {3, 4, 1}});
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 2);
  // edge (3,4) is nowhere near the 0->2 shortest path
  auto rows = answer_batch_fast(run, st, {{0, 2, 3, 4}});
  CHECK(rows[0].case_tag == "off_path");
  CHECK(rows[0].distance == 2);
}

TEST_CASE("storage stays within the n^(3/2) budget") {
  Graph g = generate_random(48, 150, 20, 3);
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 7);
  double budget = 16.0 * std::pow(static_cast<double>(g.n()), 1.5);
  CHECK(static_cast<double>(st.storage_words_per_node_max()) <= budget);
}

TEST_CASE("query phase rounds scale linearly in batch size") {
  Graph g = generate_random(48, 150, 20, 13);
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 7);
  Rng rng(14);
  auto run_batch = [&](int k) {
    QueryBatch batch;
    for (int i = 0; i < k; ++i) {
      const Edge& e = g.edge(static_cast<int>(rng.bounded(g.m())));
      batch.push_back({static_cast<VertexId>(rng.bounded(g.n())),
                       static_cast<VertexId>(rng.bounded(g.n())), e.u, e.v});
    }
    NetworkRun qrun(g, charged());
    auto rows = answer_batch_fast(qrun, st, batch);
    check_batch(g, rows);
    return rows[0].rounds_charged;
  };
  std::int64_t r1 = run_batch(1);
  std::int64_t r16 = run_batch(16);
  // linear growth with slope bounded by the per-query word budget
  CHECK(r16 <= r1 + 16 * 40);
  CHECK(r16 >= r1);
}

TEST_CASE("query-phase congestion is O(1) words per query per link") {
  Graph g = generate_random(48, 150, 20, 21);
  NetworkRun run(g, charged());
  FastQueryState st = preprocess_fast_query(run, 7);
  Rng rng(9);
  const int k = 60;
  QueryBatch batch;
  for (int i = 0; i < k; ++i) {
    const Edge& e = g.edge(static_cast<int>(rng.bounded(g.m())));
    batch.push_back({static_cast<VertexId>(rng.bounded(g.n())),
                     static_cast<VertexId>(rng.bounded(g.n())), e.u, e.v});
  }
  NetworkRun qrun(g, charged());
  answer_batch_fast(qrun, st, batch);
  // at most the fixed per-query wave words (19) can cross any single link
  CHECK(qrun.ledger().peak_congestion() <= 19 * k);
}
