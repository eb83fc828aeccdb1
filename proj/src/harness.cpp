#include "dso/harness.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

#include "dso/apsisp.hpp"
#include "dso/baseline.hpp"
#include "dso/dso_fastpre.hpp"
#include "dso/dso_fastquery.hpp"
#include "dso/exclude.hpp"
#include "dso/lowerbound.hpp"
#include "dso/oracle.hpp"
#include "dso/rng.hpp"

namespace dso::harness {

void VerifyReport::note_failure(const std::string& what) {
  ++mismatches;
  if (failures.size() < 10) failures.push_back(what);
}

namespace {

int undirected_diameter_of(const Graph& g) {
  int d = 0;
  for (VertexId s = 0; s < g.n(); ++s) {
    auto ref = oracle::bfs(g, {s}, g.n(), false);
    for (int h : ref.hop) d = std::max(d, h);
  }
  return d;
}

}  // namespace

EngineConfig make_config(CostMode mode, std::uint64_t seed) {
  EngineConfig cfg;
  cfg.cost_model.mode = mode;
  cfg.seed = seed;
  return cfg;
}

Graph test_graph(int n, int m_factor, Dist max_w, std::uint64_t seed,
                 bool deep) {
  if (!deep) {
    long long m = std::min<long long>(1LL * n * (n - 1),
                                      1LL * m_factor * n);
    return generate_random(n, static_cast<int>(m), max_w, seed);
  }
  Rng rng(seed);
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i)
    es.push_back({i, i + 1, 1 + static_cast<Dist>(rng.bounded(3))});
  std::set<std::pair<VertexId, VertexId>> seen;
  for (int i = 0; i + 1 < n; ++i) seen.insert({i, i + 1});
  long long target =
      std::min<long long>(1LL * n * (n - 1), 1LL * m_factor * n);
  while (static_cast<long long>(es.size()) < target) {
    auto u = static_cast<VertexId>(rng.bounded(n));
    auto v = static_cast<VertexId>(rng.bounded(n));
    if (u == v || !seen.insert({u, v}).second) continue;
    es.push_back({u, v, 4 * static_cast<Dist>(n) +
                            static_cast<Dist>(rng.bounded(4 * n))});
  }
  return Graph(n, std::move(es));
}

QueryBatch mixed_queries(const Graph& g, int k, std::uint64_t seed) {
  Rng rng(seed);
  QueryBatch batch;
  std::vector<ShortestPathTree> trees(g.n());
  std::vector<char> built(g.n(), 0);
  while (static_cast<int>(batch.size()) < k) {
    auto x = static_cast<VertexId>(rng.bounded(g.n()));
    auto y = static_cast<VertexId>(rng.bounded(g.n()));
    if (batch.size() % 2 == 0) {
      const Edge& e = g.edge(static_cast<int>(rng.bounded(g.m())));
      batch.push_back({x, y, e.u, e.v});
      continue;
    }
    if (!built[x]) {
      trees[x] = build_sp_tree(g, x);
      built[x] = 1;
    }
    const ShortestPathTree& t = trees[x];
    if (!t.reachable(y) || t.depth[y] < 1) continue;
    auto path = t.path_from_root(y);
    std::size_t idx = rng.bounded(path.size() - 1);
    batch.push_back({x, y, path[idx], path[idx + 1]});
  }
  return batch;
}

VerifyReport verify_exclude(int n, int trials, std::uint64_t seed,
                            CostMode mode) {
  VerifyReport rep;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    int nn = 12 + static_cast<int>(rng.bounded(std::max(1, n - 11)));
    Graph g = test_graph(nn, 4, 100, rng.next(), trial % 4 == 3);
    // up to 6 sources with up to 3 independent paths each
    std::vector<ExcludeRequest> reqs;
    int sources = 1 + static_cast<int>(rng.bounded(6));
    std::set<VertexId> used;
    for (int si = 0; si < sources; ++si) {
      auto x = static_cast<VertexId>(rng.bounded(nn));
      if (!used.insert(x).second) continue;
      ShortestPathTree t = build_sp_tree(g, x);
      std::vector<PathSpec> paths;
      std::vector<std::pair<int, int>> taken;
      for (int attempt = 0; attempt < 60 && paths.size() < 3; ++attempt) {
        auto v = static_cast<VertexId>(rng.bounded(nn));
        if (!t.reachable(v) || t.depth[v] < 1) continue;
        int len = 1 + static_cast<int>(rng.bounded(3));
        std::vector<VertexId> verts{t.parent[v], v};
        VertexId cur = v;
        for (int i = 1; i < len && !t.children[cur].empty(); ++i) {
          cur = t.children[cur][rng.bounded(t.children[cur].size())];
          verts.push_back(cur);
        }
        VertexId root = verts[1];
        bool clash = false;
        for (auto [a, b] : taken)
          if (!(t.tout[root] <= a || b <= t.tin[root])) clash = true;
        if (clash) continue;
        taken.push_back({t.tin[root], t.tout[root]});
        PathSpec p;
        p.source = x;
        p.start_vertex = verts[0];
        for (std::size_t i = 0; i + 1 < verts.size(); ++i)
          p.edges.push_back({verts[i], verts[i + 1]});
        paths.push_back(std::move(p));
      }
      reqs.push_back({x, std::move(paths)});
    }
    NetworkRun run(g, make_config(mode));
    auto results = exclude_multi_source(run, reqs, rng.next());
    rep.bandwidth_violations += run.ledger().bandwidth_violations();
    for (std::size_t ri = 0; ri < reqs.size(); ++ri) {
      for (std::size_t pi = 0; pi < reqs[ri].paths.size(); ++pi) {
        std::vector<int> removed;
        for (auto [u, v] : reqs[ri].paths[pi].edges)
          removed.push_back(*g.find_edge(u, v));
        auto ref = oracle::excluded(g, reqs[ri].source, removed);
        for (auto [y, d] : results[ri].per_path[pi].values) {
          ++rep.checked;
          if (d != ref[y]) {
            std::ostringstream ss;
            ss << "exclude x=" << reqs[ri].source << " y=" << y << " got "
               << dist_to_string(d) << " want " << dist_to_string(ref[y]);
            rep.note_failure(ss.str());
          }
        }
      }
    }
  }
  return rep;
}

VerifyReport verify_fastquery(int n, int graphs, int queries_per_graph,
                              std::uint64_t seed, CostMode mode) {
  VerifyReport rep;
  Rng rng(seed);
  for (int gi = 0; gi < graphs; ++gi) {
    int nn = 16 + static_cast<int>(rng.bounded(std::max(1, n - 15)));
    Graph g = test_graph(nn, gi % 3 == 2 ? 2 : 3, 25, rng.next(),
                         gi % 3 == 1);
    NetworkRun run(g, make_config(mode));
    FastQueryState st = preprocess_fast_query(run, rng.next());
    QueryBatch batch = mixed_queries(g, queries_per_graph, rng.next());
    auto rows = answer_batch_fast(run, st, batch);
    rep.bandwidth_violations += run.ledger().bandwidth_violations();
    for (const AnswerRow& r : rows) {
      if (!r.error.empty()) continue;
      ++rep.checked;
      Dist want = oracle::rp(g, r.q.x, r.q.y, *g.find_edge(r.q.u, r.q.v));
      if (want >= kInf) ++rep.infinite_cases;
      if (r.case_tag == "off_path") ++rep.off_path_cases;
      if (r.distance != want) {
        std::ostringstream ss;
        ss << "fastquery (" << r.q.x << "," << r.q.y << "," << r.q.u << "->"
           << r.q.v << ") got " << dist_to_string(r.distance) << " want "
           << dist_to_string(want) << " case " << r.case_tag;
        rep.note_failure(ss.str());
      }
    }
  }
  return rep;
}

VerifyReport verify_fastpre(int n, int graphs, int queries_per_graph, double c,
                            double c_g, std::uint64_t seed, CostMode mode) {
  VerifyReport rep;
  Rng rng(seed);
  for (int gi = 0; gi < graphs; ++gi) {
    int nn = 16 + static_cast<int>(rng.bounded(std::max(1, n - 15)));
    Graph g = test_graph(nn, 4, 50, rng.next(), gi % 4 == 1);
    FastPreParams params;
    params.c = c;
    params.c_g = c_g;
    params.seed = rng.next();
    NetworkRun run(g, make_config(mode));
    FastPreState st = preprocess_fast_pre(run, params);
    QueryBatch batch = mixed_queries(g, queries_per_graph, rng.next());
    auto rows = answer_batch_pre(run, st, batch);
    rep.bandwidth_violations += run.ledger().bandwidth_violations();
    for (const AnswerRow& r : rows) {
      if (!r.error.empty()) continue;
      ++rep.checked;
      int edge = *g.find_edge(r.q.u, r.q.v);
      Dist want = oracle::rp(g, r.q.x, r.q.y, edge);
      if (r.distance < want) {
        ++rep.one_sided_violations;
        std::ostringstream ss;
        ss << "fastpre undershoot (" << r.q.x << "," << r.q.y << ") got "
           << dist_to_string(r.distance) << " want " << dist_to_string(want);
        rep.note_failure(ss.str());
        continue;
      }
      if (r.distance != want) {
        // also flag when a short replacement path was missed: those must be
        // exact regardless of sampling
        std::vector<char> mask = oracle::mask_without(g, edge);
        Dist hop =
            oracle::hop_limited(g, r.q.x, ceil_sqrt(g.n()), &mask)[r.q.y];
        std::ostringstream ss;
        ss << "fastpre inexact (" << r.q.x << "," << r.q.y << ")";
        if (hop == want) {
          ++rep.one_sided_violations;
          ss << " with short replacement path";
        }
        rep.note_failure(ss.str());
      }
    }
  }
  return rep;
}

VerifyReport verify_apsisp(int n, int trials, std::uint64_t seed,
                           CostMode mode) {
  VerifyReport rep;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    int nn = 8 + static_cast<int>(rng.bounded(std::max(1, n - 7)));
    Graph g = test_graph(nn, 3, 12, rng.next(), trial % 5 == 4);
    NetworkRun run(g, make_config(mode));
    auto table = compute_2apsisp(run, rng.next());
    rep.bandwidth_violations += run.ledger().bandwidth_violations();
    for (VertexId x = 0; x < nn; ++x)
      for (VertexId y = 0; y < nn; ++y) {
        ++rep.checked;
        Dist want = oracle::sisp2(g, x, y, oracle::TieRule::kSmallestId);
        Dist want2 = oracle::sisp2(g, x, y, oracle::TieRule::kLargestId);
        if (table.d2[x][y] != want || table.d2[x][y] != want2) {
          std::ostringstream ss;
          ss << "apsisp (" << x << "," << y << ") got "
             << dist_to_string(table.d2[x][y]) << " want "
             << dist_to_string(want) << "/" << dist_to_string(want2);
          rep.note_failure(ss.str());
        }
      }
  }
  return rep;
}

VerifyReport verify_baseline(int n, int queries, std::uint64_t seed,
                             CostMode mode, bool single_edge_batch) {
  VerifyReport rep;
  Rng rng(seed);
  Graph g = test_graph(n, 4, 50, rng.next());
  QueryBatch batch;
  if (single_edge_batch) {
    const Edge& e = g.edge(static_cast<int>(rng.bounded(g.m())));
    for (int i = 0; i < queries; ++i)
      batch.push_back({static_cast<VertexId>(rng.bounded(g.n())),
                       static_cast<VertexId>(rng.bounded(g.n())), e.u, e.v});
  } else {
    batch = mixed_queries(g, queries, rng.next());
  }
  NetworkRun run(g, make_config(mode));
  auto rows = single_edge_batch ? answer_seb_no_pre(run, batch, rng.next())
                                : answer_general_no_pre(run, batch);
  rep.bandwidth_violations += run.ledger().bandwidth_violations();
  for (const AnswerRow& r : rows) {
    if (!r.error.empty()) continue;
    ++rep.checked;
    Dist want = oracle::rp(g, r.q.x, r.q.y, *g.find_edge(r.q.u, r.q.v));
    if (r.distance != want) rep.note_failure("baseline mismatch");
  }
  return rep;
}

VerifyReport verify_lowerbound_fig1(int k, int q, int ell, int instances,
                                    std::uint64_t seed) {
  VerifyReport rep;
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    auto bits = DisjointnessInstance::random(k, q, rng.next(), true);
    Fig1Build b = build_fig1(k, q, ell, bits);
    ClaimReport r = verify_fig1_claims(b);
    for (const auto& c : r.claims) {
      ++rep.checked;
      if (!c.pass) rep.note_failure("fig1 " + c.name + ": " + c.detail);
    }
  }
  return rep;
}

VerifyReport verify_lowerbound_fig2(int n_bits, int instances, int stretch,
                                    std::uint64_t seed) {
  VerifyReport rep;
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    std::vector<char> bits(n_bits);
    for (char& b : bits) b = rng.coin(0.5) ? 1 : 0;
    Fig2Build b = build_fig2(n_bits, bits, stretch, i % 4 == 3);
    ClaimReport r = verify_fig2_claims(b);
    for (const auto& c : r.claims) {
      ++rep.checked;
      if (!c.pass) rep.note_failure("fig2 " + c.name + ": " + c.detail);
    }
  }
  return rep;
}

std::vector<BenchRow> bench_fastquery(int n, const std::vector<int>& ks,
                                      std::uint64_t seed, CostMode mode) {
  Rng rng(seed);
  Graph g = test_graph(n, 4, 30, rng.next());
  NetworkRun pre(g, make_config(mode));
  FastQueryState st = preprocess_fast_query(pre, rng.next());
  std::vector<BenchRow> rows;
  for (int k : ks) {
    QueryBatch batch = mixed_queries(g, k, rng.next());
    NetworkRun run(g, make_config(mode));
    auto answers = answer_batch_fast(run, st, batch);
    long long exact = 0;
    for (const AnswerRow& r : answers)
      if (r.error.empty() &&
          r.distance == oracle::rp(g, r.q.x, r.q.y,
                                   *g.find_edge(r.q.u, r.q.v)))
        ++exact;
    BenchRow row;
    row.algorithm = "fastquery";
    row.n = g.n();
    row.m = g.m();
    row.k = k;
    row.diameter = undirected_diameter_of(g);
    row.mode = mode == CostMode::kCharged ? "charged" : "faithful";
    row.rounds = run.ledger().rounds();
    row.peak_congestion = run.ledger().peak_congestion();
    row.exact_match_rate =
        batch.empty() ? 1.0
                      : static_cast<double>(exact) /
                            static_cast<double>(batch.size());
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRow> bench_fastpre(int n, const std::vector<int>& ks,
                                    std::uint64_t seed, CostMode mode) {
  Rng rng(seed);
  Graph g = test_graph(n, 4, 30, rng.next());
  FastPreParams params;
  params.seed = rng.next();
  NetworkRun pre(g, make_config(mode));
  FastPreState st = preprocess_fast_pre(pre, params);
  std::vector<BenchRow> rows;
  for (int k : ks) {
    QueryBatch batch = mixed_queries(g, k, rng.next());
    NetworkRun run(g, make_config(mode));
    auto answers = answer_batch_pre(run, st, batch);
    long long exact = 0;
    for (const AnswerRow& r : answers)
      if (r.error.empty() &&
          r.distance == oracle::rp(g, r.q.x, r.q.y,
                                   *g.find_edge(r.q.u, r.q.v)))
        ++exact;
    BenchRow row;
    row.algorithm = "fastpre";
    row.n = g.n();
    row.m = g.m();
    row.k = k;
    row.diameter = undirected_diameter_of(g);
    row.mode = mode == CostMode::kCharged ? "charged" : "faithful";
    row.rounds = run.ledger().rounds();
    row.peak_congestion = run.ledger().peak_congestion();
    row.exact_match_rate =
        batch.empty() ? 1.0
                      : static_cast<double>(exact) /
                            static_cast<double>(batch.size());
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRow> bench_exclude(int n, const std::vector<int>& xs,
                                    std::uint64_t seed, CostMode mode) {
  Rng rng(seed);
  Graph g = test_graph(n, 4, 30, rng.next());
  std::vector<BenchRow> rows;
  for (int x_count : xs) {
    std::vector<ExcludeRequest> reqs;
    for (int i = 0; i < x_count; ++i) {
      auto x = static_cast<VertexId>(rng.bounded(g.n()));
      ShortestPathTree t = build_sp_tree(g, x);
      ExcludeRequest req{x, {}};
      for (VertexId a : t.children[x]) {
        req.paths.push_back(PathSpec{x, x, {{x, a}}});
        break;  // one path per source keeps instances uniform
      }
      reqs.push_back(std::move(req));
    }
    NetworkRun run(g, make_config(mode));
    exclude_multi_source(run, reqs, rng.next());
    BenchRow row;
    row.algorithm = "exclude";
    row.n = g.n();
    row.m = g.m();
    row.k = x_count;
    row.diameter = undirected_diameter_of(g);
    row.mode = mode == CostMode::kCharged ? "charged" : "faithful";
    row.rounds = run.ledger().rounds();
    row.peak_congestion = run.ledger().peak_congestion();
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRow> bench_baseline(int n, const std::vector<int>& ks,
                                     std::uint64_t seed, CostMode mode) {
  Rng rng(seed);
  Graph g = test_graph(n, 4, 30, rng.next());
  std::vector<BenchRow> rows;
  for (int k : ks) {
    QueryBatch batch = mixed_queries(g, k, rng.next());
    NetworkRun run(g, make_config(mode));
    answer_general_no_pre(run, batch);
    BenchRow row;
    row.algorithm = "baseline-general";
    row.n = g.n();
    row.m = g.m();
    row.k = k;
    row.mode = mode == CostMode::kCharged ? "charged" : "faithful";
    row.rounds = run.ledger().rounds();
    row.peak_congestion = run.ledger().peak_congestion();
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& os) {
  os << "algorithm,n,m,k,mode,rounds,peak_congestion,exact_match_rate\n";
  for (const BenchRow& r : rows)
    os << r.algorithm << ',' << r.n << ',' << r.m << ',' << r.k << ','
       << r.mode << ',' << r.rounds << ',' << r.peak_congestion << ','
       << r.exact_match_rate << '\n';
}

}  // namespace dso::harness
