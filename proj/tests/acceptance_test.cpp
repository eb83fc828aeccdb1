// Acceptance suite: one binary, one pass/fail line per criterion, nonzero
// exit if any criterion fails. Tolerances are pinned in code next to each
// check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dso/apsisp.hpp"
#include "dso/dso_fastquery.hpp"
#include "dso/dso_fastpre.hpp"
#include "dso/exclude.hpp"
#include "dso/harness.hpp"
#include "dso/lowerbound.hpp"
#include "dso/oracle.hpp"
#include "dso/queries.hpp"
#include "dso/rng.hpp"

using namespace dso;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  long long bandwidth_violations = 0;
};

std::string brief(const harness::VerifyReport& r) {
  std::ostringstream ss;
  ss << "checked=" << r.checked << " mismatches=" << r.mismatches;
  if (!r.failures.empty()) ss << " first: " << r.failures.front();
  return ss.str();
}

// 1. Every excluded distance from the multi-source computation equals the
//    centralized oracle. Tolerance: exact.
Outcome criterion1() {
  auto rep = harness::verify_exclude(/*n=*/48, /*trials=*/50, /*seed=*/101,
                                     CostMode::kCharged);
  Outcome o;
  o.pass = rep.mismatches == 0 && rep.checked > 0;
  o.detail = brief(rep);
  o.bandwidth_violations = rep.bandwidth_violations;
  return o;
}

// 2. 500 fast-query answers across 20 graphs (n <= 48) match the oracle
//    exactly, including unreachable answers and off-path queries.
Outcome criterion2() {
  auto rep = harness::verify_fastquery(/*n=*/48, /*graphs=*/20,
                                       /*queries=*/25, /*seed=*/202,
                                       CostMode::kCharged);
  Outcome o;
  o.pass = rep.checked == 500 && rep.mismatches == 0 &&
           rep.infinite_cases > 0 && rep.off_path_cases > 0;
  std::ostringstream ss;
  ss << brief(rep) << " infinite=" << rep.infinite_cases
     << " off_path=" << rep.off_path_cases;
  o.detail = ss.str();
  o.bandwidth_violations = rep.bandwidth_violations;
  return o;
}

// 3. Fast-preprocessing DSO with c=2, c_g=4 over 500 queries (n <= 40):
//    every answer >= oracle, at least 99% exact, and short true replacement
//    paths always exact (undershoots and short-path misses both count as
//    one-sided violations).
Outcome criterion3() {
  auto rep = harness::verify_fastpre(/*n=*/40, /*graphs=*/20, /*queries=*/25,
                                     /*c=*/2.0, /*c_g=*/4.0, /*seed=*/303,
                                     CostMode::kCharged);
  Outcome o;
  o.pass = rep.checked == 500 && rep.one_sided_violations == 0 &&
           rep.mismatch_rate() <= 0.01;
  std::ostringstream ss;
  ss << brief(rep) << " rate=" << rep.mismatch_rate()
     << " one_sided=" << rep.one_sided_violations;
  o.detail = ss.str();
  o.bandwidth_violations = rep.bandwidth_violations;
  return o;
}

// 4. Full second-path tables on 20 graphs (n <= 32) equal the oracle under
//    both tie-break rules. Exact.
Outcome criterion4() {
  auto rep =
      harness::verify_apsisp(/*n=*/32, /*trials=*/20, /*seed=*/404,
                             CostMode::kCharged);
  Outcome o;
  o.pass = rep.mismatches == 0 && rep.checked > 0;
  o.detail = brief(rep);
  o.bandwidth_violations = rep.bandwidth_violations;
  return o;
}

// 5. Hard-instance families: detour distances and the bit dichotomy hold for
//    every endpoint pair and every failed detour edge; second-path distances
//    encode the bits (plain and stretch-3), and the bits are recoverable
//    from the distributed second-path table. Exact.
Outcome criterion5() {
  Outcome o;
  std::ostringstream ss;
  long long checked = 0;
  for (auto [k, q, ell] : std::vector<std::array<int, 3>>{
           {2, 2, 4}, {4, 4, 8}, {8, 8, 8}, {3, 5, 6}, {8, 2, 5}}) {
    auto rep = harness::verify_lowerbound_fig1(k, q, ell, /*instances=*/4,
                                               /*seed=*/505 + k);
    checked += rep.checked;
    if (rep.mismatches != 0) {
      o.pass = false;
      ss << " fig1(" << k << "," << q << "," << ell
         << "): " << rep.failures.front();
    }
  }
  for (int stretch : {1, 3}) {
    auto rep = harness::verify_lowerbound_fig2(/*n_bits=*/16, /*instances=*/10,
                                               stretch, /*seed=*/606 + stretch);
    checked += rep.checked;
    if (rep.mismatches != 0) {
      o.pass = false;
      ss << " fig2(stretch " << stretch << "): " << rep.failures.front();
    }
  }
  // bit recovery from the distributed table
  Rng rng(707);
  for (int inst = 0; inst < 4; ++inst) {
    std::vector<char> bits(12);
    for (char& b : bits) b = rng.coin(0.5) ? 1 : 0;
    Fig2Build b = build_fig2(12, bits, 1);
    NetworkRun run(b.graph, harness::make_config(CostMode::kCharged));
    auto table = compute_2apsisp(run, rng.next());
    o.bandwidth_violations += run.ledger().bandwidth_violations();
    for (int i = 0; i < 12; ++i) {
      ++checked;
      bool recovered = table.d2[b.a[i]][b.q] == 3;
      if (recovered != static_cast<bool>(bits[i])) {
        o.pass = false;
        ss << " bit_recovery[" << inst << "][" << i << "]";
      }
    }
  }
  ss << " checked=" << checked;
  o.detail = ss.str();
  return o;
}

// 6. Measured cost envelopes in charged mode:
//    - fast-query batches fit rounds <= 64 * (k + D) across k in {1,4,16,64}
//      on n=64, and the k->rounds relation is linear (relative residual of a
//      least-squares fit <= 0.05);
//    - fast-preprocessing batches fit rounds <= 16 * (k*ceil(sqrt n)*log2^2 n
//      + D);
//    - scheduled exclude peak congestion grows at most linearly in |X| with
//      slack log2^2 n over the |X|=1 baseline.
Outcome criterion6() {
  Outcome o;
  std::ostringstream ss;
  const double c_fq = 64.0, c_fp = 16.0;
  auto fq = harness::bench_fastquery(64, {1, 4, 16, 64}, 808,
                                     CostMode::kCharged);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : fq) {
    if (row.rounds > c_fq * (row.k + row.diameter)) {
      o.pass = false;
      ss << " fastquery k=" << row.k << " rounds=" << row.rounds
         << " bound=" << c_fq * (row.k + row.diameter);
    }
    if (row.exact_match_rate != 1.0) {
      o.pass = false;
      ss << " fastquery inexact at k=" << row.k;
    }
    sx += row.k;
    sy += static_cast<double>(row.rounds);
    sxx += 1.0 * row.k * row.k;
    sxy += 1.0 * row.k * static_cast<double>(row.rounds);
  }
  {
    double npts = static_cast<double>(fq.size());
    double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    double icept = (sy - slope * sx) / npts;
    double span = 0;
    for (const auto& row : fq)
      span = std::max(span, static_cast<double>(row.rounds));
    for (const auto& row : fq) {
      double fit = slope * row.k + icept;
      if (std::abs(fit - static_cast<double>(row.rounds)) > 0.05 * span) {
        o.pass = false;
        ss << " fastquery nonlinear at k=" << row.k;
      }
    }
    ss << " fq_slope=" << slope;
  }
  int l2 = ceil_log2(64);
  auto fp = harness::bench_fastpre(64, {1, 4, 16}, 809, CostMode::kCharged);
  for (const auto& row : fp) {
    double bound =
        c_fp * (1.0 * row.k * ceil_sqrt(row.n) * l2 * l2 + row.diameter);
    if (static_cast<double>(row.rounds) > bound) {
      o.pass = false;
      ss << " fastpre k=" << row.k << " rounds=" << row.rounds
         << " bound=" << bound;
    }
  }
  auto ex = harness::bench_exclude(64, {1, 2, 4, 8, 16}, 810,
                                   CostMode::kCharged);
  std::int64_t base = ex.front().peak_congestion;
  for (const auto& row : ex) {
    double bound = static_cast<double>(l2) * l2 *
                   static_cast<double>(row.k) * static_cast<double>(base);
    if (static_cast<double>(row.peak_congestion) > bound) {
      o.pass = false;
      ss << " exclude |X|=" << row.k << " peak=" << row.peak_congestion
         << " bound=" << bound;
    }
  }
  ss << " (fq rounds:";
  for (const auto& row : fq) ss << ' ' << row.rounds;
  ss << ")";
  o.detail = ss.str();
  return o;
}

// 7. Simulator integrity: the bandwidth-safety counter stays zero across the
//    whole suite, and ten randomized pipelines replay byte-identically.
Outcome criterion7(long long suite_violations) {
  Outcome o;
  std::ostringstream ss;
  int identical = 0;
  for (int cfg = 0; cfg < 10; ++cfg) {
    std::uint64_t seed = 1000 + 17 * cfg;
    auto run_once = [&]() {
      Rng rng(seed);
      Graph g = harness::test_graph(24 + cfg, 3, 20, rng.next(), cfg % 3 == 1);
      NetworkRun run(g, harness::make_config(CostMode::kCharged, seed));
      std::ostringstream out;
      if (cfg % 2 == 0) {
        FastQueryState st = preprocess_fast_query(run, rng.next());
        auto rows = answer_batch_fast(
            run, st, harness::mixed_queries(g, 12, rng.next()));
        write_answers_csv(rows, out);
      } else {
        auto table = compute_2apsisp(run, rng.next());
        write_sisp_csv(table, out);
      }
      run.ledger().write_csv(out);
      return out.str();
    };
    std::string a = run_once();
    std::string b = run_once();
    if (a == b) ++identical;
  }
  o.pass = identical == 10 && suite_violations == 0;
  ss << "identical_replays=" << identical << "/10"
     << " suite_bandwidth_violations=" << suite_violations;
  o.detail = ss.str();
  return o;
}

// 8. Tree cutting on 200 random shortest-path trees (n <= 128): at most
//    2*ceil(sqrt n) level depths, every tree path of >= ceil(sqrt n) hops
//    crosses a level depth, and every interval family passes the
//    independence check. Exact.
Outcome criterion8() {
  Outcome o;
  Rng rng(909);
  long long trees = 0, families = 0;
  std::ostringstream ss;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 16 + static_cast<int>(rng.bounded(113));
    Graph g = harness::test_graph(n, 3, 30, rng.next(), trial % 2 == 1);
    ShortestPathTree t =
        build_sp_tree(g, static_cast<VertexId>(rng.bounded(n)));
    LevelCut cut = tree_cut(t);
    ++trees;
    int s = cut.sqrt_n;
    if (static_cast<int>(cut.level_depths.size()) > 2 * s) {
      o.pass = false;
      ss << " depth_count n=" << n;
    }
    for (VertexId v = 0; v < g.n(); ++v) {
      if (!t.reachable(v) || t.depth[v] < s) continue;
      bool found = false;
      for (int d : cut.level_depths)
        if (d >= t.depth[v] - s && d <= t.depth[v]) found = true;
      if (!found) {
        o.pass = false;
        ss << " flanking n=" << n << " v=" << v;
      }
    }
    for (const auto& family : cut.families) {
      if (family.empty()) continue;
      ++families;
      std::vector<PathSpec> specs;
      for (const auto& ch : family) {
        PathSpec p;
        p.source = t.root;
        p.start_vertex = ch.vertices.front();
        for (std::size_t i = 0; i + 1 < ch.vertices.size(); ++i)
          p.edges.push_back({ch.vertices[i], ch.vertices[i + 1]});
        specs.push_back(std::move(p));
      }
      if (!is_independent(t, specs)) {
        o.pass = false;
        ss << " dependent_family n=" << n;
      }
    }
  }
  ss << " trees=" << trees << " families=" << families;
  o.detail = ss.str();
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  long long suite_violations = 0;
  std::vector<Entry> entries{
      {1, "exclude oracle equivalence", criterion1},
      {2, "fast-query DSO oracle equivalence", criterion2},
      {3, "fast-preprocessing DSO one-sided w.h.p. correctness", criterion3},
      {4, "2-APSiSP exactness and tie independence", criterion4},
      {5, "hard-instance family claims", criterion5},
      {6, "charged-mode cost envelopes", criterion6},
  };
  bool all = true;
  auto report = [&](int id, const char* name, const Outcome& o, double secs) {
    std::printf("[%s] criterion %d: %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL",
                id, name, secs, o.detail.c_str());
    all = all && o.pass;
  };
  for (const Entry& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = e.fn();
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    suite_violations += o.bandwidth_violations;
    report(e.id, e.name, o, secs);
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = criterion7(suite_violations);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(7, "simulator integrity and replay determinism", o, secs);
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = criterion8();
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(8, "tree-cut structural suite", o, secs);
  }
  return all ? 0 : 1;
}
