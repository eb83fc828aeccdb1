// Randomized verification and benchmark drivers shared by the CLI and the
// acceptance suite. Every function is a pure function of its seed.
#pragma once

#include <string>
#include <vector>

#include "dso/graph.hpp"
#include "dso/queries.hpp"
#include "dso/simulator.hpp"

namespace dso::harness {

struct VerifyReport {
  long long checked = 0;
  long long mismatches = 0;
  long long one_sided_violations = 0;
  long long bandwidth_violations = 0;
  long long infinite_cases = 0;  // queries whose true answer is unreachable
  long long off_path_cases = 0;  // failed edge off the tie-broken path
  std::vector<std::string> failures;  // first few, for diagnostics
  double mismatch_rate() const {
    return checked == 0 ? 0.0
                        : static_cast<double>(mismatches) /
                              static_cast<double>(checked);
  }
  void note_failure(const std::string& what);
};

EngineConfig make_config(CostMode mode, std::uint64_t seed = 0);

// Random graph in the style the verification suites use: m <= factor*n edges,
// weights in [1, max_w]. deep=true yields long shortest-path trees (chain
// backbone with expensive chords).
Graph test_graph(int n, int m_factor, Dist max_w, std::uint64_t seed,
                 bool deep = false);

// Mixed query batch: about half the failed edges lie on the tie-broken
// shortest path from the query source.
QueryBatch mixed_queries(const Graph& g, int k, std::uint64_t seed);

VerifyReport verify_exclude(int n, int trials, std::uint64_t seed,
                            CostMode mode);
VerifyReport verify_fastquery(int n, int graphs, int queries_per_graph,
                              std::uint64_t seed, CostMode mode);
// For the sampling-based oracle, `mismatches` counts non-exact answers (they
// must still be one-sided); allowance is applied by the caller.
VerifyReport verify_fastpre(int n, int graphs, int queries_per_graph, double c,
                            double c_g, std::uint64_t seed, CostMode mode);
VerifyReport verify_apsisp(int n, int trials, std::uint64_t seed,
                           CostMode mode);
VerifyReport verify_baseline(int n, int queries, std::uint64_t seed,
                             CostMode mode, bool single_edge_batch);
VerifyReport verify_lowerbound_fig1(int k, int q, int ell, int instances,
                                    std::uint64_t seed);
VerifyReport verify_lowerbound_fig2(int n_bits, int instances, int stretch,
                                    std::uint64_t seed);

struct BenchRow {
  std::string algorithm;
  int n = 0, m = 0, k = 0;
  std::string mode;
  std::int64_t rounds = 0;
  std::int64_t peak_congestion = 0;
  double exact_match_rate = 1.0;
  int diameter = 0;  // undirected, of the benchmarked graph
};

std::vector<BenchRow> bench_fastquery(int n, const std::vector<int>& ks,
                                      std::uint64_t seed, CostMode mode);
std::vector<BenchRow> bench_fastpre(int n, const std::vector<int>& ks,
                                    std::uint64_t seed, CostMode mode);
// one row per source-set size: peak congestion of the scheduled excludes
std::vector<BenchRow> bench_exclude(int n, const std::vector<int>& xs,
                                    std::uint64_t seed, CostMode mode);
std::vector<BenchRow> bench_baseline(int n, const std::vector<int>& ks,
                                     std::uint64_t seed, CostMode mode);

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& os);

}  // namespace dso::harness
