// Excluded shortest paths: for a source x and a set of independent paths on
// T_x, compute d(x,y,P) for every path P and every y in the subtree hanging
// from P. Single-source runs use one SSSP plus a downcast and a neighbor
// exchange; multi-source runs are scheduled with random delays.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dso/graph.hpp"
#include "dso/simulator.hpp"

namespace dso {

struct ExcludeRequest {
  VertexId source = 0;
  std::vector<PathSpec> paths;
};

struct ExcludeResult {
  VertexId source = 0;
  // One entry per path, aligned with the request's path order.
  struct PerPath {
    VertexId start_vertex = 0;
    VertexId subtree_root = 0;
    // d(x,y,P) for every y in the hanging subtree, sorted by y.
    std::vector<std::pair<VertexId, Dist>> values;
  };
  std::vector<PerPath> per_path;

  std::optional<Dist> lookup(VertexId subtree_root, VertexId y) const;
};

struct ExcludeOptions {
  // When every edge weight is 1, run the BFS variant of the final
  // single-source phase (virtual origin arrivals at round d*). Results are
  // identical; only the ledger differs.
  bool unweighted_bfs = false;
  // Reuse a tree built by an earlier phase instead of charging a fresh SSSP.
  const ShortestPathTree* precomputed_tree = nullptr;
  // Run against this arc orientation (e.g. the reversed graph) while charging
  // the run's own links.
  const Graph* oriented = nullptr;
};

// Rejects non-independent path sets before spending any rounds.
ExcludeResult exclude_single_source(NetworkRun& run, const ExcludeRequest& req,
                                    const ExcludeOptions& opt = {});

// `trees`, when given, must align with reqs and carry trees an earlier
// (already charged) phase produced; otherwise each instance charges its own
// tree-building SSSP.
std::vector<ExcludeResult> exclude_multi_source(
    NetworkRun& run, const std::vector<ExcludeRequest>& reqs,
    std::uint64_t seed, const ExcludeOptions& opt = {},
    const std::vector<const ShortestPathTree*>* trees = nullptr);

// Request file: lines of the form "source; path = v0 v1 ... vk".
std::vector<ExcludeRequest> read_exclude_requests(std::istream& is,
                                                  const Graph& g);

// CSV: x,y,path_start,distance (INF for unreachable).
void write_exclude_csv(const std::vector<ExcludeResult>& results,
                       std::ostream& os);

}  // namespace dso
