// All-pairs second simple shortest paths: APSP, one exclude computation per
// source (its tree's first edges), then a per-sink local recurrence ordered
// by shortest-path hop count.
#pragma once

#include <iosfwd>

#include "dso/graph.hpp"
#include "dso/simulator.hpp"

namespace dso {

struct SispTable {
  // d2[x][y], kInf when no second simple path exists (including x == y).
  std::vector<std::vector<Dist>> d2;
};

SispTable compute_2apsisp(NetworkRun& run, std::uint64_t seed);

// CSV: x,y,d2 with INF for the sentinel.
void write_sisp_csv(const SispTable& t, std::ostream& os);

}  // namespace dso
