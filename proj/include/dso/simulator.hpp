// Synchronous bounded-bandwidth message-passing engine plus the standard
// primitives used by every simulated algorithm: pipelined broadcast, tree
// downcast/upcast, staggered multi-source BFS, hop-limited Bellman-Ford,
// single-source shortest paths (faithful or charged) and random-delay
// scheduling of independent algorithm instances.
//
// Word convention: one word carries one distance value or one vertex id; a
// (distance, id) pair costs two words; announcing a query costs three.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dso/graph.hpp"
#include "dso/ledger.hpp"
#include "dso/rng.hpp"

namespace dso {

enum class CostMode { kFaithful, kCharged };

struct CostModel {
  CostMode mode = CostMode::kCharged;
  // Stand-ins for the low-congestion SSSP black box.
  std::function<std::int64_t(int)> charged_sssp_rounds = [](int n) {
    return static_cast<std::int64_t>(n) * std::max(1, ceil_log2(n));
  };
  std::function<std::int64_t(int)> charged_sssp_congestion = [](int n) {
    std::int64_t l = std::max(1, ceil_log2(n));
    return l * l;
  };
};

struct EngineConfig {
  std::int64_t bandwidth = 1;  // words per channel per round
  double envelope_c = 8.0;     // primitive cost envelope constant
  CostModel cost_model;
  std::uint64_t seed = 0;
};

// Communication record of one algorithm instance, replayed by the scheduler.
struct Trace {
  struct Entry {
    std::int64_t round;
    int channel;
    std::int64_t words;
  };
  std::vector<Entry> entries;         // faithful message flow
  std::int64_t uniform_words = 0;     // charged words on every channel ...
  std::int64_t span = 0;              // ... spread over this many rounds
  std::int64_t own_rounds = 0;        // rounds the instance takes alone

  std::int64_t max_channel_words(int channels) const;
};

struct BroadcastResult {
  std::int64_t rounds = 0;
  std::vector<VertexId> unreached;   // outside the origin's component
  std::vector<std::int64_t> received;  // items delivered per node
};

struct DowncastItem {
  VertexId target = 0;  // subtree root the payload is addressed to
  std::int64_t words = 1;
  bool flood = true;  // false: deliver to the target vertex only
};

struct BfsMultiResult {
  // hop[v][i]: hop distance from sources[i] (sorted order), -1 if unreached
  std::vector<std::vector<int>> hop;
  std::vector<VertexId> sources;      // sorted
  std::vector<int> nearest_hop;       // -1 unreached
  std::vector<VertexId> nearest_src;  // ties toward smaller source id
  std::int64_t rounds = 0;
};

struct BellmanFordResult {
  std::vector<Dist> dist;
  std::vector<int> hops;
  std::vector<VertexId> parent;  // filled only when parents requested
  std::int64_t rounds = 0;
};

struct WaveItem {
  VertexId origin = 0;
  std::int64_t words = 1;
};

struct ScheduleStats {
  std::int64_t makespan = 0;
  std::int64_t warnings = 0;  // instances exceeding their declared congestion
};

class NetworkRun {
 public:
  NetworkRun(Graph g, EngineConfig cfg);

  const Graph& graph() const { return g_; }
  const EngineConfig& config() const { return cfg_; }
  CostLedger& ledger() { return ledger_; }
  const CostLedger& ledger() const { return ledger_; }

  void begin_phase(const std::string& name) { ledger_.begin_phase(name); }
  void end_phase() { ledger_.end_phase(); }

  // --- primitives ---------------------------------------------------------

  // Pipelined broadcast of item_count items (words_per_item each) from one
  // origin; afterwards every node in the origin's component holds them all.
  BroadcastResult broadcast(VertexId origin, std::int64_t item_count,
                            std::int64_t words_per_item = 1);

  // Pipelined broadcasts from many origins at once (one per item).
  // `received`, when given, counts item deliveries per node.
  std::int64_t wave(const std::vector<WaveItem>& items,
                    std::vector<std::int64_t>* received = nullptr);

  // Items travel from the tree root toward their subtree.
  std::int64_t downcast(const ShortestPathTree& tree,
                        const std::vector<DowncastItem>& items);

  // Convergecast of one message per node (message_words wide) toward the
  // root; per-node subtree aggregates are what the fold delivers.
  std::int64_t upcast(const ShortestPathTree& tree, std::int64_t message_words);

  struct UpcastFold {
    Dist root_value = kInf;
    std::vector<Dist> subtree_value;  // fold over each vertex's subtree
    std::int64_t rounds = 0;
  };
  // Associative fold along the tree, one message per node.
  UpcastFold upcast_fold(const ShortestPathTree& tree,
                         const std::vector<Dist>& values,
                         const std::function<Dist(Dist, Dist)>& combine,
                         std::int64_t message_words = 1);

  // One round in which every node sends `words` on each incident channel.
  std::int64_t neighbor_exchange(std::int64_t words);

  BfsMultiResult bfs_multi(const std::vector<VertexId>& sources, int h,
                           bool directed = true,
                           const std::vector<char>* edge_alive = nullptr);

  // `oriented`, when given, supplies the arc orientation (it must have the
  // same vertex set and undirected links as the run's graph, e.g. its
  // reverse); channels and the ledger stay those of the run.
  BellmanFordResult bellman_ford(
      VertexId source, int h, const std::vector<char>* edge_alive = nullptr,
      const std::vector<std::pair<VertexId, Dist>>* seeds = nullptr,
      bool need_parent = false, std::int64_t message_words = 2,
      const Graph* oriented = nullptr);

  // Exact distances in both modes; only the ledger differs.
  BellmanFordResult sssp(VertexId source,
                         const std::vector<char>* edge_alive = nullptr,
                         const std::vector<std::pair<VertexId, Dist>>* seeds =
                             nullptr,
                         bool need_parent = false,
                         const Graph* oriented = nullptr);

  // Runs the instances sequentially (results are exactly the sequential
  // ones), then accounts rounds/congestion as if they had been started with
  // independent uniformly random delays in [0, k*C).
  ScheduleStats schedule_random_delays(
      std::vector<std::function<void(NetworkRun&)>>& instances, std::int64_t C,
      std::int64_t R, std::uint64_t seed);

  // --- low-level charging (used by the algorithm modules) -----------------

  void advance_rounds(std::int64_t r);
  void charge_words(int channel, std::int64_t words, std::int64_t at_round);
  void charge_uniform(std::int64_t words_per_channel, std::int64_t span);

  // Builds and charges the broadcast-tree infrastructure for every origin;
  // afterwards bfs_tree() lookups are free (the waves only pay for payload).
  void charge_broadcast_tree_setup();

  struct BfsTree {
    VertexId origin;
    std::vector<VertexId> parent;
    std::vector<std::vector<VertexId>> children;
    std::vector<int> depth;  // -1 unreached
    int height = 0;
  };
  const BfsTree& bfs_tree(VertexId origin);  // cached, derivation only

  friend class RoundDriver;

 private:
  Trace* active_trace_ = nullptr;
  std::int64_t clock_ = 0;  // trace-local when capturing

  Graph g_;
  EngineConfig cfg_;
  CostLedger ledger_;
  std::map<VertexId, BfsTree> tree_cache_;
};

}  // namespace dso
