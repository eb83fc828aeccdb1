#include "dso/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <stdexcept>

namespace dso {

std::int64_t Trace::max_channel_words(int channels) const {
  std::vector<std::int64_t> acc(channels, 0);
  for (const Entry& e : entries) acc[e.channel] += e.words;
  std::int64_t mx = 0;
  for (auto w : acc) mx = std::max(mx, w);
  return mx + uniform_words;
}

// ---------------------------------------------------------------------------
// Round driver: per-channel FIFO queues drained at `bandwidth` words per
// round. Deliveries during a round are staged so they cannot hop two links
// in the same round.
// ---------------------------------------------------------------------------

class RoundDriver {
 public:
  using Deliver = std::function<void(int channel, int msg)>;

  RoundDriver(NetworkRun& run) : run_(run), b_(run.config().bandwidth) {
    queues_.resize(run.graph().link_count() * 2);
  }

  void enqueue(int channel, int msg, std::int64_t words) {
    if (words <= 0) return;
    if (in_step_) {
      staged_.push_back({channel, msg, words});
    } else {
      push(channel, msg, words);
    }
  }

  void enqueue_at(std::int64_t round, int channel, int msg,
                  std::int64_t words) {
    scheduled_[round].push_back({channel, msg, words});
  }

  // Runs rounds until all queues drain; returns the final round count.
  std::int64_t run_until_empty(const Deliver& deliver) {
    while (!active_.empty() || !scheduled_.empty()) step(deliver);
    return round_;
  }

  std::int64_t round() const { return round_; }
  bool idle() const { return active_.empty() && scheduled_.empty(); }

  void step(const Deliver& deliver) {
    // arrivals scheduled for the round that is about to execute
    auto it = scheduled_.begin();
    if (it != scheduled_.end() && it->first <= round_) {
      for (const Staged& s : it->second) push(s.channel, s.msg, s.words);
      scheduled_.erase(it);
    }
    ++round_;
    in_step_ = true;
    std::vector<int> now(active_.begin(), active_.end());
    for (int ch : now) {
      std::int64_t budget = b_;
      auto& q = queues_[ch];
      std::int64_t delivered = 0;
      while (budget > 0 && !q.empty()) {
        auto& [msg, left] = q.front();
        std::int64_t dec = std::min(budget, left);
        left -= dec;
        budget -= dec;
        delivered += dec;
        run_.charge_words(ch, dec, round_);
        if (left == 0) {
          int m = msg;
          q.pop_front();
          deliver(ch, m);
        }
      }
      if (delivered > b_) run_.ledger().add_violation();  // cannot happen
      if (q.empty()) active_.erase(ch);
    }
    in_step_ = false;
    for (const Staged& s : staged_) push(s.channel, s.msg, s.words);
    staged_.clear();
  }

 private:
  struct Staged {
    int channel;
    int msg;
    std::int64_t words;
  };

  void push(int channel, int msg, std::int64_t words) {
    queues_[channel].push_back({msg, words});
    active_.insert(channel);
  }

  NetworkRun& run_;
  std::int64_t b_;
  std::int64_t round_ = 0;
  bool in_step_ = false;
  std::vector<std::deque<std::pair<int, std::int64_t>>> queues_;
  std::set<int> active_;
  std::vector<Staged> staged_;
  std::map<std::int64_t, std::vector<Staged>> scheduled_;
};

// ---------------------------------------------------------------------------
// NetworkRun
// ---------------------------------------------------------------------------

NetworkRun::NetworkRun(Graph g, EngineConfig cfg)
    : g_(std::move(g)), cfg_(std::move(cfg)), ledger_(g_.link_count() * 2) {
  if (cfg_.bandwidth < 1) throw std::invalid_argument("bandwidth must be >= 1");
}

void NetworkRun::advance_rounds(std::int64_t r) {
  clock_ += r;
  if (active_trace_) {
    active_trace_->span = std::max(active_trace_->span, clock_);
    active_trace_->own_rounds = clock_;
  } else {
    ledger_.add_rounds(r);
  }
}

void NetworkRun::charge_words(int channel, std::int64_t words,
                              std::int64_t at_round) {
  if (active_trace_) {
    active_trace_->entries.push_back({clock_ + at_round, channel, words});
  } else {
    ledger_.add_words(channel, words);
  }
}

void NetworkRun::charge_uniform(std::int64_t words_per_channel,
                                std::int64_t span) {
  if (active_trace_) {
    active_trace_->uniform_words += words_per_channel;
    active_trace_->span = std::max(active_trace_->span, clock_ + span);
  } else {
    for (int ch = 0; ch < g_.link_count() * 2; ++ch)
      ledger_.add_words(ch, words_per_channel);
  }
}

const NetworkRun::BfsTree& NetworkRun::bfs_tree(VertexId origin) {
  auto it = tree_cache_.find(origin);
  if (it != tree_cache_.end()) return it->second;
  BfsTree t;
  t.origin = origin;
  const int n = g_.n();
  t.parent.assign(n, -1);
  t.children.assign(n, {});
  t.depth.assign(n, -1);
  std::deque<VertexId> q;
  t.depth[origin] = 0;
  q.push_back(origin);
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop_front();
    t.height = std::max(t.height, t.depth[u]);
    for (VertexId v : g_.neighbors(u)) {
      if (t.depth[v] < 0) {
        t.depth[v] = t.depth[u] + 1;
        t.parent[v] = u;
        t.children[u].push_back(v);
        q.push_back(v);
      }
    }
  }
  return tree_cache_.emplace(origin, std::move(t)).first->second;
}

void NetworkRun::charge_broadcast_tree_setup() {
  // Pipelined wavefront constructions from every vertex: one announcement
  // per origin per channel, n + D rounds overall.
  int max_height = 0;
  for (VertexId v = 0; v < g_.n(); ++v)
    max_height = std::max(max_height, bfs_tree(v).height);
  for (int ch = 0; ch < g_.link_count() * 2; ++ch)
    charge_words(ch, g_.n(), 1);
  advance_rounds(g_.n() + max_height);
}

BroadcastResult NetworkRun::broadcast(VertexId origin, std::int64_t item_count,
                                      std::int64_t words_per_item) {
  BroadcastResult res;
  std::vector<WaveItem> items(static_cast<std::size_t>(item_count),
                              WaveItem{origin, words_per_item});
  res.received.assign(g_.n(), 0);
  res.rounds = wave(items, &res.received);
  const BfsTree& t = bfs_tree(origin);
  for (VertexId v = 0; v < g_.n(); ++v) {
    if (t.depth[v] < 0)
      res.unreached.push_back(v);
    else if (v != origin && res.received[v] != item_count)
      throw std::logic_error("broadcast delivery incomplete");
  }
  res.received[origin] = item_count;  // the origin holds its own items
  return res;
}

std::int64_t NetworkRun::wave(const std::vector<WaveItem>& items,
                              std::vector<std::int64_t>* received) {
  // Pre-touch trees so lookups below cannot invalidate references.
  for (const WaveItem& it : items) bfs_tree(it.origin);
  RoundDriver driver(*this);
  // msg id encodes the item index.
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    const BfsTree& t = tree_cache_.at(items[i].origin);
    for (VertexId c : t.children[items[i].origin])
      driver.enqueue(g_.channel(items[i].origin, c), i, items[i].words);
  }
  std::int64_t rounds = driver.run_until_empty([&](int ch, int msg) {
    auto [from, to] = g_.channel_endpoints(ch);
    (void)from;
    if (received) (*received)[to] += 1;
    const BfsTree& t = tree_cache_.at(items[msg].origin);
    for (VertexId c : t.children[to])
      driver.enqueue(g_.channel(to, c), msg, items[msg].words);
  });
  advance_rounds(rounds);
  return rounds;
}

std::int64_t NetworkRun::downcast(const ShortestPathTree& tree,
                                  const std::vector<DowncastItem>& items) {
  RoundDriver driver(*this);
  // For each item: the set of tree channels that carry it.
  // path links root->target, plus (when flooding) all links below target.
  std::vector<std::vector<char>> carries(items.size());
  const int chans = g_.link_count() * 2;
  for (std::size_t i = 0; i < items.size(); ++i) {
    carries[i].assign(chans, 0);
    const DowncastItem& it = items[i];
    if (!tree.reachable(it.target)) continue;
    auto path = tree.path_from_root(it.target);
    for (std::size_t j = 0; j + 1 < path.size(); ++j)
      carries[i][g_.channel(path[j], path[j + 1])] = 1;
    if (it.flood) {
      // all tree links inside subtree(target)
      std::vector<VertexId> stack{it.target};
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId c : tree.children[v]) {
          carries[i][g_.channel(v, c)] = 1;
          stack.push_back(c);
        }
      }
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!tree.reachable(items[i].target)) continue;
    for (VertexId c : tree.children[tree.root])
      if (carries[i][g_.channel(tree.root, c)])
        driver.enqueue(g_.channel(tree.root, c), static_cast<int>(i),
                       items[i].words);
  }
  std::int64_t rounds = driver.run_until_empty([&](int ch, int msg) {
    auto [from, to] = g_.channel_endpoints(ch);
    (void)from;
    for (VertexId c : tree.children[to])
      if (carries[msg][g_.channel(to, c)])
        driver.enqueue(g_.channel(to, c), msg, items[msg].words);
  });
  advance_rounds(rounds);
  return rounds;
}

std::int64_t NetworkRun::upcast(const ShortestPathTree& tree,
                                std::int64_t message_words) {
  return upcast_fold(tree, std::vector<Dist>(g_.n(), 0),
                     [](Dist a, Dist b) { return a + b; }, message_words)
      .rounds;
}

NetworkRun::UpcastFold NetworkRun::upcast_fold(
    const ShortestPathTree& tree, const std::vector<Dist>& values,
    const std::function<Dist(Dist, Dist)>& combine,
    std::int64_t message_words) {
  RoundDriver driver(*this);
  const int n = g_.n();
  UpcastFold out;
  out.subtree_value.assign(n, kInf);
  std::vector<int> pending(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (!tree.reachable(v)) continue;
    pending[v] = static_cast<int>(tree.children[v].size());
    out.subtree_value[v] = values[v];
  }
  auto send_up = [&](VertexId v) {
    if (v == tree.root) return;
    driver.enqueue(g_.channel(v, tree.parent[v]), v, message_words);
  };
  for (VertexId v = 0; v < n; ++v)
    if (tree.reachable(v) && pending[v] == 0) send_up(v);
  std::int64_t rounds = driver.run_until_empty([&](int ch, int msg) {
    auto [from, to] = g_.channel_endpoints(ch);
    (void)from;
    VertexId child = static_cast<VertexId>(msg);
    out.subtree_value[to] = combine(out.subtree_value[to],
                                    out.subtree_value[child]);
    if (--pending[to] == 0) send_up(to);
  });
  advance_rounds(std::max<std::int64_t>(rounds, 1));
  out.rounds = rounds;
  if (tree.reachable(tree.root)) out.root_value = out.subtree_value[tree.root];
  return out;
}

std::int64_t NetworkRun::neighbor_exchange(std::int64_t words) {
  const int chans = g_.link_count() * 2;
  std::int64_t rounds = (words + cfg_.bandwidth - 1) / cfg_.bandwidth;
  for (int ch = 0; ch < chans; ++ch) charge_words(ch, words, rounds);
  advance_rounds(rounds);
  return rounds;
}

BfsMultiResult NetworkRun::bfs_multi(const std::vector<VertexId>& sources,
                                     int h, bool directed,
                                     const std::vector<char>* edge_alive) {
  if (sources.empty()) throw std::invalid_argument("bfs_multi needs a source");
  BfsMultiResult res;
  res.sources = sources;
  std::sort(res.sources.begin(), res.sources.end());
  res.sources.erase(std::unique(res.sources.begin(), res.sources.end()),
                    res.sources.end());
  const int n = g_.n();
  const int k = static_cast<int>(res.sources.size());
  res.hop.assign(n, std::vector<int>(k, -1));
  if (h < 0) h = n;  // no limit

  RoundDriver driver(*this);
  // message payload: (source rank, sender hop) -> 2 words
  struct Pending {
    int rank;
    int hop;
  };
  std::vector<Pending> msgs;
  auto announce = [&](VertexId u, int rank, int hop, std::int64_t at) {
    if (hop >= h) return;  // receivers would exceed the limit
    int id = static_cast<int>(msgs.size());
    msgs.push_back({rank, hop});
    if (directed) {
      for (const OutArc& a : g_.out(u)) {
        if (edge_alive && !(*edge_alive)[a.edge]) continue;
        if (at > 0)
          driver.enqueue_at(at, g_.channel(u, a.to), id, 2);
        else
          driver.enqueue(g_.channel(u, a.to), id, 2);
      }
    } else {
      for (VertexId v : g_.neighbors(u)) {
        if (at > 0)
          driver.enqueue_at(at, g_.channel(u, v), id, 2);
        else
          driver.enqueue(g_.channel(u, v), id, 2);
      }
    }
  };
  for (int r = 0; r < k; ++r) {
    res.hop[res.sources[r]][r] = 0;
    announce(res.sources[r], r, 0, r);  // staggered starts
  }
  res.rounds = driver.run_until_empty([&](int ch, int msg) {
    auto [from, to] = g_.channel_endpoints(ch);
    (void)from;
    const Pending& p = msgs[msg];
    int cand = p.hop + 1;
    int& cur = res.hop[to][p.rank];
    if (cur < 0 || cand < cur) {
      cur = cand;
      announce(to, p.rank, cand, 0);
    }
  });
  advance_rounds(res.rounds);

  res.nearest_hop.assign(n, -1);
  res.nearest_src.assign(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    for (int r = 0; r < k; ++r) {
      int hv = res.hop[v][r];
      if (hv < 0) continue;
      if (res.nearest_hop[v] < 0 || hv < res.nearest_hop[v]) {
        res.nearest_hop[v] = hv;
        res.nearest_src[v] = res.sources[r];
      }
    }
  }
  return res;
}

BellmanFordResult NetworkRun::bellman_ford(
    VertexId source, int h, const std::vector<char>* edge_alive,
    const std::vector<std::pair<VertexId, Dist>>* seeds, bool need_parent,
    std::int64_t message_words, const Graph* oriented) {
  const Graph& go = oriented ? *oriented : g_;
  const int n = g_.n();
  BellmanFordResult res;
  res.dist.assign(n, kInf);
  res.hops.assign(n, -1);
  res.dist[source] = 0;
  res.hops[source] = 0;
  std::vector<char> improved(n, 0);
  improved[source] = 1;
  if (seeds) {
    for (auto [v, d] : *seeds) {
      if (d < kInf && d < res.dist[v]) {
        res.dist[v] = d;
        res.hops[v] = 1;
        improved[v] = 1;
      }
    }
  }
  RoundDriver driver(*this);
  struct Payload {
    VertexId sender;
    Dist dist;
    int hops;
  };
  std::vector<Payload> msgs;
  std::int64_t rounds = 0;
  for (int it = 0; it < h; ++it) {
    bool any = false;
    for (VertexId u = 0; u < n; ++u) {
      if (!improved[u]) continue;
      improved[u] = 0;
      for (const OutArc& a : go.out(u)) {
        if (edge_alive && !(*edge_alive)[a.edge]) continue;
        int id = static_cast<int>(msgs.size());
        msgs.push_back({u, res.dist[u], res.hops[u]});
        driver.enqueue(g_.channel(u, a.to), id, message_words);
        any = true;
      }
    }
    if (!any) break;
    // Synchronous iteration: drain, then apply relaxations together.
    std::vector<std::pair<VertexId, Payload>> arrived;
    rounds = driver.run_until_empty([&](int ch, int msg) {
      auto [from, to] = g_.channel_endpoints(ch);
      (void)from;
      arrived.push_back({to, msgs[msg]});
    });
    for (auto& [v, p] : arrived) {
      auto e = go.find_edge(p.sender, v);
      Dist nd = sat_add(p.dist, e ? go.edge(*e).w : kInf);
      int nh = p.hops + 1;
      if (nd < res.dist[v] || (nd == res.dist[v] && nh < res.hops[v])) {
        res.dist[v] = nd;
        res.hops[v] = nh;
        improved[v] = 1;
      }
    }
  }
  res.rounds = rounds;
  advance_rounds(rounds);
  if (need_parent) {
    neighbor_exchange(2);  // final (dist, hops) exchange
    res.parent.assign(n, -1);
    for (VertexId v = 0; v < n; ++v) {
      if (v == source || res.dist[v] >= kInf) continue;
      for (const InArc& a : go.in(v)) {
        if (edge_alive && !(*edge_alive)[a.edge]) continue;
        if (res.dist[a.from] >= kInf) continue;
        if (sat_add(res.dist[a.from], a.w) == res.dist[v] &&
            res.hops[a.from] + 1 == res.hops[v]) {
          res.parent[v] = a.from;
          break;
        }
      }
    }
  }
  return res;
}

BellmanFordResult NetworkRun::sssp(
    VertexId source, const std::vector<char>* edge_alive,
    const std::vector<std::pair<VertexId, Dist>>* seeds, bool need_parent,
    const Graph* oriented) {
  if (cfg_.cost_model.mode == CostMode::kFaithful)
    return bellman_ford(source, g_.n() - 1, edge_alive, seeds, need_parent, 2,
                        oriented);

  SpOptions opt;
  opt.edge_alive = edge_alive;
  opt.seeds = seeds;
  SpResult sp = dijkstra(oriented ? *oriented : g_, source, opt);
  BellmanFordResult res;
  res.dist = std::move(sp.dist);
  res.hops = std::move(sp.hops);
  std::int64_t r = cfg_.cost_model.charged_sssp_rounds(g_.n());
  std::int64_t c = cfg_.cost_model.charged_sssp_congestion(g_.n());
  charge_uniform(c, r);
  advance_rounds(r);
  res.rounds = r;
  if (need_parent) {
    neighbor_exchange(2);
    res.parent = std::move(sp.parent);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Random-delay scheduling.
//
// Instances run sequentially (their outputs are the sequential ones by
// construction); the recorded traces are then replayed with random start
// delays through a per-channel FIFO queue model to obtain the makespan and
// congestion the overlapped execution would show. Charged-mode uniform
// congestion is spread evenly over an instance's span; the queue model
// evaluates completion at arrival breakpoints, which is exact for impulse
// arrivals and a tight bound for the spread ones.
// ---------------------------------------------------------------------------

namespace {

struct Impulse {
  std::int64_t round;
  std::int64_t words;
};

// FIFO completion time: max over arrivals of (arrival round + ceil(suffix/B)).
std::int64_t fifo_completion(std::vector<Impulse>& arr, std::int64_t b) {
  if (arr.empty()) return 0;
  std::sort(arr.begin(), arr.end(),
            [](const Impulse& x, const Impulse& y) { return x.round < y.round; });
  std::int64_t finish = 0;
  std::int64_t suffix = 0;
  for (auto it = arr.rbegin(); it != arr.rend(); ++it) {
    suffix += it->words;
    finish = std::max(finish, it->round + (suffix + b - 1) / b);
  }
  return finish;
}

}  // namespace

ScheduleStats NetworkRun::schedule_random_delays(
    std::vector<std::function<void(NetworkRun&)>>& instances, std::int64_t C,
    std::int64_t R, std::uint64_t seed) {
  (void)R;
  const int k = static_cast<int>(instances.size());
  ScheduleStats stats;
  if (k == 0) return stats;
  const int chans = g_.link_count() * 2;

  std::vector<Trace> traces(k);
  for (int i = 0; i < k; ++i) {
    Trace* prev = active_trace_;
    std::int64_t saved_clock = clock_;
    active_trace_ = &traces[i];
    clock_ = 0;
    instances[i](*this);
    active_trace_ = prev;
    clock_ = saved_clock;
  }

  Rng rng(hash_tuple(seed, 0x5eedULL));
  std::vector<std::int64_t> delays(k, 0);
  std::int64_t window = std::max<std::int64_t>(1, static_cast<std::int64_t>(k) * C);
  for (int i = 0; i < k; ++i)
    delays[i] = (k == 1) ? 0 : static_cast<std::int64_t>(rng.bounded(window));

  // Uniform (charged) arrivals form the same stream on every channel; spread
  // each instance's uniform words over its span as at most 16 impulses.
  std::vector<Impulse> uniform_profile;
  std::vector<std::vector<Impulse>> entry_arrivals(chans);
  std::vector<std::int64_t> entry_totals(chans, 0);
  std::int64_t uniform_total = 0;
  std::int64_t floor_rounds = 0;
  for (int i = 0; i < k; ++i) {
    const Trace& t = traces[i];
    floor_rounds = std::max(floor_rounds, delays[i] + t.span);
    if (t.uniform_words > 0) {
      std::int64_t chunks = std::min<std::int64_t>(16, t.uniform_words);
      std::int64_t span = std::max<std::int64_t>(1, t.span);
      for (std::int64_t c2 = 0; c2 < chunks; ++c2) {
        std::int64_t w = t.uniform_words / chunks +
                         (c2 < t.uniform_words % chunks ? 1 : 0);
        std::int64_t at = delays[i] + (span * c2) / chunks;
        uniform_profile.push_back({at, w});
      }
      uniform_total += t.uniform_words;
    }
    for (const Trace::Entry& e : t.entries) {
      entry_arrivals[e.channel].push_back({delays[i] + e.round, e.words});
      entry_totals[e.channel] += e.words;
    }
    if (t.max_channel_words(chans) > C) {
      stats.warnings++;
      ledger_.add_scheduling_warning();
    }
  }

  std::int64_t makespan = floor_rounds;
  std::sort(uniform_profile.begin(), uniform_profile.end(),
            [](const Impulse& x, const Impulse& y) { return x.round < y.round; });
  std::vector<std::int64_t> uni_suffix(uniform_profile.size() + 1, 0);
  for (int i = static_cast<int>(uniform_profile.size()) - 1; i >= 0; --i)
    uni_suffix[i] = uni_suffix[i + 1] + uniform_profile[i].words;
  {
    // completion of the uniform stream alone (identical on all channels)
    std::vector<Impulse> prof = uniform_profile;
    makespan = std::max(makespan, fifo_completion(prof, cfg_.bandwidth));
  }
  for (int ch = 0; ch < chans; ++ch) {
    if (entry_arrivals[ch].empty()) continue;
    // entries merged with the uniform stream; evaluate at entry breakpoints
    std::vector<Impulse>& arr = entry_arrivals[ch];
    std::sort(arr.begin(), arr.end(),
              [](const Impulse& x, const Impulse& y) { return x.round < y.round; });
    std::int64_t suffix = 0;
    std::int64_t finish = 0;
    for (auto it = arr.rbegin(); it != arr.rend(); ++it) {
      suffix += it->words;
      // uniform words arriving at or after this breakpoint
      auto pos = std::lower_bound(
          uniform_profile.begin(), uniform_profile.end(), it->round,
          [](const Impulse& im, std::int64_t r) { return im.round < r; });
      std::int64_t uw = uni_suffix[pos - uniform_profile.begin()];
      finish = std::max(finish,
                        it->round + (suffix + uw + cfg_.bandwidth - 1) /
                                        cfg_.bandwidth);
    }
    makespan = std::max(makespan, finish);
  }

  advance_rounds(makespan);
  for (int ch = 0; ch < chans; ++ch) {
    std::int64_t w = entry_totals[ch] + uniform_total;
    if (w > 0) charge_words(ch, w, 0);
  }
  stats.makespan = makespan;
  return stats;
}

}  // namespace dso
