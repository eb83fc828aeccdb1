#include "dso/dso_fastquery.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "dso/exclude.hpp"

namespace dso {

namespace {

bool heavy(const ShortestPathTree& t, VertexId v, int s) {
  return t.subtree_size[v] > s;
}

}  // namespace

LevelCut tree_cut(const ShortestPathTree& tree) {
  const int n = static_cast<int>(tree.parent.size());
  LevelCut cut;
  cut.sqrt_n = ceil_sqrt(n);
  const int s = cut.sqrt_n;
  const int maxd = tree.max_depth();

  std::set<int> depths;
  for (int i = 1; i <= s && i * s <= maxd; ++i) depths.insert(i * s);
  std::set<int> type1;
  for (VertexId v = 0; v < n; ++v) {
    if (!tree.reachable(v)) continue;
    int big = 0;
    for (VertexId c : tree.children[v])
      if (tree.subtree_size[c] >= s) ++big;
    if (big >= 2) {
      cut.type1_generators.push_back(v);
      type1.insert(tree.depth[v]);
    }
  }
  for (int d : type1) depths.insert(d);
  cut.level_depths.assign(depths.begin(), depths.end());
  cut.depth_is_type1.resize(cut.level_depths.size());
  for (std::size_t i = 0; i < cut.level_depths.size(); ++i)
    cut.depth_is_type1[i] = type1.count(cut.level_depths[i]) ? 1 : 0;

  cut.is_level.assign(n, 0);
  for (VertexId v = 0; v < n; ++v)
    if (tree.reachable(v) && depths.count(tree.depth[v])) cut.is_level[v] = 1;

  // Heavy chains between consecutive level depths. Inside an interval a
  // heavy vertex cannot have two children of size >= s (that depth would be
  // type-1), so the chains never branch below their top.
  cut.families.resize(cut.level_depths.size() ? cut.level_depths.size() - 1 : 0);
  for (std::size_t pi = 0; pi + 1 < cut.level_depths.size(); ++pi) {
    int da = cut.level_depths[pi], db = cut.level_depths[pi + 1];
    for (VertexId u = 0; u < n; ++u) {
      if (!tree.reachable(u) || tree.depth[u] != da || !heavy(tree, u, s))
        continue;
      for (VertexId c0 : tree.children[u]) {
        if (!heavy(tree, c0, s)) continue;
        LevelCut::Chain chain;
        chain.pair_index = static_cast<int>(pi);
        chain.vertices = {u, c0};
        VertexId cur = c0;
        bool complete = true;
        while (tree.depth[cur] < db) {
          VertexId next = -1;
          for (VertexId c : tree.children[cur]) {
            if (!heavy(tree, c, s)) continue;
            if (next >= 0)
              throw std::logic_error("heavy branching inside an interval");
            next = c;
          }
          if (next < 0) {
            complete = false;  // the heavy chain dies before the next level
            break;
          }
          chain.vertices.push_back(next);
          cur = next;
        }
        if (complete) cut.families[pi].push_back(std::move(chain));
      }
    }
  }

  // Level-ancestor lists via one pass down the tree.
  cut.level_ancestors.assign(n, {});
  std::vector<VertexId> stack;
  if (tree.reachable(tree.root)) stack.push_back(tree.root);
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (v != tree.root) {
      cut.level_ancestors[v] = cut.level_ancestors[tree.parent[v]];
    }
    if (cut.is_level[v]) cut.level_ancestors[v].push_back({tree.depth[v], v});
    for (VertexId c : tree.children[v]) stack.push_back(c);
  }
  return cut;
}

std::int64_t FastQueryState::storage_words_per_node_max() const {
  std::int64_t mx = 0;
  for (VertexId v = 0; v < n; ++v) {
    std::int64_t w = 0;
    w += 2 * static_cast<std::int64_t>(n);  // distance row and column
    w += 6 * static_cast<std::int64_t>(n);  // per-tree parent/depth/tin etc.
    for (const auto& per_x : fwd_excl[v]) w += 3 * per_x.size();
    for (const auto& per_b : rev_excl[v]) w += 3 * per_b.size();
    w += 3 * static_cast<std::int64_t>(interval_excl[v].size());
    for (VertexId x = 0; x < n; ++x)
      w += 2 * static_cast<std::int64_t>(cut[x].level_ancestors[v].size());
    mx = std::max(mx, w);
  }
  return mx;
}

FastQueryState preprocess_fast_query(NetworkRun& run, std::uint64_t seed) {
  const Graph& g = run.graph();
  const Graph gr = g.reversed();
  const int n = g.n();
  FastQueryState st;
  st.n = n;
  st.sqrt_n = ceil_sqrt(n);
  st.H = 2 * st.sqrt_n;

  run.begin_phase("fastquery.broadcast_trees");
  run.charge_broadcast_tree_setup();
  run.end_phase();

  run.begin_phase("fastquery.apsp");
  st.fwd_tree.reserve(n);
  st.rev_tree.reserve(n);
  for (VertexId x = 0; x < n; ++x) st.fwd_tree.push_back(build_sp_tree(g, x));
  for (VertexId y = 0; y < n; ++y) st.rev_tree.push_back(build_sp_tree(gr, y));
  st.dist.assign(n, std::vector<Dist>(n, kInf));
  for (VertexId x = 0; x < n; ++x) st.dist[x] = st.fwd_tree[x].dist;
  {
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (VertexId x = 0; x < n; ++x)
      insts.push_back(
          [x](NetworkRun& r) { r.sssp(x, nullptr, nullptr, true); });
    for (VertexId y = 0; y < n; ++y)
      insts.push_back(
          [y, &gr](NetworkRun& r) { r.sssp(y, nullptr, nullptr, true, &gr); });
    std::int64_t C =
        run.config().cost_model.mode == CostMode::kCharged
            ? run.config().cost_model.charged_sssp_congestion(n) + 2
            : 4 * static_cast<std::int64_t>(n);
    std::int64_t R = run.config().cost_model.mode == CostMode::kCharged
                         ? run.config().cost_model.charged_sssp_rounds(n)
                         : 4 * static_cast<std::int64_t>(n);
    run.schedule_random_delays(insts, C, R, hash_tuple(seed, 1));
  }
  run.end_phase();

  run.begin_phase("fastquery.tree_cut");
  st.cut.reserve(n);
  for (VertexId x = 0; x < n; ++x) st.cut.push_back(tree_cut(st.fwd_tree[x]));
  {
    // Per tree: size upcast, level-depth broadcast down the tree, the
    // level-ancestor lists, and Euler interval labels (two words per link).
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (VertexId x = 0; x < n; ++x) {
      insts.push_back([&, x](NetworkRun& r) {
        const ShortestPathTree& t = st.fwd_tree[x];
        const LevelCut& c = st.cut[x];
        r.upcast(t, 1);
        std::vector<DowncastItem> items;
        for (std::size_t i = 0; i < c.level_depths.size(); ++i)
          items.push_back({t.root, 1, true});
        for (VertexId v = 0; v < n; ++v)
          if (c.is_level[v]) items.push_back({v, 2, true});
        if (!items.empty()) r.downcast(t, items);
        // Euler labels: each node hands each child its interval base.
        std::int64_t links = 0;
        for (VertexId v = 0; v < n; ++v)
          if (t.reachable(v) && v != t.root) {
            r.charge_words(r.graph().channel(t.parent[v], v), 2, 0);
            ++links;
          }
        if (links > 0) r.advance_rounds(2 * (t.max_depth() + 1));
      });
      insts.push_back([&, x](NetworkRun& r) {
        const ShortestPathTree& t = st.rev_tree[x];
        r.upcast(t, 1);
        std::int64_t links = 0;
        for (VertexId v = 0; v < n; ++v)
          if (t.reachable(v) && v != t.root) {
            r.charge_words(r.graph().channel(t.parent[v], v), 2, 0);
            ++links;
          }
        if (links > 0) r.advance_rounds(2 * (t.max_depth() + 1));
      });
    }
    std::int64_t C = 6 * st.H + 8;
    run.schedule_random_delays(insts, C, 6 * static_cast<std::int64_t>(n),
                               hash_tuple(seed, 2));
  }
  run.end_phase();

  // ---- exclude computations -----------------------------------------------
  run.begin_phase("fastquery.excludes");
  struct Job {
    ExcludeRequest req;
    const ShortestPathTree* tree;
    const Graph* oriented;  // null for forward jobs
    int kind;               // 0 fwd short, 1 rev short, 2 interval
  };
  std::vector<Job> jobs;
  for (VertexId x = 0; x < n; ++x) {
    const ShortestPathTree& t = st.fwd_tree[x];
    std::vector<std::vector<VertexId>> at_depth(st.H + 1);
    for (VertexId v = 0; v < n; ++v)
      if (t.reachable(v) && t.depth[v] >= 1 && t.depth[v] <= st.H)
        at_depth[t.depth[v]].push_back(v);
    for (int i = 1; i <= st.H; ++i) {
      if (at_depth[i].empty()) continue;
      Job j;
      j.req.source = x;
      for (VertexId v : at_depth[i])
        j.req.paths.push_back(PathSpec{x, t.parent[v], {{t.parent[v], v}}});
      j.tree = &t;
      j.oriented = nullptr;
      j.kind = 0;
      jobs.push_back(std::move(j));
    }
    const ShortestPathTree& rt = st.rev_tree[x];
    std::vector<std::vector<VertexId>> r_at_depth(st.H + 1);
    for (VertexId v = 0; v < n; ++v)
      if (rt.reachable(v) && rt.depth[v] >= 1 && rt.depth[v] <= st.H)
        r_at_depth[rt.depth[v]].push_back(v);
    for (int i = 1; i <= st.H; ++i) {
      if (r_at_depth[i].empty()) continue;
      Job j;
      j.req.source = x;
      for (VertexId v : r_at_depth[i])
        j.req.paths.push_back(PathSpec{x, rt.parent[v], {{rt.parent[v], v}}});
      j.tree = &rt;
      j.oriented = &gr;
      j.kind = 1;
      jobs.push_back(std::move(j));
    }
    for (const auto& family : st.cut[x].families) {
      if (family.empty()) continue;
      Job j;
      j.req.source = x;
      for (const LevelCut::Chain& ch : family) {
        PathSpec p;
        p.source = x;
        p.start_vertex = ch.vertices.front();
        for (std::size_t i = 0; i + 1 < ch.vertices.size(); ++i)
          p.edges.push_back({ch.vertices[i], ch.vertices[i + 1]});
        j.req.paths.push_back(std::move(p));
      }
      j.tree = &st.fwd_tree[x];
      j.oriented = nullptr;
      j.kind = 2;
      jobs.push_back(std::move(j));
    }
  }
  std::vector<ExcludeResult> job_results(jobs.size());
  {
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
      insts.push_back([&, ji](NetworkRun& r) {
        ExcludeOptions o;
        o.precomputed_tree = jobs[ji].tree;
        o.oriented = jobs[ji].oriented;
        job_results[ji] = exclude_single_source(r, jobs[ji].req, o);
      });
    }
    std::int64_t C =
        run.config().cost_model.mode == CostMode::kCharged
            ? run.config().cost_model.charged_sssp_congestion(n) + 8
            : 4 * static_cast<std::int64_t>(n) + 8;
    std::int64_t R = run.config().cost_model.mode == CostMode::kCharged
                         ? run.config().cost_model.charged_sssp_rounds(n) +
                               4 * static_cast<std::int64_t>(n)
                         : 8 * static_cast<std::int64_t>(n);
    run.schedule_random_delays(insts, C, R, hash_tuple(seed, 3));
  }

  // Route results into the per-node stores.
  st.fwd_excl.assign(n, std::vector<std::vector<FastQueryState::ExclEntry>>(n));
  st.rev_excl.assign(n, std::vector<std::vector<FastQueryState::ExclEntry>>(n));
  st.interval_excl.assign(n, {});
  for (VertexId y = 0; y < n; ++y) {
    for (VertexId x = 0; x < n; ++x) {
      const ShortestPathTree& t = st.fwd_tree[x];
      if (t.reachable(y) && y != x)
        st.fwd_excl[y][x].resize(
            std::min(st.H, t.depth[y]));
      const ShortestPathTree& rt = st.rev_tree[x];
      if (rt.reachable(y) && y != x)
        st.rev_excl[y][x].resize(std::min(st.H, rt.depth[y]));
    }
  }
  for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
    const Job& j = jobs[ji];
    const ExcludeResult& res = job_results[ji];
    if (j.kind == 0) {
      const ShortestPathTree& t = *j.tree;
      for (const auto& pp : res.per_path) {
        int depth = t.depth[pp.subtree_root];
        for (auto [y, d] : pp.values)
          st.fwd_excl[y][j.req.source][depth - 1] = {d, pp.start_vertex,
                                                     pp.subtree_root};
      }
    } else if (j.kind == 1) {
      const ShortestPathTree& rt = *j.tree;
      for (const auto& pp : res.per_path) {
        int depth = rt.depth[pp.subtree_root];
        for (auto [v, d] : pp.values)
          // tag with the original-orientation edge (head -> tail in G^r)
          st.rev_excl[v][j.req.source][depth - 1] = {d, pp.subtree_root,
                                                     pp.start_vertex};
      }
    } else {
      // per_path is aligned with the request's chains
      for (std::size_t pi = 0; pi < res.per_path.size(); ++pi) {
        VertexId bottom = j.req.paths[pi].edges.back().second;
        for (auto [y, d] : res.per_path[pi].values)
          st.interval_excl[y][{j.req.source, bottom}] = d;
      }
    }
  }
  run.end_phase();
  return st;
}

// ---------------------------------------------------------------------------
// Query answering
// ---------------------------------------------------------------------------

namespace {

struct QueryView {
  bool valid = false;
  VertexId x, y;
  VertexId tail, head;  // the failed edge
  Dist w_e = 0;
};

const FastQueryState::ExclEntry* find_tagged(
    const std::vector<FastQueryState::ExclEntry>& entries, VertexId tail,
    VertexId head) {
  for (const auto& e : entries)
    if (e.tail == tail && e.head == head) return &e;
  return nullptr;
}

}  // namespace

std::vector<AnswerRow> answer_batch_fast(NetworkRun& run,
                                         const FastQueryState& st,
                                         const QueryBatch& batch) {
  const Graph& g = run.graph();
  const int n = g.n();
  std::vector<AnswerRow> rows(batch.size());
  std::vector<QueryView> views(batch.size());
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
    views[i] = {true, q.x, q.y, q.u, q.v, g.edge(*e).w};
  }

  run.begin_phase("fastquery.query");
  // Five pipelined broadcast waves: announce; failed-edge endpoint data;
  // sink's case and level vertices; source's stored values; the answer.
  std::vector<WaveItem> w1, w2, w3, w4, w5;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!views[i].valid) continue;
    w1.push_back({views[i].x, 3});
    w2.push_back({views[i].head, 4});
    w2.push_back({views[i].tail, 2});
    w3.push_back({views[i].y, 3});
    w4.push_back({views[i].x, 6});
    w5.push_back({views[i].y, 1});
  }
  std::int64_t rounds = 0;
  rounds += run.wave(w1);
  rounds += run.wave(w2);
  rounds += run.wave(w3);
  rounds += run.wave(w4);
  rounds += run.wave(w5);
  run.end_phase();

  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!views[i].valid) continue;
    const QueryView& v = views[i];
    AnswerRow& row = rows[i];
    row.rounds_charged = rounds;

    const ShortestPathTree& tx = st.fwd_tree[v.x];
    bool on_path = v.x != v.y && tx.reachable(v.y) &&
                   tx.parent[v.head] == v.tail && tx.is_ancestor(v.head, v.y);
    if (!on_path) {
      row.case_tag = "off_path";
      row.distance = st.dist[v.x][v.y];
      continue;
    }
    const ShortestPathTree& ty = st.rev_tree[v.y];
    bool rev_on_tree = ty.parent[v.tail] == v.head;
    if (!rev_on_tree) {
      // an equally short tail->sink path avoids the failed edge
      row.case_tag = "off_path";
      row.distance = st.dist[v.x][v.y];
      continue;
    }
    int fwd_depth = tx.depth[v.head];
    int rev_depth = ty.depth[v.tail];
    if (fwd_depth <= st.H) {
      row.case_tag = "short_hop_fwd";
      const auto& entries = st.fwd_excl[v.y][v.x];
      if (fwd_depth - 1 >= static_cast<int>(entries.size()))
        throw std::logic_error("missing forward exclude entry");
      const auto& e = entries[fwd_depth - 1];
      if (e.tail != v.tail || e.head != v.head)
        throw std::logic_error("forward exclude tag mismatch");
      row.distance = e.val;
      continue;
    }
    if (rev_depth <= st.H) {
      row.case_tag = "short_hop_rev";
      const auto* e = find_tagged(st.rev_excl[v.x][v.y], v.tail, v.head);
      row.distance = e ? e->val : st.dist[v.x][v.y];
      continue;
    }
    // level case: flanking level ancestors of the sink around the failure
    row.case_tag = "level";
    const LevelCut& cut = st.cut[v.x];
    const auto& anc = cut.level_ancestors[v.y];
    VertexId above = -1, below = -1;
    for (auto [d, id] : anc) {
      if (d <= fwd_depth - 1) above = id;
      if (d >= fwd_depth && below < 0) below = id;
    }
    if (above < 0 || below < 0)
      throw std::logic_error("missing flanking level vertices");
    // through the upper level vertex, with the sink's own exclude store; no
    // tag means that vertex's tree path to the sink avoids the failed edge
    const auto* fe = find_tagged(st.fwd_excl[v.y][above], v.tail, v.head);
    Dist via_up = fe ? fe->val : st.dist[above][v.y];
    Dist term1 = sat_add(st.dist[v.x][above], via_up);
    // through the lower level vertex, with the source's reverse store
    const auto* re = find_tagged(st.rev_excl[v.x][below], v.tail, v.head);
    Dist via_down = re ? re->val : st.dist[v.x][below];
    Dist term2 = sat_add(via_down, st.dist[below][v.y]);
    // the whole interval chain removed
    auto it = st.interval_excl[v.y].find({v.x, below});
    if (it == st.interval_excl[v.y].end())
      throw std::logic_error("missing interval exclude entry");
    Dist term3 = it->second;
    row.distance = std::min({term1, term2, term3});
    if (row.distance == term1)
      row.case_tag = "level:t1";
    else if (row.distance == term2)
      row.case_tag = "level:t2";
    else
      row.case_tag = "level:t3";
  }
  return rows;
}

}  // namespace dso
