#include "dso/oracle.hpp"

#include <algorithm>
#include <deque>

namespace dso::oracle {

namespace {

bool alive(const std::vector<char>* mask, int edge) {
  return mask == nullptr || (*mask)[edge];
}

}  // namespace

std::vector<Dist> sp(const Graph& g, VertexId s,
                     const std::vector<char>* edge_alive) {
  // Queue-based label correcting; exact for non-negative weights.
  std::vector<Dist> dist(g.n(), kInf);
  std::vector<char> inq(g.n(), 0);
  std::deque<VertexId> q;
  dist[s] = 0;
  q.push_back(s);
  inq[s] = 1;
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop_front();
    inq[u] = 0;
    for (const OutArc& a : g.out(u)) {
      if (!alive(edge_alive, a.edge)) continue;
      Dist nd = sat_add(dist[u], a.w);
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        if (!inq[a.to]) {
          q.push_back(a.to);
          inq[a.to] = 1;
        }
      }
    }
  }
  return dist;
}

RefTree sp_tree_ref(const Graph& g, VertexId s, TieRule rule,
                    const std::vector<char>* edge_alive) {
  const int n = g.n();
  RefTree t;
  t.dist.assign(n, kInf);
  t.hops.assign(n, -1);
  t.parent.assign(n, -1);
  t.dist[s] = 0;
  t.hops[s] = 0;
  // Full-sweep relaxation on the lexicographic key until fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : g.edges()) {
      int id = static_cast<int>(&e - g.edges().data());
      if (!alive(edge_alive, id)) continue;
      if (t.dist[e.u] >= kInf) continue;
      Dist nd = sat_add(t.dist[e.u], e.w);
      int nh = t.hops[e.u] + 1;
      if (nd < t.dist[e.v] || (nd == t.dist[e.v] && nh < t.hops[e.v])) {
        t.dist[e.v] = nd;
        t.hops[e.v] = nh;
        changed = true;
      }
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (v == s || t.dist[v] >= kInf) continue;
    VertexId best = -1;
    for (const InArc& a : g.in(v)) {
      if (!alive(edge_alive, a.edge)) continue;
      if (t.dist[a.from] >= kInf) continue;
      if (sat_add(t.dist[a.from], a.w) == t.dist[v] &&
          t.hops[a.from] + 1 == t.hops[v]) {
        if (best < 0)
          best = a.from;
        else if (rule == TieRule::kSmallestId)
          best = std::min(best, a.from);
        else
          best = std::max(best, a.from);
      }
    }
    t.parent[v] = best;
  }
  return t;
}

Dist rp(const Graph& g, VertexId s, VertexId t, int edge_id) {
  std::vector<char> mask = mask_without(g, edge_id);
  return sp(g, s, &mask)[t];
}

std::vector<Dist> excluded(const Graph& g, VertexId s,
                           const std::vector<int>& removed_edges) {
  std::vector<char> mask = mask_without(g, removed_edges);
  return sp(g, s, &mask);
}

Dist sisp2(const Graph& g, VertexId s, VertexId t, TieRule rule) {
  if (s == t) return kInf;
  RefTree tree = sp_tree_ref(g, s, rule);
  if (tree.dist[t] >= kInf) return kInf;
  Dist best = kInf;
  for (VertexId v = t; tree.parent[v] >= 0; v = tree.parent[v]) {
    VertexId u = tree.parent[v];
    auto id = g.find_edge(u, v);
    best = std::min(best, rp(g, s, t, *id));
  }
  return best;
}

std::vector<std::vector<Dist>> ksssp(const Graph& g,
                                     const std::vector<VertexId>& S,
                                     const std::vector<char>* edge_alive) {
  std::vector<std::vector<Dist>> table;
  table.reserve(S.size());
  for (VertexId s : S) table.push_back(sp(g, s, edge_alive));
  return table;
}

std::vector<Dist> hop_limited(const Graph& g, VertexId s, int h,
                              const std::vector<char>* edge_alive) {
  std::vector<Dist> cur(g.n(), kInf);
  cur[s] = 0;
  for (int it = 0; it < h; ++it) {
    std::vector<Dist> nxt = cur;
    bool changed = false;
    for (int id = 0; id < g.m(); ++id) {
      if (!alive(edge_alive, id)) continue;
      const Edge& e = g.edge(id);
      Dist nd = sat_add(cur[e.u], e.w);
      if (nd < nxt[e.v]) {
        nxt[e.v] = nd;
        changed = true;
      }
    }
    cur.swap(nxt);
    if (!changed) break;
  }
  return cur;
}

int min_hops_of_shortest(const Graph& g, VertexId s, VertexId t,
                         const std::vector<char>* edge_alive) {
  RefTree tree = sp_tree_ref(g, s, TieRule::kSmallestId, edge_alive);
  return tree.dist[t] >= kInf ? -1 : tree.hops[t];
}

BfsRef bfs(const Graph& g, const std::vector<VertexId>& sources, int h,
           bool directed, const std::vector<char>* edge_alive) {
  BfsRef r;
  r.hop.assign(g.n(), -1);
  r.nearest.assign(g.n(), -1);
  std::vector<VertexId> srcs = sources;
  std::sort(srcs.begin(), srcs.end());
  std::deque<VertexId> q;
  for (VertexId s : srcs) {
    if (r.hop[s] < 0) {
      r.hop[s] = 0;
      r.nearest[s] = s;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop_front();
    if (r.hop[u] >= h) continue;
    auto visit = [&](VertexId v) {
      if (r.hop[v] < 0) {
        r.hop[v] = r.hop[u] + 1;
        r.nearest[v] = r.nearest[u];
        q.push_back(v);
      } else if (r.hop[v] == r.hop[u] + 1 && r.nearest[u] < r.nearest[v]) {
        // keep ties resolved toward the smaller source id
        r.nearest[v] = r.nearest[u];
      }
    };
    if (directed) {
      for (const OutArc& a : g.out(u))
        if (alive(edge_alive, a.edge)) visit(a.to);
    } else {
      for (VertexId v : g.neighbors(u)) visit(v);
    }
  }
  return r;
}

std::vector<char> mask_without(const Graph& g, int edge_id) {
  std::vector<char> mask(g.m(), 1);
  mask[edge_id] = 0;
  return mask;
}

std::vector<char> mask_without(const Graph& g, const std::vector<int>& ids) {
  std::vector<char> mask(g.m(), 1);
  for (int id : ids) mask[id] = 0;
  return mask;
}

}  // namespace dso::oracle
