#include "dso/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "dso/rng.hpp"

namespace dso {

int ceil_sqrt(int n) {
  if (n <= 0) return 0;
  int s = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (s * s < n) ++s;
  while ((s - 1) * (s - 1) >= n) --s;
  return s;
}

int ceil_log2(std::int64_t n) {
  if (n <= 1) return 0;
  int k = 0;
  std::int64_t p = 1;
  while (p < n) {
    p <<= 1;
    ++k;
  }
  return k;
}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw GraphError("negative vertex count");
  out_.resize(n_);
  in_.resize(n_);
  und_.resize(n_);
  link_of_.resize(n_);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
    const Edge& e = edges_[id];
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw GraphError("edge endpoint out of range");
    if (e.u == e.v) throw GraphError("self loop rejected");
    if (e.w < 0) throw GraphError("negative weight rejected");
    if (!seen.insert({e.u, e.v}).second)
      throw GraphError("duplicate directed edge rejected");
    out_[e.u].push_back({e.v, e.w, id});
    in_[e.v].push_back({e.u, e.w, id});
  }
  for (auto& a : out_)
    std::sort(a.begin(), a.end(),
              [](const OutArc& x, const OutArc& y) { return x.to < y.to; });
  for (auto& a : in_)
    std::sort(a.begin(), a.end(),
              [](const InArc& x, const InArc& y) { return x.from < y.from; });

  std::set<std::pair<VertexId, VertexId>> und_seen;
  for (const Edge& e : edges_) {
    VertexId a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    if (und_seen.insert({a, b}).second) links_.push_back({a, b});
  }
  std::sort(links_.begin(), links_.end());
  for (int li = 0; li < static_cast<int>(links_.size()); ++li) {
    auto [a, b] = links_[li];
    und_[a].push_back(b);
    und_[b].push_back(a);
    link_of_[a].push_back({b, li});
    link_of_[b].push_back({a, li});
  }
  for (auto& v : und_) std::sort(v.begin(), v.end());
  for (auto& v : link_of_) std::sort(v.begin(), v.end());
}

std::optional<int> Graph::find_edge(VertexId u, VertexId v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return std::nullopt;
  const auto& a = out_[u];
  auto it = std::lower_bound(
      a.begin(), a.end(), v,
      [](const OutArc& arc, VertexId t) { return arc.to < t; });
  if (it != a.end() && it->to == v) return it->edge;
  return std::nullopt;
}

int Graph::channel(VertexId u, VertexId v) const {
  const auto& lk = link_of_[u];
  auto it = std::lower_bound(lk.begin(), lk.end(), std::make_pair(v, -1));
  if (it == lk.end() || it->first != v)
    throw GraphError("no link between vertices");
  int li = it->second;
  // direction 0: low -> high endpoint
  return 2 * li + (u < v ? 0 : 1);
}

std::pair<VertexId, VertexId> Graph::channel_endpoints(int ch) const {
  auto [a, b] = links_[ch / 2];
  if (ch % 2 == 0) return {a, b};
  return {b, a};
}

Graph Graph::reversed() const {
  std::vector<Edge> rev;
  rev.reserve(edges_.size());
  for (const Edge& e : edges_) rev.push_back({e.v, e.u, e.w});
  return Graph(n_, std::move(rev));
}

bool Graph::same_as(const Graph& other) const {
  if (n_ != other.n_) return false;
  auto key = [](const Edge& e) { return std::make_tuple(e.u, e.v, e.w); };
  std::vector<std::tuple<VertexId, VertexId, Dist>> a, b;
  for (const Edge& e : edges_) a.push_back(key(e));
  for (const Edge& e : other.edges_) b.push_back(key(e));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

SpResult dijkstra(const Graph& g, VertexId source, const SpOptions& opt) {
  const int n = g.n();
  SpResult r;
  r.dist.assign(n, kInf);
  r.hops.assign(n, -1);
  r.parent.assign(n, -1);
  // key: (dist, hops, vertex)
  using Key = std::tuple<Dist, int, VertexId>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> pq;
  auto push = [&](VertexId v, Dist d, int h) {
    r.dist[v] = d;
    r.hops[v] = h;
    pq.push({d, h, v});
  };
  push(source, 0, 0);
  if (opt.seeds) {
    for (auto [v, d] : *opt.seeds) {
      if (d < kInf &&
          (d < r.dist[v] || (d == r.dist[v] && 1 < r.hops[v])))
        push(v, d, 1);
    }
  }
  std::vector<char> done(n, 0);
  while (!pq.empty()) {
    auto [d, h, u] = pq.top();
    pq.pop();
    if (done[u] || d != r.dist[u] || h != r.hops[u]) continue;
    done[u] = 1;
    for (const OutArc& arc : g.out(u)) {
      if (opt.edge_alive && !(*opt.edge_alive)[arc.edge]) continue;
      Dist nd = sat_add(d, arc.w);
      if (nd >= kInf) continue;
      int nh = h + 1;
      if (nd < r.dist[arc.to] ||
          (nd == r.dist[arc.to] && nh < r.hops[arc.to]))
        push(arc.to, nd, nh);
    }
  }
  // Smallest-id predecessor achieving (dist, hops).
  for (VertexId v = 0; v < n; ++v) {
    if (v == source || r.dist[v] >= kInf) continue;
    for (const InArc& arc : g.in(v)) {
      if (opt.edge_alive && !(*opt.edge_alive)[arc.edge]) continue;
      if (r.dist[arc.from] >= kInf) continue;
      if (sat_add(r.dist[arc.from], arc.w) == r.dist[v] &&
          r.hops[arc.from] + 1 == r.hops[v]) {
        r.parent[v] = arc.from;
        break;  // in() is sorted by id
      }
    }
  }
  return r;
}

ShortestPathTree build_sp_tree(const Graph& g, VertexId root) {
  if (root < 0 || root >= g.n()) throw GraphError("root out of range");
  SpResult sp = dijkstra(g, root);
  ShortestPathTree t;
  t.root = root;
  t.dist = std::move(sp.dist);
  t.parent = std::move(sp.parent);
  t.depth = std::move(sp.hops);
  const int n = g.n();
  t.children.assign(n, {});
  for (VertexId v = 0; v < n; ++v)
    if (t.parent[v] >= 0) t.children[t.parent[v]].push_back(v);
  // children are discovered in id order already, keep them sorted
  t.subtree_size.assign(n, 0);
  std::vector<VertexId> order;  // by decreasing depth
  order.reserve(n);
  for (VertexId v = 0; v < n; ++v)
    if (t.reachable(v)) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    return t.depth[a] > t.depth[b];
  });
  for (VertexId v : order) {
    t.subtree_size[v] += 1;
    if (t.parent[v] >= 0) t.subtree_size[t.parent[v]] += t.subtree_size[v];
  }
  t.tin.assign(n, -1);
  t.tout.assign(n, -1);
  int timer = 0;
  std::vector<std::pair<VertexId, int>> stack;  // (vertex, next child index)
  if (t.reachable(root)) {
    stack.push_back({root, 0});
    t.tin[root] = timer++;
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      if (ci < static_cast<int>(t.children[v].size())) {
        VertexId c = t.children[v][ci++];
        t.tin[c] = timer++;
        stack.push_back({c, 0});
      } else {
        t.tout[v] = timer;
        stack.pop_back();
      }
    }
  }
  return t;
}

int ShortestPathTree::max_depth() const {
  int d = 0;
  for (int x : depth) d = std::max(d, x);
  return d;
}

std::vector<VertexId> ShortestPathTree::path_from_root(VertexId v) const {
  std::vector<VertexId> p;
  if (!reachable(v)) return p;
  for (VertexId x = v; x >= 0; x = parent[x]) p.push_back(x);
  std::reverse(p.begin(), p.end());
  return p;
}

VertexId path_subtree_root(const ShortestPathTree& t, const PathSpec& p) {
  if (p.edges.empty()) throw GraphError("empty path");
  VertexId prev_head = -1;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    auto [u, v] = p.edges[i];
    if (u < 0 || v < 0 || u >= static_cast<VertexId>(t.parent.size()) ||
        v >= static_cast<VertexId>(t.parent.size()))
      throw GraphError("path vertex out of range");
    if (t.parent[v] != u) throw GraphError("path edge not on tree");
    if (i > 0 && u != prev_head) throw GraphError("path edges not contiguous");
    prev_head = v;
  }
  if (p.edges.front().first != p.start_vertex)
    throw GraphError("path start vertex mismatch");
  return p.edges.front().second;
}

bool is_independent(const ShortestPathTree& t,
                    const std::vector<PathSpec>& paths) {
  std::vector<std::pair<int, int>> ivals;
  ivals.reserve(paths.size());
  for (const PathSpec& p : paths) {
    VertexId r = path_subtree_root(t, p);
    ivals.push_back({t.tin[r], t.tout[r]});
  }
  std::sort(ivals.begin(), ivals.end());
  for (std::size_t i = 1; i < ivals.size(); ++i)
    if (ivals[i].first < ivals[i - 1].second) return false;
  return true;
}

Graph generate_random(int n, int m, Dist max_w, std::uint64_t seed) {
  if (n < 0 || m < 0 || static_cast<long long>(m) >
                            static_cast<long long>(n) * (n - 1))
    throw GraphError("infeasible edge count");
  if (max_w < 1) throw GraphError("max_w must be >= 1");
  Rng rng(seed);
  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<Edge> edges;
  edges.reserve(m);
  while (static_cast<int>(edges.size()) < m) {
    auto u = static_cast<VertexId>(rng.bounded(n));
    auto v = static_cast<VertexId>(rng.bounded(n - 1));
    if (v >= u) ++v;
    if (!seen.insert({u, v}).second) continue;
    Dist w = 1 + static_cast<Dist>(rng.bounded(static_cast<std::uint64_t>(max_w)));
    edges.push_back({u, v, w});
  }
  return Graph(n, std::move(edges));
}

Graph read_graph(std::istream& is) {
  std::string line;
  int lineno = 0;
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    if (n < 0) {
      if (!(ss >> n >> m)) {
        std::string tok;
        std::istringstream probe(line);
        if (!(probe >> tok)) continue;  // blank/comment line before header
        throw ParseError("expected header 'n m'", lineno);
      }
      std::string extra;
      if (ss >> extra) throw ParseError("trailing tokens after header", lineno);
      continue;
    }
    long long u, v, w;
    if (!(ss >> u)) continue;  // blank line
    if (!(ss >> v >> w)) throw ParseError("expected 'u v w'", lineno);
    std::string extra;
    if (ss >> extra) throw ParseError("trailing tokens after edge", lineno);
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v),
                     static_cast<Dist>(w)});
  }
  if (n < 0) throw ParseError("missing header", lineno);
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError("edge count does not match header", lineno);
  try {
    return Graph(static_cast<int>(n), std::move(edges));
  } catch (const GraphError& e) {
    throw ParseError(e.what(), lineno);
  }
}

Graph read_graph_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GraphError("cannot open graph file: " + path);
  return read_graph(f);
}

void write_graph(const Graph& g, std::ostream& os) {
  os << g.n() << ' ' << g.m() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

std::string write_graph_string(const Graph& g) {
  std::ostringstream ss;
  write_graph(g, ss);
  return ss.str();
}

}  // namespace dso
