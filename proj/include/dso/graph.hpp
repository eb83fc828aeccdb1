// Directed weighted graph with the deterministic shortest-path machinery the
// rest of the project builds on: tie-broken shortest-path trees, independent
// path sets, random instance generation and the plain-text file format.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dso {

using VertexId = std::int32_t;
using Dist = std::int64_t;

// Sentinel for "no path". Strictly larger than any reachable n*W distance at
// the scales we run, and absorbing under sat_add.
inline constexpr Dist kInf = Dist{1} << 60;

inline Dist sat_add(Dist a, Dist b) {
  if (a >= kInf || b >= kInf) return kInf;
  Dist s = a + b;
  return s >= kInf ? kInf : s;
}

int ceil_sqrt(int n);
int ceil_log2(std::int64_t n);  // 0 for n <= 1

struct Edge {
  VertexId u = 0, v = 0;
  Dist w = 0;
  bool operator==(const Edge&) const = default;
};

struct OutArc {
  VertexId to;
  Dist w;
  int edge;
};
struct InArc {
  VertexId from;
  Dist w;
  int edge;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class Graph {
 public:
  Graph() = default;
  // Validates: ids in [0,n), no self loops, no duplicate directed edge,
  // non-negative weights.
  Graph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }
  const std::vector<OutArc>& out(VertexId v) const { return out_[v]; }
  const std::vector<InArc>& in(VertexId v) const { return in_[v]; }

  std::optional<int> find_edge(VertexId u, VertexId v) const;

  // Underlying undirected communication topology.
  const std::vector<VertexId>& neighbors(VertexId v) const { return und_[v]; }
  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<std::pair<VertexId, VertexId>>& links() const {
    return links_;
  }
  // Directed channel id for sending from u to v over the undirected link
  // {u,v}; in [0, 2*link_count).
  int channel(VertexId u, VertexId v) const;
  std::pair<VertexId, VertexId> channel_endpoints(int ch) const;

  Graph reversed() const;
  bool same_as(const Graph& other) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<OutArc>> out_;
  std::vector<std::vector<InArc>> in_;
  std::vector<std::vector<VertexId>> und_;
  std::vector<std::pair<VertexId, VertexId>> links_;
  // per vertex, sorted (neighbor, link index)
  std::vector<std::vector<std::pair<VertexId, int>>> link_of_;
};

// Shortest-path tree with deterministic tie-breaking: shortest weight first,
// then fewest hops, then smallest predecessor id. Two builds from the same
// graph are identical.
struct ShortestPathTree {
  VertexId root = 0;
  std::vector<Dist> dist;          // kInf if unreachable
  std::vector<VertexId> parent;    // -1 for root / unreachable
  std::vector<int> depth;          // hops from root, -1 if unreachable
  std::vector<int> subtree_size;   // 0 if unreachable
  std::vector<std::vector<VertexId>> children;
  std::vector<int> tin, tout;      // Euler intervals, -1 if unreachable

  bool reachable(VertexId v) const { return dist[v] < kInf; }
  // True iff a lies on the tree path from root to v (a == v included).
  bool is_ancestor(VertexId a, VertexId v) const {
    return reachable(a) && reachable(v) && tin[a] <= tin[v] &&
           tout[v] <= tout[a];
  }
  int max_depth() const;
  // Vertices of the tree path root -> v (empty if unreachable).
  std::vector<VertexId> path_from_root(VertexId v) const;
};

// Optional edge mask (true = edge usable) and extra relaxation seeds
// (vertex, initial distance) applied before the first round.
struct SpOptions {
  const std::vector<char>* edge_alive = nullptr;
  const std::vector<std::pair<VertexId, Dist>>* seeds = nullptr;
};

struct SpResult {
  std::vector<Dist> dist;
  std::vector<int> hops;         // -1 unreachable
  std::vector<VertexId> parent;  // tie-broken as in ShortestPathTree
};

SpResult dijkstra(const Graph& g, VertexId source, const SpOptions& opt = {});

ShortestPathTree build_sp_tree(const Graph& g, VertexId root);

// A subpath of a shortest-path tree, listed root-side first.
struct PathSpec {
  VertexId source = 0;
  VertexId start_vertex = 0;  // tail of the first edge
  std::vector<std::pair<VertexId, VertexId>> edges;
};

// Second vertex of the path = root of the hanging subtree. Throws GraphError
// if the path is not a contiguous top-down subpath of the tree.
VertexId path_subtree_root(const ShortestPathTree& t, const PathSpec& p);

// Pairwise disjointness of the hanging subtrees. Throws on invalid paths.
bool is_independent(const ShortestPathTree& t,
                    const std::vector<PathSpec>& paths);

Graph generate_random(int n, int m, Dist max_w, std::uint64_t seed);

Graph read_graph(std::istream& is);
Graph read_graph_file(const std::string& path);
void write_graph(const Graph& g, std::ostream& os);
std::string write_graph_string(const Graph& g);

}  // namespace dso
