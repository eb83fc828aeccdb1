#include "dso/exclude.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "dso/queries.hpp"

namespace dso {

namespace {

std::vector<VertexId> subtree_members(const ShortestPathTree& t, VertexId r) {
  std::vector<VertexId> out, stack{r};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (VertexId c : t.children[v]) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool all_unit_weights(const Graph& g) {
  for (const Edge& e : g.edges())
    if (e.w != 1) return false;
  return true;
}

}  // namespace

std::optional<Dist> ExcludeResult::lookup(VertexId subtree_root,
                                          VertexId y) const {
  for (const PerPath& pp : per_path) {
    if (pp.subtree_root != subtree_root) continue;
    auto it = std::lower_bound(
        pp.values.begin(), pp.values.end(), y,
        [](const std::pair<VertexId, Dist>& a, VertexId b) {
          return a.first < b;
        });
    if (it != pp.values.end() && it->first == y) return it->second;
    return std::nullopt;
  }
  return std::nullopt;
}

ExcludeResult exclude_single_source(NetworkRun& run, const ExcludeRequest& req,
                                    const ExcludeOptions& opt) {
  const Graph& g = opt.oriented ? *opt.oriented : run.graph();
  ShortestPathTree local_tree;
  const ShortestPathTree* tree = opt.precomputed_tree;
  if (!tree) {
    local_tree = build_sp_tree(g, req.source);
    tree = &local_tree;
  }
  // Validation happens before any rounds are spent.
  if (!is_independent(*tree, req.paths))
    throw GraphError("excluded path set is not independent");

  if (!opt.precomputed_tree)
    run.sssp(req.source, nullptr, nullptr, true, opt.oriented);

  ExcludeResult res;
  res.source = req.source;

  // Downcast: every vertex hanging under a path learns (start, subtree root).
  std::vector<DowncastItem> items;
  std::vector<VertexId> roots;
  for (const PathSpec& p : req.paths) {
    VertexId r = path_subtree_root(*tree, p);
    roots.push_back(r);
    items.push_back({r, 2, true});
  }
  run.downcast(*tree, items);

  // Each vertex shares its distance and (if any) its path label with its
  // out-neighbors; one short exchange.
  run.neighbor_exchange(3);

  // Local d*(x,z) and the removed edge set.
  std::vector<char> mask(g.m(), 1);
  std::vector<std::pair<VertexId, Dist>> seeds;
  std::vector<std::vector<VertexId>> members(req.paths.size());
  for (std::size_t pi = 0; pi < req.paths.size(); ++pi) {
    const PathSpec& p = req.paths[pi];
    VertexId root = roots[pi];
    for (auto [u, v] : p.edges) mask[*g.find_edge(u, v)] = 0;
    members[pi] = subtree_members(*tree, root);
    for (VertexId z : members[pi]) {
      Dist best = kInf;
      for (const InArc& a : g.in(z)) {
        if (tree->is_ancestor(root, a.from)) continue;  // inside T_x(P)
        if (a.from == p.start_vertex && z == root) continue;  // first edge of P
        best = std::min(best, sat_add(tree->dist[a.from], a.w));
      }
      if (best < kInf) seeds.push_back({z, best});
    }
  }

  // Final SSSP on G - E(R) with the virtual x-z edges applied locally at z.
  BellmanFordResult fin;
  if (opt.unweighted_bfs && all_unit_weights(g)) {
    fin = run.bellman_ford(req.source, g.n() - 1, &mask, &seeds, false, 1,
                           opt.oriented);
  } else {
    fin = run.sssp(req.source, &mask, &seeds, false, opt.oriented);
  }

  for (std::size_t pi = 0; pi < req.paths.size(); ++pi) {
    ExcludeResult::PerPath pp;
    pp.start_vertex = req.paths[pi].start_vertex;
    pp.subtree_root = roots[pi];
    for (VertexId z : members[pi]) pp.values.push_back({z, fin.dist[z]});
    res.per_path.push_back(std::move(pp));
  }
  return res;
}

std::vector<ExcludeResult> exclude_multi_source(
    NetworkRun& run, const std::vector<ExcludeRequest>& reqs,
    std::uint64_t seed, const ExcludeOptions& opt,
    const std::vector<const ShortestPathTree*>* trees) {
  const Graph& g = opt.oriented ? *opt.oriented : run.graph();
  // Validate everything up front.
  std::vector<ShortestPathTree> own_trees;
  std::vector<const ShortestPathTree*> use_trees(reqs.size(), nullptr);
  if (trees) {
    use_trees = *trees;
  } else {
    own_trees.reserve(reqs.size());
    for (const ExcludeRequest& r : reqs)
      own_trees.push_back(build_sp_tree(g, r.source));
    for (std::size_t i = 0; i < reqs.size(); ++i) use_trees[i] = &own_trees[i];
  }
  for (std::size_t i = 0; i < reqs.size(); ++i)
    if (!is_independent(*use_trees[i], reqs[i].paths))
      throw GraphError("excluded path set is not independent");

  std::vector<ExcludeResult> results(reqs.size());
  std::vector<std::function<void(NetworkRun&)>> instances;
  instances.reserve(reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    instances.push_back([&, i](NetworkRun& r) {
      ExcludeOptions o = opt;
      if (trees) o.precomputed_tree = use_trees[i];
      results[i] = exclude_single_source(r, reqs[i], o);
    });
  }
  const int n = g.n();
  std::int64_t C, R;
  if (run.config().cost_model.mode == CostMode::kCharged) {
    C = 2 * run.config().cost_model.charged_sssp_congestion(n) + 8;
    R = 2 * run.config().cost_model.charged_sssp_rounds(n) + 4 * n;
  } else {
    C = 4 * static_cast<std::int64_t>(n) + 8;
    R = 6 * static_cast<std::int64_t>(n) + 8;
  }
  run.schedule_random_delays(instances, C, R, seed);
  return results;
}

std::vector<ExcludeRequest> read_exclude_requests(std::istream& is,
                                                  const Graph& g) {
  std::vector<ExcludeRequest> reqs;
  std::map<VertexId, std::size_t> index;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string tok;
    if (!(probe >> tok)) continue;
    auto semi = line.find(';');
    if (semi == std::string::npos)
      throw ParseError("expected 'source; path = v0 v1 ...'", lineno);
    long long src;
    {
      std::istringstream head(line.substr(0, semi));
      if (!(head >> src)) throw ParseError("bad source vertex", lineno);
    }
    auto eq = line.find('=', semi);
    if (eq == std::string::npos) throw ParseError("missing 'path ='", lineno);
    std::istringstream body(line.substr(eq + 1));
    std::vector<VertexId> verts;
    long long v;
    while (body >> v) verts.push_back(static_cast<VertexId>(v));
    if (verts.size() < 2) throw ParseError("path needs >= 2 vertices", lineno);
    for (VertexId x : verts)
      if (x < 0 || x >= g.n()) throw ParseError("path vertex out of range", lineno);
    PathSpec p;
    p.source = static_cast<VertexId>(src);
    p.start_vertex = verts.front();
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
      p.edges.push_back({verts[i], verts[i + 1]});
    auto it = index.find(p.source);
    if (it == index.end()) {
      index[p.source] = reqs.size();
      reqs.push_back({p.source, {p}});
    } else {
      reqs[it->second].paths.push_back(p);
    }
  }
  return reqs;
}

void write_exclude_csv(const std::vector<ExcludeResult>& results,
                       std::ostream& os) {
  os << "x,y,path_start,distance\n";
  for (const ExcludeResult& r : results)
    for (const ExcludeResult::PerPath& pp : r.per_path)
      for (auto [y, d] : pp.values)
        os << r.source << ',' << y << ',' << pp.start_vertex << ','
           << dist_to_string(d) << '\n';
}

}  // namespace dso
