#include "dso/apsisp.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "dso/exclude.hpp"
#include "dso/queries.hpp"

namespace dso {

SispTable compute_2apsisp(NetworkRun& run, std::uint64_t seed) {
  const Graph& g = run.graph();
  const int n = g.n();

  run.begin_phase("apsisp.apsp");
  std::vector<ShortestPathTree> tree;
  tree.reserve(n);
  for (VertexId x = 0; x < n; ++x) tree.push_back(build_sp_tree(g, x));
  {
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (VertexId x = 0; x < n; ++x)
      insts.push_back([x](NetworkRun& r) { r.sssp(x, nullptr, nullptr, true); });
    std::int64_t C = run.config().cost_model.mode == CostMode::kCharged
                         ? run.config().cost_model.charged_sssp_congestion(n) + 2
                         : 4 * static_cast<std::int64_t>(n);
    std::int64_t R = run.config().cost_model.mode == CostMode::kCharged
                         ? run.config().cost_model.charged_sssp_rounds(n)
                         : 4 * static_cast<std::int64_t>(n);
    run.schedule_random_delays(insts, C, R, hash_tuple(seed, 1));
  }
  run.end_phase();

  // First edge of the x-y tree path, per tree, per vertex.
  std::vector<std::vector<VertexId>> first_child(n,
                                                 std::vector<VertexId>(n, -1));
  for (VertexId x = 0; x < n; ++x) {
    const ShortestPathTree& t = tree[x];
    for (VertexId a : t.children[x]) {
      std::vector<VertexId> stack{a};
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        first_child[x][v] = a;
        for (VertexId c : t.children[v]) stack.push_back(c);
      }
    }
  }

  run.begin_phase("apsisp.first_edge_downcast");
  {
    std::vector<std::function<void(NetworkRun&)>> insts;
    for (VertexId x = 0; x < n; ++x) {
      insts.push_back([&, x](NetworkRun& r) {
        std::vector<DowncastItem> items;
        for (VertexId a : tree[x].children[x]) items.push_back({a, 2, true});
        if (!items.empty()) r.downcast(tree[x], items);
      });
    }
    run.schedule_random_delays(insts, 4, 4 * static_cast<std::int64_t>(n),
                               hash_tuple(seed, 2));
  }
  run.end_phase();

  run.begin_phase("apsisp.excludes");
  std::vector<ExcludeRequest> reqs(n);
  std::vector<const ShortestPathTree*> trees(n);
  for (VertexId x = 0; x < n; ++x) {
    reqs[x].source = x;
    for (VertexId a : tree[x].children[x])
      reqs[x].paths.push_back(PathSpec{x, x, {{x, a}}});
    trees[x] = &tree[x];
  }
  auto excl = exclude_multi_source(run, reqs, hash_tuple(seed, 3), {}, &trees);
  run.end_phase();

  // Local computation at each sink; zero rounds.
  SispTable out;
  out.d2.assign(n, std::vector<Dist>(n, kInf));
  for (VertexId y = 0; y < n; ++y) {
    std::vector<VertexId> sources;
    for (VertexId z = 0; z < n; ++z)
      if (z != y && tree[z].reachable(y)) sources.push_back(z);
    std::sort(sources.begin(), sources.end(), [&](VertexId a, VertexId b) {
      int da = tree[a].depth[y], db = tree[b].depth[y];
      return da != db ? da < db : a < b;
    });
    for (VertexId z : sources) {
      VertexId a = first_child[z][y];
      if (a < 0) throw std::logic_error("missing first edge for reachable sink");
      auto ev = excl[z].lookup(a, y);
      Dist best = ev ? *ev : kInf;
      if (a != y) {
        // the recurrence needs d2(a,y), already final: a's path is one hop
        // shorter than z's
        if (!(tree[a].depth[y] < tree[z].depth[y]))
          throw std::logic_error("hop ordering violated in local recurrence");
        auto e = g.find_edge(z, a);
        best = std::min(best, sat_add(g.edge(*e).w, out.d2[a][y]));
      }
      out.d2[z][y] = best;
    }
  }
  return out;
}

void write_sisp_csv(const SispTable& t, std::ostream& os) {
  os << "x,y,d2\n";
  const int n = static_cast<int>(t.d2.size());
  for (VertexId x = 0; x < n; ++x)
    for (VertexId y = 0; y < n; ++y)
      os << x << ',' << y << ',' << dist_to_string(t.d2[x][y]) << '\n';
}

}  // namespace dso
