#include "dso/lowerbound.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "json.hpp"

#include "dso/oracle.hpp"
#include "dso/queries.hpp"
#include "dso/rng.hpp"

namespace dso {

bool DisjointnessInstance::disjoint() const {
  for (std::size_t i = 0; i < bits_a.size(); ++i)
    for (std::size_t j = 0; j < bits_a[i].size(); ++j)
      if (bits_a[i][j] && bits_b[i][j]) return false;
  return true;
}

DisjointnessInstance DisjointnessInstance::random(int k, int q,
                                                  std::uint64_t seed,
                                                  bool with_b) {
  Rng rng(seed);
  DisjointnessInstance inst;
  inst.bits_a.assign(k, std::vector<char>(q, 0));
  inst.bits_b.assign(k, std::vector<char>(q, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < q; ++j) {
      inst.bits_a[i][j] = rng.coin(0.5) ? 1 : 0;
      inst.bits_b[i][j] = with_b && rng.coin(0.5) ? 1 : 0;
    }
  return inst;
}

namespace {

int undirected_diameter(const Graph& g) {
  int d = 0;
  for (VertexId s = 0; s < g.n(); ++s) {
    std::vector<int> hop(g.n(), -1);
    std::deque<VertexId> q{s};
    hop[s] = 0;
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop_front();
      for (VertexId v : g.neighbors(u))
        if (hop[v] < 0) {
          hop[v] = hop[u] + 1;
          q.push_back(v);
        }
    }
    for (int h : hop) d = std::max(d, h);
  }
  return d;
}

}  // namespace

Fig1Build build_fig1(int k, int q, int ell, const DisjointnessInstance& bits) {
  if (k < 1 || q < 1 || ell < 2) throw GraphError("need k,q >= 1 and ell >= 2");
  if (static_cast<int>(bits.bits_a.size()) != k ||
      static_cast<int>(bits.bits_a[0].size()) != q)
    throw GraphError("bit matrix shape mismatch");

  Fig1Build b;
  b.k = k;
  b.q = q;
  b.ell = ell;
  b.bits = bits;

  int next = 0;
  std::vector<Edge> edges;
  // Balanced binary tree with ell leaves, edges oriented child -> parent.
  b.leaves.resize(ell);
  struct Builder {
    int* next;
    std::vector<Edge>* edges;
    std::vector<VertexId>* leaves;
    int leaf_at = 0;
    VertexId build(int count) {
      VertexId id = (*next)++;
      if (count == 1) {
        (*leaves)[leaf_at++] = id;
        return id;
      }
      VertexId l = build((count + 1) / 2);
      VertexId r = build(count / 2);
      edges->push_back({l, id, 1});
      edges->push_back({r, id, 1});
      return id;
    }
  } builder{&next, &edges, &b.leaves};
  builder.build(ell);

  auto attach_leaf = [&](VertexId pv, int j) {
    int leaf_idx = std::max(j, 1);  // 1-based leaf u_{max(j,1)}
    edges.push_back({pv, b.leaves[leaf_idx - 1], 1});
  };
  for (int i = 0; i < q; ++i) {
    std::vector<VertexId> path(ell + 1);
    for (int j = 0; j <= ell; ++j) {
      path[j] = next++;
      if (j > 0) edges.push_back({path[j - 1], path[j], 1});
      attach_leaf(path[j], j);
    }
    b.bit_paths.push_back(std::move(path));
  }
  b.star_path.resize(ell);
  for (int j = 0; j < ell; ++j) {
    b.star_path[j] = next++;
    if (j > 0) edges.push_back({b.star_path[j - 1], b.star_path[j], 1});
    attach_leaf(b.star_path[j], j);
  }
  int base = next;
  if (2 * k > base)
    throw GraphError("endpoint pairs would dominate the instance (k > n/2)");
  b.a.resize(k);
  b.b.resize(k);
  for (int i = 0; i < k; ++i) b.a[i] = next++;
  for (int i = 0; i < k; ++i) b.b[i] = next++;
  for (int i = 0; i < k; ++i) {
    edges.push_back({b.a[i], b.star_path[0], 1});
    edges.push_back({b.star_path[ell - 1], b.b[i], 1});
    for (int j = 0; j < q; ++j) {
      if (bits.bits_a[i][j]) edges.push_back({b.a[i], b.bit_paths[j][0], 1});
      if (bits.bits_b[i][j]) edges.push_back({b.bit_paths[j][ell], b.b[i], 1});
    }
  }
  b.graph = Graph(next, std::move(edges));
  for (int j = 0; j + 1 < ell; ++j)
    b.star_edges.push_back(
        *b.graph.find_edge(b.star_path[j], b.star_path[j + 1]));
  return b;
}

Fig2Build build_fig2(int n_bits, const std::vector<char>& bits_a, int stretch,
                     bool directed) {
  if (n_bits < 1) throw GraphError("need at least one bit");
  if (static_cast<int>(bits_a.size()) != n_bits)
    throw GraphError("bit vector length mismatch");
  if (stretch < 1) throw GraphError("stretch must be >= 1");

  Fig2Build b;
  b.n_bits = n_bits;
  b.stretch = stretch;
  b.directed = directed;
  b.bits_a = bits_a;

  int next = 0;
  b.a.resize(n_bits);
  for (int i = 0; i < n_bits; ++i) b.a[i] = next++;
  b.c = next++;
  b.c_prime = next++;
  b.p = next++;
  b.q = next++;
  b.hub = next++;

  std::vector<Edge> edges;
  auto arc = [&](VertexId u, VertexId v) {
    edges.push_back({u, v, 1});
    if (!directed) edges.push_back({v, u, 1});
  };
  // path of `stretch` edges from u to v, fresh intermediates
  auto stretched = [&](VertexId u, VertexId v) {
    VertexId cur = u;
    for (int s = 1; s < stretch; ++s) {
      VertexId mid = next++;
      arc(cur, mid);
      cur = mid;
    }
    arc(cur, v);
  };
  for (int i = 0; i < n_bits; ++i) {
    stretched(b.a[i], b.c);
    if (bits_a[i]) stretched(b.a[i], b.c_prime);
    stretched(b.a[i], b.hub);
  }
  arc(b.c, b.p);
  arc(b.c_prime, b.p);
  arc(b.p, b.q);
  b.graph = Graph(next, std::move(edges));
  return b;
}

bool ClaimReport::all_pass() const {
  for (const Claim& c : claims)
    if (!c.pass) return false;
  return true;
}

ClaimReport verify_fig1_claims(const Fig1Build& b) {
  ClaimReport r;
  const Graph& g = b.graph;
  for (int i = 0; i < b.k; ++i) {
    Dist base = oracle::sp(g, b.a[i])[b.b[i]];
    r.claims.push_back({"base_distance[" + std::to_string(i) + "]",
                        base == b.ell + 1,
                        "d(a,b)=" + dist_to_string(base)});
    bool hit = false;
    for (int j = 0; j < b.q; ++j)
      if (b.bits.bits_a[i][j] && b.bits.bits_b[i][j]) hit = true;
    for (std::size_t ei = 0; ei < b.star_edges.size(); ++ei) {
      Dist rp = oracle::rp(g, b.a[i], b.b[i], b.star_edges[ei]);
      Dist want = hit ? b.ell + 2 : kInf;
      r.claims.push_back(
          {"replacement[" + std::to_string(i) + "][" + std::to_string(ei) + "]",
           rp == want,
           "got " + dist_to_string(rp) + " want " + dist_to_string(want)});
    }
  }
  int d = undirected_diameter(g);
  int bound = 2 * ceil_log2(std::max(2, b.ell)) + 6;
  r.claims.push_back({"diameter_logarithmic", d <= bound,
                      "D=" + std::to_string(d) +
                          " bound=" + std::to_string(bound)});
  // crossing structure: endpoint vertices only attach to path ends
  bool wiring = true;
  for (int i = 0; i < b.k; ++i) {
    for (const OutArc& arc : g.out(b.a[i])) {
      bool ok = arc.to == b.star_path[0];
      for (int j = 0; j < b.q; ++j) ok = ok || arc.to == b.bit_paths[j][0];
      wiring = wiring && ok;
    }
    for (const InArc& arc : g.in(b.b[i])) {
      bool ok = arc.from == b.star_path[b.ell - 1];
      for (int j = 0; j < b.q; ++j)
        ok = ok || arc.from == b.bit_paths[j][b.ell];
      wiring = wiring && ok;
    }
  }
  r.claims.push_back({"endpoint_wiring", wiring, ""});
  return r;
}

ClaimReport verify_fig2_claims(const Fig2Build& b) {
  ClaimReport r;
  const Graph& g = b.graph;
  const Dist base = b.stretch + 2;
  for (int i = 0; i < b.n_bits; ++i) {
    Dist d = oracle::sp(g, b.a[i])[b.q];
    r.claims.push_back({"base_distance[" + std::to_string(i) + "]", d == base,
                        "d(a,q)=" + dist_to_string(d)});
    Dist d2 = oracle::sisp2(g, b.a[i], b.q);
    bool pass;
    std::string detail = "d2=" + dist_to_string(d2);
    if (b.bits_a[i]) {
      pass = d2 == base;
    } else if (b.directed) {
      pass = d2 >= kInf;
    } else {
      pass = d2 >= 3 * b.stretch + 2;
    }
    r.claims.push_back({"second_path[" + std::to_string(i) + "]", pass,
                        detail});
    bool recovered = (d2 == base);
    r.claims.push_back({"bit_recovery[" + std::to_string(i) + "]",
                        recovered == static_cast<bool>(b.bits_a[i]), detail});
  }
  // exactly two links cross the cut around {p, q}
  int crossing = 0;
  for (auto [u, v] : g.links()) {
    bool u_in = (u == b.p || u == b.q);
    bool v_in = (v == b.p || v == b.q);
    if (u_in != v_in) ++crossing;
  }
  r.claims.push_back({"cut_size", crossing == 2,
                      "crossing=" + std::to_string(crossing)});
  int d = undirected_diameter(g);
  r.claims.push_back({"diameter_constant", d <= 3 * b.stretch + 4,
                      "D=" + std::to_string(d)});
  return r;
}

namespace {

void write_claims(const ClaimReport& r, nlohmann::json&& header,
                  std::ostream& os) {
  os << header.dump() << '\n';
  for (const auto& c : r.claims) {
    nlohmann::json line{{"type", "claim"},
                        {"name", c.name},
                        {"pass", c.pass},
                        {"detail", c.detail}};
    os << line.dump() << '\n';
  }
}

}  // namespace

void write_fig1_manifest(const Fig1Build& b, const ClaimReport& r,
                         std::ostream& os) {
  nlohmann::json header{{"type", "instance"},
                        {"family", "fig1"},
                        {"k", b.k},
                        {"q", b.q},
                        {"ell", b.ell},
                        {"n", b.graph.n()},
                        {"a", b.a},
                        {"b", b.b},
                        {"star_path", b.star_path},
                        {"star_edges", b.star_edges}};
  write_claims(r, std::move(header), os);
}

void write_fig2_manifest(const Fig2Build& b, const ClaimReport& r,
                         std::ostream& os) {
  nlohmann::json header{{"type", "instance"},
                        {"family", "fig2"},
                        {"n_bits", b.n_bits},
                        {"stretch", b.stretch},
                        {"directed", b.directed},
                        {"n", b.graph.n()},
                        {"a", b.a},
                        {"c", b.c},
                        {"c_prime", b.c_prime},
                        {"p", b.p},
                        {"q", b.q},
                        {"hub", b.hub}};
  write_claims(r, std::move(header), os);
}

}  // namespace dso
