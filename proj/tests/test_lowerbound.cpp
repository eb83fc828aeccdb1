#include <sstream>

#include "doctest.h"
#include "dso/apsisp.hpp"
#include "dso/dso_fastquery.hpp"
#include "dso/dso_fastpre.hpp"
#include "dso/lowerbound.hpp"
#include "dso/oracle.hpp"

using namespace dso;

namespace {

EngineConfig charged() {
  EngineConfig cfg;
  cfg.cost_model.mode = CostMode::kCharged;
  return cfg;
}

DisjointnessInstance single_bit(int a, int b) {
  DisjointnessInstance inst;
  inst.bits_a = {{static_cast<char>(a)}};
  inst.bits_b = {{static_cast<char>(b)}};
  return inst;
}

}  // namespace

TEST_CASE("bit-gadget family: matching bits give the ell+2 detour") {
  Fig1Build b = build_fig1(1, 1, 4, single_bit(1, 1));
  CHECK(oracle::sp(b.graph, b.a[0])[b.b[0]] == 5);
  for (int e : b.star_edges)
    CHECK(oracle::rp(b.graph, b.a[0], b.b[0], e) == 6);
  CHECK(verify_fig1_claims(b).all_pass());
}

TEST_CASE("bit-gadget family: a missing bit kills every detour") {
  Fig1Build b = build_fig1(1, 1, 4, single_bit(1, 0));
  for (int e : b.star_edges)
    CHECK(oracle::rp(b.graph, b.a[0], b.b[0], e) == kInf);
  CHECK(verify_fig1_claims(b).all_pass());
}

TEST_CASE("bit-gadget family: random instances verify for all pairs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto bits = DisjointnessInstance::random(4, 4, seed, true);
    Fig1Build b = build_fig1(4, 4, 8, bits);
    ClaimReport r = verify_fig1_claims(b);
    for (const auto& c : r.claims) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("bit-gadget family rejects dominating endpoint counts") {
  auto bits = DisjointnessInstance::random(40, 1, 1, true);
  CHECK_THROWS_AS((void)build_fig1(40, 1, 2, bits), GraphError);
}

TEST_CASE("second-path family: all ones and all zeros") {
  {
    std::vector<char> bits(5, 1);
    Fig2Build b = build_fig2(5, bits, 1);
    for (VertexId a : b.a) CHECK(oracle::sisp2(b.graph, a, b.q) == 3);
    CHECK(verify_fig2_claims(b).all_pass());
  }
  {
    std::vector<char> bits(5, 0);
    Fig2Build b = build_fig2(5, bits, 1);
    for (VertexId a : b.a) CHECK(oracle::sisp2(b.graph, a, b.q) == 5);
    CHECK(verify_fig2_claims(b).all_pass());
  }
}

TEST_CASE("second-path family: stretch widens the gap") {
  std::vector<char> bits{1, 0, 1, 0};
  Fig2Build b = build_fig2(4, bits, 3);
  for (int i = 0; i < 4; ++i) {
    Dist d2 = oracle::sisp2(b.graph, b.a[i], b.q);
    if (bits[i])
      CHECK(d2 == 5);  // stretch + 2
    else
      CHECK(d2 >= 11);  // 3 * stretch + 2
  }
  CHECK(verify_fig2_claims(b).all_pass());
}

TEST_CASE("second-path family: directed variant drops zero-bit paths") {
  std::vector<char> bits{1, 0};
  Fig2Build b = build_fig2(2, bits, 1, true);
  CHECK(oracle::sisp2(b.graph, b.a[0], b.q) == 3);
  CHECK(oracle::sisp2(b.graph, b.a[1], b.q) == kInf);
  CHECK(verify_fig2_claims(b).all_pass());
}

TEST_CASE("second-path family: bits recovered from the distributed table") {
  std::vector<char> bits{1, 0, 0, 1, 1, 0};
  Fig2Build b = build_fig2(6, bits, 1);
  NetworkRun run(b.graph, charged());
  auto table = compute_2apsisp(run, 77);
  for (int i = 0; i < 6; ++i) {
    bool recovered = table.d2[b.a[i]][b.q] == 3;
    CHECK(recovered == static_cast<bool>(bits[i]));
  }
}

TEST_CASE("both DSOs answer the gadget's replacement queries per the claims") {
  auto bits = DisjointnessInstance::random(2, 2, 5, true);
  Fig1Build b = build_fig1(2, 2, 4, bits);
  QueryBatch batch;
  for (int i = 0; i < 2; ++i)
    for (int e : b.star_edges) {
      const Edge& ed = b.graph.edge(e);
      batch.push_back({b.a[i], b.b[i], ed.u, ed.v});
    }
  std::vector<Dist> want;
  for (const Query& q : batch)
    want.push_back(
        oracle::rp(b.graph, q.x, q.y, *b.graph.find_edge(q.u, q.v)));

  NetworkRun run1(b.graph, charged());
  auto st1 = preprocess_fast_query(run1, 3);
  auto rows1 = answer_batch_fast(run1, st1, batch);
  for (std::size_t i = 0; i < batch.size(); ++i)
    CHECK(rows1[i].distance == want[i]);

  NetworkRun run2(b.graph, charged());
  FastPreParams params;
  params.seed = 1;
  auto st2 = preprocess_fast_pre(run2, params);
  auto rows2 = answer_batch_pre(run2, st2, batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(rows2[i].distance >= want[i]);
    CHECK(rows2[i].distance == want[i]);  // exact on this instance and seed
  }
}

TEST_CASE("manifests are JSON lines with claims") {
  auto bits = DisjointnessInstance::random(2, 2, 9, true);
  Fig1Build b = build_fig1(2, 2, 4, bits);
  ClaimReport r = verify_fig1_claims(b);
  std::ostringstream ss;
  write_fig1_manifest(b, r, ss);
  CHECK(ss.str().find("\"family\":\"fig1\"") != std::string::npos);
  CHECK(ss.str().find("\"type\":\"claim\"") != std::string::npos);

  Fig2Build b2 = build_fig2(3, {1, 0, 1}, 1);
  std::ostringstream ss2;
  write_fig2_manifest(b2, verify_fig2_claims(b2), ss2);
  CHECK(ss2.str().find("\"family\":\"fig2\"") != std::string::npos);
}
