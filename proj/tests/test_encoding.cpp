#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cometh/graph.hpp"
#include "cometh/rrwp.hpp"
#include "support/oracles.hpp"

using namespace cometh;
namespace ct = cometh::testing;

namespace {

AttributedGraph path_graph(int n) {
  AttributedGraph g(n, 1, 2);
  for (int i = 0; i + 1 < n; ++i) g.set_edge(i, i + 1, 1);
  return g;
}

AttributedGraph cycle_graph(int n) {
  AttributedGraph g = path_graph(n);
  g.set_edge(n - 1, 0, 1);
  return g;
}

AttributedGraph complete_graph(int n) {
  AttributedGraph g(n, 1, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j, 1);
  return g;
}

// 4x4 rook's graph: vertices are cells, adjacency is same row or column.
AttributedGraph rook4() {
  AttributedGraph g(16, 1, 2);
  for (int i = 0; i < 16; ++i)
    for (int j = i + 1; j < 16; ++j)
      if (i / 4 == j / 4 || i % 4 == j % 4) g.set_edge(i, j, 1);
  return g;
}

// Shrikhande graph on Z4 x Z4 with difference set
// {(1,0),(3,0),(0,1),(0,3),(1,1),(3,3)}.
AttributedGraph shrikhande() {
  AttributedGraph g(16, 1, 2);
  auto idx = [](int r, int c) { return ((r + 4) % 4) * 4 + ((c + 4) % 4); };
  const int diffs[6][2] = {{1, 0}, {3, 0}, {0, 1}, {0, 3}, {1, 1}, {3, 3}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (const auto& d : diffs)
        g.set_edge(idx(r, c), idx(r + d[0], c + d[1]), 1);
  return g;
}

std::vector<int> to_int(const std::vector<long>& v) {
  return std::vector<int>(v.begin(), v.end());
}

}  // namespace

TEST_CASE("rrwp hand-computed values on a 3-path") {
  const AttributedGraph g = path_graph(3);
  const RrwpEncoding enc = rrwp(g, 3);
  CHECK(enc.node_enc(0, 0) == doctest::Approx(1.0));
  CHECK(enc.node_enc(0, 1) == doctest::Approx(0.0));
  CHECK(enc.node_enc(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("rrwp k=0 slice is the identity") {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const AttributedGraph g = ct::random_graph(6, 0.4, 1, 2, rng);
    const RrwpEncoding enc = rrwp(g, 4);
    CHECK(enc.power[0].isApprox(Matrix::Identity(6, 6)));
  }
}

TEST_CASE("rrwp on the triangle") {
  const AttributedGraph g = complete_graph(3);
  const RrwpEncoding enc = rrwp(g, 2);
  CHECK(enc.edge_entry(0, 1, 0) == doctest::Approx(0.0));
  CHECK(enc.edge_entry(0, 1, 1) == doctest::Approx(0.5));
}

TEST_CASE("rrwp rows of M^k sum to 1 except for isolated-node rows") {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const AttributedGraph g = ct::random_graph(7, 0.25, 1, 2, rng);
    const RrwpEncoding enc = rrwp(g, 5);
    for (int k = 1; k < 5; ++k) {
      for (int i = 0; i < 7; ++i) {
        const Real row_sum = enc.power[k].row(i).sum();
        if (g.degree(i) == 0)
          CHECK(row_sum == doctest::Approx(0.0));
        else
          CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rrwp is permutation equivariant exactly") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6;
    const AttributedGraph g = ct::random_graph(n, 0.4, 1, 2, rng);
    const Permutation p = Permutation::random(n, rng);
    const RrwpEncoding enc = rrwp(g, 6);
    const RrwpEncoding penc = rrwp(apply_permutation(g, p), 6);
    for (int k = 0; k < 6; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(penc.power[k](p(i), p(j)) == enc.power[k](i, j));
  }
}

TEST_CASE("connected component oracles on fixtures") {
  const AttributedGraph connected = cycle_graph(5);
  const auto ids = oracle_connected_components(connected);
  for (int id : ids) CHECK(id == 0);
  CHECK(oracle_largest_cc_size(connected) == 5);

  AttributedGraph two_triangles(6, 1, 2);
  for (const auto& [i, j] : std::vector<std::pair<int, int>>{
           {0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})
    two_triangles.set_edge(i, j, 1);
  const auto ids2 = oracle_connected_components(two_triangles);
  CHECK(ids2 == std::vector<int>{0, 0, 0, 3, 3, 3});
  CHECK(oracle_largest_cc_size(two_triangles) == 3);
}

TEST_CASE("walk-derived connectivity matches the flood-fill oracle") {
  // Exhaustive over isomorphism classes up to n = 6, then random n <= 8.
  for (int n = 2; n <= 6; ++n) {
    for (const auto& g : ct::nonisomorphic_graphs(n)) {
      const auto oracle = oracle_connected_components(g);
      const auto walk = rrwp_connected_components(g);
      CHECK(walk == oracle);
      CHECK(rrwp_largest_cc_size(g) == oracle_largest_cc_size(g));
    }
  }
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 3 + rng.uniform_int(6);
    const AttributedGraph g = ct::random_graph(n, 0.25, 1, 2, rng);
    CHECK(rrwp_connected_components(g) == oracle_connected_components(g));
    CHECK(rrwp_largest_cc_size(g) == oracle_largest_cc_size(g));
  }
}

TEST_CASE("single fixed power misses bipartite parity, the stack does not") {
  // On the 3-path, (M^2)_{01} = 0 although 0 and 1 are connected; only
  // the odd powers see this pair, so any single-power predicate fails.
  const AttributedGraph g = path_graph(3);
  const RrwpEncoding enc = rrwp(g, 3);
  CHECK(enc.power[2](0, 1) == doctest::Approx(0.0));
  CHECK(rrwp_same_component(enc, 0, 1));
}

TEST_CASE("cycle count fixtures") {
  CHECK(cycle_counts_formula(complete_graph(3), 3) == std::vector<int>{1, 1, 1});
  const auto c4_p4 = cycle_counts_formula(cycle_graph(4), 4);
  CHECK(c4_p4 == std::vector<int>{1, 1, 1, 1});
  CHECK(cycle_counts_formula(cycle_graph(4), 3) == std::vector<int>{0, 0, 0, 0});
  CHECK(cycle_counts_formula(path_graph(5), 3) == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(cycle_counts_formula(path_graph(5), 4) == std::vector<int>{0, 0, 0, 0, 0});
  // K4: each node in C(3,2) = 3 triangles and 3 four-cycles.
  CHECK(cycle_counts_formula(complete_graph(4), 3) == std::vector<int>{3, 3, 3, 3});
  CHECK(oracle_cycle_enumeration(complete_graph(4), 3) ==
        std::vector<int>{3, 3, 3, 3});
  CHECK_THROWS_AS(cycle_counts_formula(complete_graph(4), 5), DataError);
}

TEST_CASE("cycle formulas match exhaustive enumeration") {
  for (int n = 3; n <= 6; ++n) {
    for (const auto& g : ct::nonisomorphic_graphs(n)) {
      for (int p : {3, 4}) {
        if (p > n) continue;
        CHECK(cycle_counts_formula(g, p) ==
              to_int(ct::per_node_cycles(g, p)));
        CHECK(oracle_cycle_enumeration(g, p) ==
              to_int(ct::per_node_cycles(g, p)));
      }
    }
  }
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 4 + rng.uniform_int(4);  // 4..7
    const AttributedGraph g = ct::random_graph(n, 0.45, 1, 2, rng);
    for (int p : {3, 4})
      CHECK(cycle_counts_formula(g, p) == oracle_cycle_enumeration(g, p));
  }
}

TEST_CASE("cycle enumeration double-counting identity") {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + rng.uniform_int(3);
    const AttributedGraph g = ct::random_graph(n, 0.5, 1, 2, rng);
    for (int p : {3, 4, 5}) {
      const auto counts = oracle_cycle_enumeration(g, p);
      long total = 0;
      for (int c : counts) total += c;
      CHECK(total == p * ct::count_cycles(g, p));
    }
  }
}

TEST_CASE("walk encodings cannot separate 8-cycle counts: fixed SRG pair") {
  // The 4x4 rook's graph and the Shrikhande graph are both SRG(16,6,2,2).
  // Their walk-encoding multisets coincide (powers of M stay in
  // span{I, A, J - I - A} for strongly regular graphs) while their
  // 8-cycle counts differ, so no function of the encoding multiset can
  // count 8-cycles.
  const AttributedGraph r = rook4();
  const AttributedGraph s = shrikhande();
  REQUIRE(r.num_edges() == 48);
  REQUIRE(s.num_edges() == 48);
  for (int i = 0; i < 16; ++i) {
    REQUIRE(r.degree(i) == 6);
    REQUIRE(s.degree(i) == 6);
  }

  const int K = 16;
  const RrwpEncoding er = rrwp(r, K);
  const RrwpEncoding es = rrwp(s, K);
  std::vector<std::vector<Real>> mr, ms;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      std::vector<Real> vr(K), vs(K);
      for (int k = 0; k < K; ++k) {
        vr[k] = er.power[k](i, j);
        vs[k] = es.power[k](i, j);
      }
      mr.push_back(std::move(vr));
      ms.push_back(std::move(vs));
    }
  }
  std::sort(mr.begin(), mr.end());
  std::sort(ms.begin(), ms.end());
  Real max_diff = 0.0;
  for (std::size_t p = 0; p < mr.size(); ++p)
    for (int k = 0; k < K; ++k)
      max_diff = std::max(max_diff, std::abs(mr[p][k] - ms[p][k]));
  CHECK(max_diff < 1e-12);  // multisets equal up to float noise

  // Same number of p-cycles for p < 8, different for p = 8.
  for (int p : {3, 4, 5, 6, 7})
    CHECK(ct::count_cycles(r, p) == ct::count_cycles(s, p));
  const long r8 = ct::count_cycles(r, 8);
  const long s8 = ct::count_cycles(s, 8);
  CHECK(r8 == 11952);
  CHECK(s8 == 11688);
  CHECK(r8 != s8);
}
