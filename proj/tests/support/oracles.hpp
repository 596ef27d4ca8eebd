#ifndef COMETH_TESTS_SUPPORT_ORACLES_HPP_
#define COMETH_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cometh/graph.hpp"
#include "cometh/rng.hpp"

// Independent test oracles. Everything here is deliberately brute force
// and kept apart from the library implementations it checks.
namespace cometh::testing {

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Isomorphism by trying every permutation.
inline bool brute_force_isomorphic(const AttributedGraph& g1,
                                   const AttributedGraph& g2) {
  if (g1.n() != g2.n()) return false;
  for (const auto& p : all_permutations(g1.n())) {
    bool ok = true;
    for (int i = 0; i < g1.n() && ok; ++i) {
      if (g1.node_labels[i] != g2.node_labels[p[i]]) ok = false;
      for (int j = 0; j < g1.n() && ok; ++j)
        if (g1.edge_labels(i, j) != g2.edge_labels(p[i], p[j])) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

/// Unlabeled graph from an edge-mask over the n(n-1)/2 pairs (i < j,
/// lexicographic), b = 2.
inline AttributedGraph graph_from_mask(int n, std::uint64_t mask) {
  AttributedGraph g(n, 1, 2);
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask & (1ULL << bit)) g.set_edge(i, j, 1);
  return g;
}

inline std::uint64_t canonical_mask(const AttributedGraph& g) {
  const int n = g.n();
  std::uint64_t best = ~0ULL;
  for (const auto& p : all_permutations(n)) {
    std::uint64_t mask = 0;
    int bit = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++bit)
        if (g.edge_labels(p[i], p[j]) != 0) mask |= 1ULL << bit;
    best = std::min(best, mask);
  }
  return best;
}

/// Every unlabeled graph on exactly n nodes, one per isomorphism class.
inline std::vector<AttributedGraph> nonisomorphic_graphs(int n) {
  const int pairs = n * (n - 1) / 2;
  std::map<std::uint64_t, AttributedGraph> classes;
  for (std::uint64_t mask = 0; mask < (1ULL << pairs); ++mask) {
    AttributedGraph g = graph_from_mask(n, mask);
    classes.try_emplace(canonical_mask(g), std::move(g));
  }
  std::vector<AttributedGraph> out;
  for (auto& [key, g] : classes) out.push_back(std::move(g));
  return out;
}

inline AttributedGraph random_graph(int n, Real edge_prob, int a, int b,
                                    Rng& rng) {
  AttributedGraph g(n, a, b);
  for (int i = 0; i < n; ++i) g.node_labels[i] = rng.uniform_int(a);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < edge_prob)
        g.set_edge(i, j, 1 + rng.uniform_int(b - 1));
  return g;
}

/// Number of simple p-cycles in g (each cycle counted once).
inline long count_cycles(const AttributedGraph& g, int p) {
  const int n = g.n();
  long count = 0;
  std::vector<int> path;
  std::vector<bool> used(n, false);
  std::function<void(int, int)> extend = [&](int start, int v) {
    if (static_cast<int>(path.size()) == p) {
      if (g.edge_labels(v, start) != 0 && path[1] < path.back()) ++count;
      return;
    }
    for (int w = start + 1; w < n; ++w) {
      if (!used[w] && g.edge_labels(v, w) != 0) {
        used[w] = true;
        path.push_back(w);
        extend(start, w);
        path.pop_back();
        used[w] = false;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, false);
    used[s] = true;
    extend(s, s);
  }
  return count;
}

/// Per-node count of simple p-cycles through each node.
inline std::vector<long> per_node_cycles(const AttributedGraph& g, int p) {
  const int n = g.n();
  std::vector<long> counts(n, 0);
  std::vector<int> path;
  std::vector<bool> used(n, false);
  std::function<void(int, int)> extend = [&](int start, int v) {
    if (static_cast<int>(path.size()) == p) {
      if (g.edge_labels(v, start) != 0 && path[1] < path.back())
        for (int u : path) ++counts[u];
      return;
    }
    for (int w = start + 1; w < n; ++w) {
      if (!used[w] && g.edge_labels(v, w) != 0) {
        used[w] = true;
        path.push_back(w);
        extend(start, w);
        path.pop_back();
        used[w] = false;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, false);
    used[s] = true;
    extend(s, s);
  }
  return counts;
}

// --- Kuratowski subdivision search ----------------------------------------

namespace detail {

// Realizes the required branch-vertex connections (given as concrete
// vertex pairs) by internally-disjoint simple paths whose interior
// vertices are unused non-branch vertices; exhaustive backtracking.
inline bool realize_connections(const AttributedGraph& g,
                                const std::vector<std::pair<int, int>>& pairs,
                                std::vector<bool>& node_used,
                                std::size_t idx) {
  if (idx == pairs.size()) return true;
  const int target = pairs[idx].second;
  std::function<bool(int)> extend = [&](int cur) -> bool {
    if (g.edge_labels(cur, target) != 0 &&
        realize_connections(g, pairs, node_used, idx + 1))
      return true;
    for (int s = 0; s < g.n(); ++s) {
      if (node_used[s] || s == target || g.edge_labels(cur, s) == 0) continue;
      node_used[s] = true;
      if (extend(s)) return true;
      node_used[s] = false;
    }
    return false;
  };
  return extend(pairs[idx].first);
}

inline bool find_subdivision(const AttributedGraph& g, int branch_count,
                             bool bipartite_split) {
  const int n = g.n();
  std::vector<int> branch(branch_count);
  std::function<bool(int, int)> choose = [&](int pos, int next) -> bool {
    if (pos == branch_count) {
      std::vector<bool> used(n, false);
      for (int v : branch) used[v] = true;
      auto try_pairs = [&](const std::vector<std::pair<int, int>>& idx_pairs) {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(idx_pairs.size());
        for (const auto& [i, j] : idx_pairs)
          pairs.emplace_back(branch[i], branch[j]);
        return realize_connections(g, pairs, used, 0);
      };
      if (!bipartite_split) {
        std::vector<std::pair<int, int>> all;
        for (int i = 0; i < branch_count; ++i)
          for (int j = i + 1; j < branch_count; ++j) all.emplace_back(i, j);
        return try_pairs(all);
      }
      // K3,3: all splits of the six chosen vertices into two triples.
      for (int i = 1; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
          const std::vector<int> left = {0, i, j};
          std::vector<int> right;
          for (int k = 1; k < 6; ++k)
            if (k != i && k != j) right.push_back(k);
          std::vector<std::pair<int, int>> cross;
          for (int l : left)
            for (int r : right) cross.emplace_back(l, r);
          if (try_pairs(cross)) return true;
        }
      }
      return false;
    }
    for (int v = next; v < n; ++v) {
      branch[pos] = v;
      if (choose(pos + 1, v + 1)) return true;
    }
    return false;
  };
  return choose(0, 0);
}

}  // namespace detail

/// Exhaustive Kuratowski-subdivision search: true iff g contains a
/// subdivision of K5 or K3,3 (so, iff g is non-planar).
inline bool has_kuratowski_subdivision(const AttributedGraph& g) {
  if (g.n() >= 5 && detail::find_subdivision(g, 5, false)) return true;
  if (g.n() >= 6 && detail::find_subdivision(g, 6, true)) return true;
  return false;
}

}  // namespace cometh::testing

#endif  // COMETH_TESTS_SUPPORT_ORACLES_HPP_
