#include "cometh/isomorphism.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace cometh {
namespace {

// One round of color refinement over both graphs jointly: a node's new
// color is (old color, sorted multiset of (edge label, neighbor color)).
// Returns stable per-node colors with a shared color table.
std::pair<std::vector<int>, std::vector<int>> joint_color_refinement(
    const AttributedGraph& g1, const AttributedGraph& g2) {
  const int n = g1.n();
  std::vector<int> c1(n), c2(n);
  for (int i = 0; i < n; ++i) c1[i] = g1.node_labels[i];
  for (int i = 0; i < n; ++i) c2[i] = g2.node_labels[i];

  auto signature = [n](const AttributedGraph& g, const std::vector<int>& c,
                       int i) {
    std::vector<std::pair<int, int>> sig;
    for (int j = 0; j < n; ++j)
      if (j != i && g.edge_labels(i, j) != 0)
        sig.emplace_back(g.edge_labels(i, j), c[j]);
    std::sort(sig.begin(), sig.end());
    return std::make_pair(c[i], sig);
  };

  for (int round = 0; round < n; ++round) {
    std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> table;
    std::vector<int> n1(n), n2(n);
    for (int i = 0; i < n; ++i) {
      auto s = signature(g1, c1, i);
      auto it = table.try_emplace(std::move(s), static_cast<int>(table.size()));
      n1[i] = it.first->second;
    }
    for (int i = 0; i < n; ++i) {
      auto s = signature(g2, c2, i);
      auto it = table.try_emplace(std::move(s), static_cast<int>(table.size()));
      n2[i] = it.first->second;
    }
    if (n1 == c1 && n2 == c2) break;
    c1 = std::move(n1);
    c2 = std::move(n2);
  }
  return {c1, c2};
}

bool color_histograms_match(const std::vector<int>& c1,
                            const std::vector<int>& c2) {
  std::map<int, int> h1, h2;
  for (int c : c1) ++h1[c];
  for (int c : c2) ++h2[c];
  return h1 == h2;
}

struct Matcher {
  const AttributedGraph& g1;
  const AttributedGraph& g2;
  const std::vector<int>& c1;
  const std::vector<int>& c2;
  std::vector<int> mapping;  // g1 node -> g2 node, -1 if unassigned
  std::vector<bool> used;

  bool extend(int i) {
    const int n = g1.n();
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || c1[i] != c2[j]) continue;
      bool ok = true;
      for (int k = 0; k < i; ++k) {
        if (g1.edge_labels(i, k) != g2.edge_labels(j, mapping[k])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      mapping[i] = j;
      used[j] = true;
      if (extend(i + 1)) return true;
      mapping[i] = -1;
      used[j] = false;
    }
    return false;
  }
};

}  // namespace

bool is_isomorphic(const AttributedGraph& g1, const AttributedGraph& g2) {
  if (g1.a != g2.a || g1.b != g2.b)
    throw DataError("isomorphism test requires matching alphabets");
  if (g1.n() > kIsomorphismNodeLimit || g2.n() > kIsomorphismNodeLimit)
    throw DataError("isomorphism test limited to n <= " +
                    std::to_string(kIsomorphismNodeLimit));
  if (g1.n() != g2.n()) return false;
  if (g1.num_edges() != g2.num_edges()) return false;

  auto [c1, c2] = joint_color_refinement(g1, g2);
  if (!color_histograms_match(c1, c2)) return false;

  Matcher m{g1, g2, c1, c2, std::vector<int>(g1.n(), -1),
            std::vector<bool>(g1.n(), false)};
  return m.extend(0);
}

}  // namespace cometh
