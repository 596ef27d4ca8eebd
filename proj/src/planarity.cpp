#include "cometh/planarity.hpp"

#include <algorithm>
#include <vector>

namespace cometh {
namespace {

constexpr int kNone = -1;

// Left-right planarity test state. Oriented edge e runs src[e] -> dst[e];
// the orientation DFS assigns one direction per undirected edge and
// computes lowpoints and the nesting order, the testing DFS maintains the
// conflict-pair stack.
struct LrTest {
  int n;
  std::vector<std::vector<int>> neighbors;

  std::vector<int> src, dst;
  std::vector<int> lowpt, lowpt2, nesting;
  std::vector<int> ref_, lowpt_edge, stack_bottom;
  std::vector<int> height, parent_edge;
  std::vector<std::vector<int>> out_edges;  // oriented edges leaving v
  std::vector<std::vector<bool>> handled;

  struct Interval {
    int low = kNone;
    int high = kNone;
    bool empty() const { return low == kNone && high == kNone; }
  };
  struct ConflictPair {
    Interval left, right;
  };
  std::vector<ConflictPair> stack;

  explicit LrTest(const AttributedGraph& g) : n(g.n()) {
    neighbors.resize(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != i && g.edge_labels(i, j) != 0) neighbors[i].push_back(j);
    handled.assign(n, std::vector<bool>(n, false));
    height.assign(n, kNone);
    parent_edge.assign(n, kNone);
    out_edges.resize(n);
  }

  int new_edge(int u, int v) {
    src.push_back(u);
    dst.push_back(v);
    lowpt.push_back(height[u]);
    lowpt2.push_back(height[u]);
    nesting.push_back(0);
    ref_.push_back(kNone);
    lowpt_edge.push_back(kNone);
    stack_bottom.push_back(0);
    out_edges[u].push_back(static_cast<int>(src.size()) - 1);
    return static_cast<int>(src.size()) - 1;
  }

  void orient(int v) {
    const int e = parent_edge[v];
    for (int w : neighbors[v]) {
      if (handled[v][w]) continue;
      handled[v][w] = handled[w][v] = true;
      const int vw = new_edge(v, w);
      if (height[w] == kNone) {  // tree edge
        parent_edge[w] = vw;
        height[w] = height[v] + 1;
        orient(w);
      } else {  // back edge
        lowpt[vw] = height[w];
      }
      nesting[vw] = 2 * lowpt[vw];
      if (lowpt2[vw] < height[v]) ++nesting[vw];  // chordal
      if (e != kNone) {
        if (lowpt[vw] < lowpt[e]) {
          lowpt2[e] = std::min(lowpt[e], lowpt2[vw]);
          lowpt[e] = lowpt[vw];
        } else if (lowpt[vw] > lowpt[e]) {
          lowpt2[e] = std::min(lowpt2[e], lowpt[vw]);
        } else {
          lowpt2[e] = std::min(lowpt2[e], lowpt2[vw]);
        }
      }
    }
  }

  bool conflicting(const Interval& i, int b) const {
    return !i.empty() && lowpt[i.high] > lowpt[b];
  }

  int lowest(const ConflictPair& p) const {
    if (p.left.empty()) return lowpt[p.right.low];
    if (p.right.empty()) return lowpt[p.left.low];
    return std::min(lowpt[p.left.low], lowpt[p.right.low]);
  }

  bool add_constraints(int ei, int e) {
    ConflictPair p;
    // Merge the return edges of ei into p.right.
    do {
      ConflictPair q = stack.back();
      stack.pop_back();
      if (!q.left.empty()) std::swap(q.left, q.right);
      if (!q.left.empty()) return false;  // not planar
      if (lowpt[q.right.low] > lowpt[e]) {
        if (p.right.empty())
          p.right.high = q.right.high;
        else
          ref_[p.right.low] = q.right.high;
        p.right.low = q.right.low;
      } else {
        ref_[q.right.low] = lowpt_edge[e];
      }
    } while (static_cast<int>(stack.size()) != stack_bottom[ei]);

    // Merge conflicting return edges of earlier siblings into p.left.
    while (!stack.empty() && (conflicting(stack.back().left, ei) ||
                              conflicting(stack.back().right, ei))) {
      ConflictPair q = stack.back();
      stack.pop_back();
      if (conflicting(q.right, ei)) std::swap(q.left, q.right);
      if (conflicting(q.right, ei)) return false;  // not planar
      if (p.right.low != kNone) ref_[p.right.low] = q.right.high;
      if (q.right.low != kNone) p.right.low = q.right.low;
      if (p.left.empty())
        p.left.high = q.left.high;
      else
        ref_[p.left.low] = q.left.high;
      p.left.low = q.left.low;
    }
    if (!(p.left.empty() && p.right.empty())) stack.push_back(p);
    return true;
  }

  void trim_back_edges(int u) {
    while (!stack.empty() && lowest(stack.back()) == height[u]) stack.pop_back();
    if (stack.empty()) return;
    ConflictPair p = stack.back();
    stack.pop_back();
    while (p.left.high != kNone && dst[p.left.high] == u)
      p.left.high = ref_[p.left.high];
    if (p.left.high == kNone && p.left.low != kNone) {
      ref_[p.left.low] = p.right.low;
      p.left.low = kNone;
    }
    while (p.right.high != kNone && dst[p.right.high] == u)
      p.right.high = ref_[p.right.high];
    if (p.right.high == kNone && p.right.low != kNone) {
      ref_[p.right.low] = p.left.low;
      p.right.low = kNone;
    }
    stack.push_back(p);
  }

  bool test(int v) {
    const int e = parent_edge[v];
    bool first = true;
    for (int ei : out_edges[v]) {
      stack_bottom[ei] = static_cast<int>(stack.size());
      if (ei == parent_edge[dst[ei]]) {  // tree edge
        if (!test(dst[ei])) return false;
      } else {  // back edge
        lowpt_edge[ei] = ei;
        ConflictPair p;
        p.right.low = p.right.high = ei;
        stack.push_back(p);
      }
      if (lowpt[ei] < height[v]) {  // ei has a return edge
        if (first) {
          if (e != kNone) lowpt_edge[e] = lowpt_edge[ei];
        } else {
          if (!add_constraints(ei, e)) return false;
        }
      }
      first = false;
    }
    if (e != kNone) trim_back_edges(src[e]);
    return true;
  }

  bool run() {
    for (int v = 0; v < n; ++v) {
      if (height[v] == kNone) {
        height[v] = 0;
        orient(v);
      }
    }
    for (int v = 0; v < n; ++v)
      std::stable_sort(out_edges[v].begin(), out_edges[v].end(),
                       [this](int a, int b) { return nesting[a] < nesting[b]; });
    for (int v = 0; v < n; ++v)
      if (parent_edge[v] == kNone && !out_edges[v].empty())
        if (!test(v)) return false;
    return true;
  }
};

}  // namespace

bool is_planar(const AttributedGraph& g) {
  const int n = g.n();
  if (n <= 4) return true;
  if (g.num_edges() > 3 * n - 6) return false;
  LrTest lr(g);
  return lr.run();
}

bool is_connected(const AttributedGraph& g) {
  const int n = g.n();
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (w != v && g.edge_labels(v, w) != 0 && !seen[w]) {
        seen[w] = true;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == n;
}

}  // namespace cometh
