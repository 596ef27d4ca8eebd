#include "cometh/rrwp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cometh {

namespace {

// Entry-wise product accumulation in value-sorted order: the product
// multiset per entry is permutation-invariant, so sorting before summing
// makes the powers exactly permutation-equivariant (plain matmul order
// depends on the node labeling through rounding).
Matrix sorted_matmul(const Matrix& a, const Matrix& b) {
  const int n = static_cast<int>(a.rows());
  Matrix out(n, static_cast<int>(b.cols()));
  std::vector<Real> terms(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      for (int l = 0; l < n; ++l) terms[l] = a(i, l) * b(l, j);
      std::sort(terms.begin(), terms.end());
      Real sum = 0.0;
      for (Real t : terms) sum += t;
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace

RrwpEncoding rrwp(const AttributedGraph& g, int K) {
  if (K < 1) throw DataError("rrwp needs K >= 1");
  const int n = g.n();
  const Matrix adj = adjacency_matrix(g);
  Matrix walk = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Real deg = adj.row(i).sum();
    if (deg > 0.0) walk.row(i) = adj.row(i) / deg;
  }

  RrwpEncoding enc;
  enc.K = K;
  enc.power.reserve(K);
  enc.power.push_back(Matrix::Identity(n, n));
  for (int k = 1; k < K; ++k)
    enc.power.push_back(sorted_matmul(enc.power.back(), walk));

  enc.node_enc = Matrix::Zero(n, K);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) enc.node_enc(i, k) = enc.power[k](i, i);
  return enc;
}

std::vector<int> oracle_connected_components(const AttributedGraph& g) {
  const int n = g.n();
  std::vector<int> id(n, -1);
  for (int s = 0; s < n; ++s) {
    if (id[s] != -1) continue;
    std::vector<int> stack{s};
    id[s] = s;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (w != v && g.edge_labels(v, w) != 0 && id[w] == -1) {
          id[w] = s;
          stack.push_back(w);
        }
      }
    }
  }
  return id;
}

int oracle_largest_cc_size(const AttributedGraph& g) {
  const auto id = oracle_connected_components(g);
  int best = 0;
  for (int s = 0; s < g.n(); ++s) {
    int count = 0;
    for (int v : id)
      if (v == s) ++count;
    best = std::max(best, count);
  }
  return best;
}

bool rrwp_same_component(const RrwpEncoding& enc, int v, int w) {
  if (v == w) return true;
  for (const auto& p : enc.power)
    if (p(v, w) != 0.0) return true;
  return false;
}

std::vector<int> rrwp_connected_components(const AttributedGraph& g) {
  const int n = g.n();
  const RrwpEncoding enc = rrwp(g, n);
  std::vector<int> id(n);
  for (int v = 0; v < n; ++v) {
    int smallest = v;
    for (int w = 0; w < v; ++w) {
      if (rrwp_same_component(enc, v, w)) {
        smallest = id[w];
        break;
      }
    }
    id[v] = smallest;
  }
  return id;
}

int rrwp_largest_cc_size(const AttributedGraph& g) {
  const int n = g.n();
  const RrwpEncoding enc = rrwp(g, n);
  int best = 0;
  for (int v = 0; v < n; ++v) {
    int size = 0;
    for (int w = 0; w < n; ++w)
      if (rrwp_same_component(enc, v, w)) ++size;
    best = std::max(best, size);
  }
  return best;
}

std::vector<int> cycle_counts_formula(const AttributedGraph& g, int p) {
  if (p != 3 && p != 4)
    throw DataError("cycle count formulas cover p in {3, 4} only");
  const int n = g.n();
  const Matrix a = adjacency_matrix(g);
  std::vector<int> counts(n, 0);
  if (p == 3) {
    const Matrix a3 = a * a * a;
    for (int i = 0; i < n; ++i)
      counts[i] = static_cast<int>(std::llround(a3(i, i) / 2.0));
    return counts;
  }
  // Closed 4-walks from i minus the non-simple ones: i-j-i-k-i walks
  // (deg_i^2 of them) and i-j-k-j-i walks with k != i (sum of deg_j - 1
  // over neighbors j); each genuine 4-cycle is traversed twice.
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Vector deg = a.rowwise().sum();
  for (int i = 0; i < n; ++i) {
    Real spurious = deg[i] * deg[i];
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) spurious += deg[j] - 1.0;
    counts[i] = static_cast<int>(std::llround((a4(i, i) - spurious) / 2.0));
  }
  return counts;
}

std::vector<int> oracle_cycle_enumeration(const AttributedGraph& g, int p) {
  const int n = g.n();
  if (p < 3 || p > n)
    throw DataError("cycle enumeration needs 3 <= p <= n");
  if (n > 10) throw DataError("cycle enumeration limited to n <= 10");

  std::vector<int> counts(n, 0);
  std::vector<int> path;
  std::vector<bool> on_path(n, false);

  // Each cycle is enumerated once: its smallest vertex starts the path and
  // the direction is fixed by path[1] < path.back() at closure.
  std::function<void(int, int)> extend = [&](int start, int v) {
    if (static_cast<int>(path.size()) == p) {
      if (g.edge_labels(v, start) != 0 && path[1] < path.back())
        for (int u : path) ++counts[u];
      return;
    }
    for (int w = start + 1; w < n; ++w) {
      if (!on_path[w] && g.edge_labels(v, w) != 0) {
        path.push_back(w);
        on_path[w] = true;
        extend(start, w);
        on_path[w] = false;
        path.pop_back();
      }
    }
  };

  for (int s = 0; s < n; ++s) {
    path = {s};
    on_path.assign(n, false);
    on_path[s] = true;
    extend(s, s);
  }
  return counts;
}

}  // namespace cometh
