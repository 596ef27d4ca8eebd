#include "cometh/graph.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

namespace cometh {

AttributedGraph::AttributedGraph(int n, int a, int b) : a(a), b(b) {
  if (n < 1) throw DataError("graph must have at least one node");
  node_labels = IntVector::Zero(n);
  edge_labels = IntMatrix::Zero(n, n);
}

AttributedGraph::AttributedGraph(IntVector nodes, IntMatrix edges, int a,
                                 int b)
    : a(a), b(b), node_labels(std::move(nodes)), edge_labels(std::move(edges)) {
  validate();
}

void AttributedGraph::set_edge(int i, int j, int label) {
  if (i == j) throw DataError("self-loops are not representable");
  edge_labels(i, j) = label;
  edge_labels(j, i) = label;
}

int AttributedGraph::num_edges() const {
  int m = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if (edge_labels(i, j) != 0) ++m;
  return m;
}

int AttributedGraph::degree(int i) const {
  int d = 0;
  for (int j = 0; j < n(); ++j)
    if (j != i && edge_labels(i, j) != 0) ++d;
  return d;
}

void AttributedGraph::validate() const {
  const int nn = n();
  if (nn < 1) throw DataError("graph must have at least one node");
  if (edge_labels.rows() != nn || edge_labels.cols() != nn)
    throw DataError("edge label matrix shape does not match node count");
  for (int i = 0; i < nn; ++i) {
    if (node_labels[i] < 0 || node_labels[i] >= a)
      throw DataError("node label out of range at node " + std::to_string(i));
    if (edge_labels(i, i) != 0)
      throw DataError("nonzero diagonal at node " + std::to_string(i));
    for (int j = 0; j < nn; ++j) {
      if (edge_labels(i, j) < 0 || edge_labels(i, j) >= b)
        throw DataError("edge label out of range at (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
      if (edge_labels(i, j) != edge_labels(j, i))
        throw DataError("edge labels not symmetric at (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
    }
  }
}

bool AttributedGraph::operator==(const AttributedGraph& other) const {
  return a == other.a && b == other.b && n() == other.n() &&
         node_labels == other.node_labels && edge_labels == other.edge_labels;
}

Matrix adjacency_matrix(const AttributedGraph& g) {
  const int n = g.n();
  Matrix adj = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && g.edge_labels(i, j) != 0) adj(i, j) = 1.0;
  return adj;
}

Permutation::Permutation(std::vector<int> p) : perm(std::move(p)) {
  std::vector<int> image = perm;
  std::sort(image.begin(), image.end());
  for (int i = 0; i < static_cast<int>(image.size()); ++i)
    if (image[i] != i) throw DataError("permutation is not a bijection");
}

Permutation Permutation::identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return Permutation(std::move(p));
}

Permutation Permutation::random(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.uniform_int(i + 1)]);
  return Permutation(std::move(p));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(perm.size());
  for (int i = 0; i < n(); ++i) inv[perm[i]] = i;
  return Permutation(std::move(inv));
}

AttributedGraph apply_permutation(const AttributedGraph& g,
                                  const Permutation& p) {
  if (p.n() != g.n()) throw DataError("permutation size does not match graph");
  AttributedGraph out(g.n(), g.a, g.b);
  for (int i = 0; i < g.n(); ++i) {
    out.node_labels[p(i)] = g.node_labels[i];
    for (int j = 0; j < g.n(); ++j)
      out.edge_labels(p(i), p(j)) = g.edge_labels(i, j);
  }
  return out;
}

void MarginalPair::validate() const {
  for (const Vector* m : {&m_x, &m_e}) {
    if (m->size() == 0) throw DataError("empty marginal vector");
    if (m->minCoeff() < 0.0) throw DataError("negative marginal entry");
    if (std::abs(m->sum() - 1.0) > 1e-12)
      throw DataError("marginal vector does not sum to 1");
  }
}

std::map<int, Real> GraphDataset::size_histogram() const {
  std::map<int, Real> hist;
  for (const auto& g : graphs) hist[g.n()] += 1.0;
  for (auto& [n, w] : hist) w /= static_cast<Real>(graphs.size());
  return hist;
}

void GraphDataset::validate() const {
  for (const auto& g : graphs) {
    if (g.a != a || g.b != b)
      throw DataError("graph alphabets do not match the dataset");
    g.validate();
  }
}

MarginalPair compute_marginals(const GraphDataset& ds) {
  if (ds.graphs.empty())
    throw DataError("cannot compute marginals of an empty dataset");
  MarginalPair m;
  m.m_x = Vector::Zero(ds.a);
  m.m_e = Vector::Zero(ds.b);
  for (const auto& g : ds.graphs) {
    for (int i = 0; i < g.n(); ++i) {
      m.m_x[g.node_labels[i]] += 1.0;
      for (int j = i + 1; j < g.n(); ++j) m.m_e[g.edge_labels(i, j)] += 1.0;
    }
  }
  m.m_x /= m.m_x.sum();
  m.m_e /= m.m_e.sum();
  if (m.m_e[0] <= 0.0)
    std::cerr << "warning: edge marginal has no mass on the no-edge label; "
                 "the noise model cannot preserve sparsity\n";
  return m;
}

int sample_graph_size(const GraphDataset& ds, Rng& rng) {
  const auto hist = ds.size_histogram();
  if (hist.empty()) throw DataError("empty size histogram");
  Real u = rng.uniform01();
  int last = 0;
  for (const auto& [n, w] : hist) {
    last = n;
    u -= w;
    if (u < 0.0) return n;
  }
  return last;
}

}  // namespace cometh
