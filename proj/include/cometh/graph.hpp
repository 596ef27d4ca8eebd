#ifndef COMETH_GRAPH_HPP_
#define COMETH_GRAPH_HPP_

#include <map>
#include <string>
#include <vector>

#include "cometh/rng.hpp"
#include "cometh/types.hpp"

namespace cometh {

/**
 * Undirected graph with categorical node labels in [0, a) and categorical
 * edge labels in [0, b). Edge label 0 means "no edge"; the diagonal is
 * fixed to 0 and the label matrix is kept symmetric. Immutable by
 * convention once built (all mutation happens in constructors/factories).
 */
struct AttributedGraph {
  int a = 1;  // node alphabet size
  int b = 2;  // edge alphabet size, category 0 = no edge
  IntVector node_labels;
  IntMatrix edge_labels;

  AttributedGraph() = default;
  AttributedGraph(int n, int a, int b);
  AttributedGraph(IntVector nodes, IntMatrix edges, int a, int b);

  int n() const { return static_cast<int>(node_labels.size()); }

  /// Sets both (i, j) and (j, i). Diagonal writes are rejected.
  void set_edge(int i, int j, int label);
  int edge(int i, int j) const { return edge_labels(i, j); }
  bool has_edge(int i, int j) const { return edge_labels(i, j) != 0; }

  int num_edges() const;
  int degree(int i) const;

  /// Throws DataError if any structural invariant is violated.
  void validate() const;

  bool operator==(const AttributedGraph& other) const;
};

/// Binary adjacency (edge label != 0) as a dense real matrix.
Matrix adjacency_matrix(const AttributedGraph& g);

struct Permutation {
  std::vector<int> perm;  // node i of the input maps to perm[i]

  Permutation() = default;
  explicit Permutation(std::vector<int> p);
  static Permutation identity(int n);
  static Permutation random(int n, Rng& rng);

  int n() const { return static_cast<int>(perm.size()); }
  int operator()(int i) const { return perm[i]; }
  Permutation inverse() const;
};

/// pg.node_labels[p(i)] = g.node_labels[i], pg.edge_labels(p(i), p(j)) =
/// g.edge_labels(i, j).
AttributedGraph apply_permutation(const AttributedGraph& g,
                                  const Permutation& p);

/// Empirical label marginals; drives rate matrices and the prior.
struct MarginalPair {
  Vector m_x;
  Vector m_e;

  void validate() const;
};

struct GraphDataset {
  std::vector<AttributedGraph> graphs;
  int a = 1;
  int b = 2;
  std::string split = "train";

  /// Empirical distribution of the node count, normalized to sum 1.
  std::map<int, Real> size_histogram() const;

  void validate() const;
};

/// Pooled node-label and unordered-pair edge-label frequencies. Warns on
/// stderr when m_e[0] == 0 (the dataset has no sparsity to preserve).
MarginalPair compute_marginals(const GraphDataset& ds);

/// Draws a node count from the dataset's empirical size histogram.
int sample_graph_size(const GraphDataset& ds, Rng& rng);

}  // namespace cometh

#endif  // COMETH_GRAPH_HPP_
