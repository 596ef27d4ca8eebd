#ifndef COMETH_RRWP_HPP_
#define COMETH_RRWP_HPP_

#include <vector>

#include "cometh/graph.hpp"

namespace cometh {

/**
 * Random-walk encoding stack for a graph: power_k holds M^k of the
 * degree-normalized adjacency M = D^{-1} A, for k = 0..K-1 (M^0 = I).
 * node_enc row i collects the return probabilities (M^k)_{ii}, the
 * per-node structural encoding.
 *
 * Rows of M for isolated nodes are all zero (D^{-1} is undefined there;
 * no self-loop is injected). Noisy graphs do contain isolated nodes.
 */
struct RrwpEncoding {
  int K = 0;
  Matrix node_enc;                // n x K
  std::vector<Matrix> power;      // K matrices, each n x n

  Real edge_entry(int i, int j, int k) const { return power[k](i, j); }
};

RrwpEncoding rrwp(const AttributedGraph& g, int K);

/// Connected component id per node; ids are the smallest contained vertex.
std::vector<int> oracle_connected_components(const AttributedGraph& g);

int oracle_largest_cc_size(const AttributedGraph& g);

/**
 * Walk-derived connectivity predicate: v and w share a component iff
 * v == w or (M^k)_{vw} != 0 for some k < n. The whole power stack is
 * consulted, a single fixed power misses bipartite parity cases.
 */
bool rrwp_same_component(const RrwpEncoding& enc, int v, int w);

/// Computes per-node RRWP encoding powers 0..n-1 and derives component
/// sizes by column summation over the same-component relation.
int rrwp_largest_cc_size(const AttributedGraph& g);

std::vector<int> rrwp_connected_components(const AttributedGraph& g);

/// Per-node count of simple p-cycles through each node, p in {3, 4},
/// from adjacency-power identities; exact integers.
std::vector<int> cycle_counts_formula(const AttributedGraph& g, int p);

/// Ground truth by DFS enumeration of simple cycles of length exactly p;
/// each cycle adds one to every contained node. Feasible for p <= n <= 10.
std::vector<int> oracle_cycle_enumeration(const AttributedGraph& g, int p);

}  // namespace cometh

#endif  // COMETH_RRWP_HPP_
