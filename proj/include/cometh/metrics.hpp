#ifndef COMETH_METRICS_HPP_
#define COMETH_METRICS_HPP_

#include <functional>
#include <string>
#include <vector>

#include "cometh/graph.hpp"

namespace cometh {

/// Normalized degree histogram over 0..max_degree(g).
Vector degree_histogram(const AttributedGraph& g);

/// Local clustering coefficient per node: 2 T_i / (d_i (d_i - 1)),
/// zero when d_i < 2.
Vector clustering_coeffs(const AttributedGraph& g);

inline constexpr int kOrbitCount = 11;

/**
 * Per-node counts of the 11 orbits of the six connected 4-node graphlets
 * (path, star, cycle, paw, diamond, clique), by direct enumeration of all
 * induced 4-node subgraphs. Orbit layout:
 *   path: 0 = endpoint, 1 = interior
 *   star: 2 = leaf, 3 = center
 *   cycle: 4
 *   paw: 5 = pendant, 6 = cycle vertex, 7 = attachment vertex
 *   diamond: 8 = degree-2 vertex, 9 = degree-3 vertex
 *   clique: 10
 */
IntMatrix orbit4_counts(const AttributedGraph& g);

/// Sorted eigenvalues of the combinatorial Laplacian L = D - A.
Vector laplacian_spectrum(const AttributedGraph& g);

/// Total triangles in the unlabeled view.
int triangle_count(const AttributedGraph& g);

enum class GraphStatistic { kDegree, kClustering, kOrbit, kSpectrum };

/**
 * Biased MMD^2 estimator between per-graph statistic histograms with the
 * Gaussian total-variation kernel k(x, y) = exp(-TV(x, y)^2 / (2 s^2)).
 * Raw values; not comparable to externally scaled benchmark tables.
 */
Real mmd(const std::vector<AttributedGraph>& set_a,
         const std::vector<AttributedGraph>& set_b, GraphStatistic statistic,
         Real bandwidth = 1.0);

/// Planar-dataset validity: connected and planar.
bool validity_planar(const AttributedGraph& g);

struct MetricReport {
  Real degree_mmd = 0.0;
  Real cluster_mmd = 0.0;
  Real orbit_mmd = 0.0;
  Real spectrum_mmd = 0.0;
  Real validity = 0.0;
  Real uniqueness = 0.0;
  Real novelty = 0.0;
  Real vun = 0.0;
  int n_generated = 0;
  int n_reference = 0;
  int n_train = 0;

  std::string to_text() const;
  std::string to_json() const;
};

using ValidityFn = std::function<bool(const AttributedGraph&)>;

/**
 * Validity, uniqueness, novelty, and their conjunction:
 *  - validity: fraction of generated graphs passing validity_fn;
 *  - uniqueness: isomorphism classes among valid samples / valid samples;
 *  - novelty: fraction of those classes isomorphic to no training graph;
 *  - vun: novel classes / all generated.
 */
MetricReport vun_report(const std::vector<AttributedGraph>& generated,
                        const std::vector<AttributedGraph>& train_set,
                        const ValidityFn& validity_fn);

}  // namespace cometh

#endif  // COMETH_METRICS_HPP_
