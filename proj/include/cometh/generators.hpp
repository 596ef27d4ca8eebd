#ifndef COMETH_GENERATORS_HPP_
#define COMETH_GENERATORS_HPP_

#include <vector>

#include "cometh/graph.hpp"

namespace cometh {

/**
 * Planar graphs as Delaunay triangulations of n uniform points in the
 * unit square. Connected and planar by construction; a = 1, b = 2.
 * Near-degenerate point sets (collinear triples, cocircular quadruples)
 * are resampled, at most 100 times per graph.
 */
GraphDataset generate_planar(int count, int n, std::uint64_t seed);

/// Stochastic block model: Bernoulli(p_in) within blocks, Bernoulli(p_out)
/// across; a = 1, b = 2.
GraphDataset generate_sbm(int count, const std::vector<int>& block_sizes,
                          Real p_in, Real p_out, std::uint64_t seed);

/// Appends src's graphs to dst (alphabets and split must match).
void merge_datasets(GraphDataset& dst, const GraphDataset& src);

}  // namespace cometh

#endif  // COMETH_GENERATORS_HPP_
