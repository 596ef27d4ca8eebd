#ifndef COMETH_ISOMORPHISM_HPP_
#define COMETH_ISOMORPHISM_HPP_

#include "cometh/graph.hpp"

namespace cometh {

inline constexpr int kIsomorphismNodeLimit = 24;

/**
 * Exact label-preserving isomorphism test: true iff some permutation maps
 * g1 onto g2 preserving node and edge labels. Color refinement prunes the
 * backtracking search; exact for n <= kIsomorphismNodeLimit, larger inputs
 * are refused rather than silently approximated.
 */
bool is_isomorphic(const AttributedGraph& g1, const AttributedGraph& g2);

}  // namespace cometh

#endif  // COMETH_ISOMORPHISM_HPP_
