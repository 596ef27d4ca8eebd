#ifndef COMETH_PLANARITY_HPP_
#define COMETH_PLANARITY_HPP_

#include "cometh/graph.hpp"

namespace cometh {

/**
 * Left-right planarity criterion (Brandes' formulation): DFS orientation
 * with lowpoints and nesting order, then the conflict-pair test. The
 * m <= 3n - 6 pre-check short-circuits dense inputs. Works on the
 * unlabeled view (edge label != 0).
 */
bool is_planar(const AttributedGraph& g);

bool is_connected(const AttributedGraph& g);

}  // namespace cometh

#endif  // COMETH_PLANARITY_HPP_
