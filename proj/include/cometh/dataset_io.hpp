#ifndef COMETH_DATASET_IO_HPP_
#define COMETH_DATASET_IO_HPP_

#include <iosfwd>
#include <string>

#include "cometh/graph.hpp"

namespace cometh {

/**
 * Plain-text dataset format, one file per split:
 *
 *   #cometh-graphs v1
 *   n a b            <- one block per graph
 *   l0 l1 ... l(n-1) <- node labels
 *   i j label        <- one line per unordered pair with label != 0
 *                    <- blank line between graphs
 *
 * Round-trip is exact. Parse errors carry the offending line number.
 */
void serialize_dataset(const GraphDataset& ds, const std::string& path);
GraphDataset deserialize_dataset(const std::string& path);

void write_dataset(const GraphDataset& ds, std::ostream& out);
GraphDataset read_dataset(std::istream& in);

}  // namespace cometh

#endif  // COMETH_DATASET_IO_HPP_
