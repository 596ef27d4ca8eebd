#ifndef COMETH_TYPES_HPP_
#define COMETH_TYPES_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cometh {

using Real = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

/// Bad user input: malformed config file, invalid flag combination.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad data: unreadable or malformed dataset/checkpoint files, invariant
/// violations in loaded data.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-finite loss or gradients, failed convergence.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cometh

#endif  // COMETH_TYPES_HPP_
