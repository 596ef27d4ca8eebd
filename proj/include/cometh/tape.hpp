#ifndef COMETH_TAPE_HPP_
#define COMETH_TAPE_HPP_

#include <functional>
#include <vector>

#include "cometh/types.hpp"

namespace cometh {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

/**
 * Minimal tape-based reverse-mode differentiation over dense matrices.
 * Operations append nodes eagerly (values computed immediately) together
 * with a closure that routes the node's cotangent to its inputs. The node
 * order is topological by construction, so backward() is a single reverse
 * sweep. Gradients accumulate only into tracked nodes (leaves and their
 * descendants); encodings and one-hot inputs enter as untracked constants.
 */
class Tape {
 public:
  /// Untracked input; no gradient is ever allocated for it.
  Var constant(Matrix value);

  /// Tracked leaf (a parameter tensor).
  Var leaf(Matrix value);

  const Matrix& val(Var v) const { return nodes_[v.id].value; }
  bool tracked(Var v) const { return nodes_[v.id].tracked; }

  /// Gradient of the last backward() target w.r.t. v; zero matrix when the
  /// target does not depend on v.
  Matrix grad(Var v) const;

  /// Seeds d(target)/d(target) = 1 and sweeps the tape in reverse.
  /// `target` must be 1x1.
  void backward(Var target);

  // Used by operation implementations.
  Var emit(Matrix value, bool tracked, std::function<void(Tape&)> backprop);
  bool has_grad(Var v) const { return nodes_[v.id].grad.size() > 0; }
  Matrix& grad_ref(Var v);
  void accumulate(Var v, const Matrix& g);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool tracked = false;
    std::function<void(Tape&)> backprop;
  };
  std::vector<Node> nodes_;
};

// --- operations -----------------------------------------------------------

Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
Var scale(Tape& t, Var a, Real s);
Var add_const(Tape& t, Var a, Real c);
Var cmul(Tape& t, Var a, Var b);
Var relu(Tape& t, Var a);

/// m + 1 * row and m .* (1 * row): broadcast a 1 x cols row over all rows.
Var add_rowvec(Tape& t, Var m, Var row);
Var cmul_rowvec(Tape& t, Var m, Var row);

Var softmax_rows(Tape& t, Var a);

/// Row-wise (x - mean) / sqrt(var + eps); affine gain/offset are applied
/// separately by the caller.
Var layer_norm_rows(Tape& t, Var a, Real eps = 1e-8);

Var concat_cols(Tape& t, Var a, Var b);
Var slice_cols(Tape& t, Var a, int begin, int len);
Var sum_cols(Tape& t, Var a);   // rows x 1
Var mean_rows(Tape& t, Var a);  // 1 x cols

Var gather_rows(Tape& t, Var a, std::vector<int> rows);

/// (n^2 x 1) pair-major column -> n x n with out(i, j) = in(i * n + j).
Var rows_to_square(Tape& t, Var a, int n);

/// From a, b of shape n x d: (n^2 x d) with row(i * n + j) =
/// s * (a_i .* b_j).
Var pair_outer(Tape& t, Var a, Var b, Real s);

/// Symmetrizes pair-major rows: out(i*n+j) = (in(i*n+j) + in(j*n+i)) / 2.
Var sym_pairs(Tape& t, Var a, int n);

/**
 * Per-channel graph attention: for pair-major scores (n^2 x d) and values
 * (n x d), out(i, c) = sum_j softmax_j(scores(i*n+j, c)) * values(j, c).
 * Every channel carries its own attention distribution, so edge-modulated
 * scores gate every message channel independently.
 */
Var channel_attention(Tape& t, Var scores, Var values, int n);

/// Sum over rows of -log softmax(row)[target]; stable log-sum-exp. 1 x 1.
Var cross_entropy_rows(Tape& t, Var logits, const IntVector& targets);

}  // namespace cometh

#endif  // COMETH_TAPE_HPP_
