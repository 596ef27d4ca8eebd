#include "cometh/tape.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace cometh {

Var Tape::constant(Matrix value) {
  return emit(std::move(value), false, nullptr);
}

Var Tape::leaf(Matrix value) { return emit(std::move(value), true, nullptr); }

Var Tape::emit(Matrix value, bool tracked, std::function<void(Tape&)> backprop) {
  Node node;
  node.value = std::move(value);
  node.tracked = tracked;
  node.backprop = std::move(backprop);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Matrix Tape::grad(Var v) const {
  const Node& node = nodes_[v.id];
  if (node.grad.size() > 0) return node.grad;
  return Matrix::Zero(node.value.rows(), node.value.cols());
}

Matrix& Tape::grad_ref(Var v) {
  Node& node = nodes_[v.id];
  if (node.grad.size() == 0)
    node.grad = Matrix::Zero(node.value.rows(), node.value.cols());
  return node.grad;
}

void Tape::accumulate(Var v, const Matrix& g) {
  if (!nodes_[v.id].tracked) return;
  grad_ref(v) += g;
}

void Tape::backward(Var target) {
  const Node& out = nodes_[target.id];
  if (out.value.rows() != 1 || out.value.cols() != 1)
    throw NumericalError("backward target must be a 1x1 scalar");
  grad_ref(target).setConstant(1.0);
  for (int id = target.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (node.backprop && node.grad.size() > 0 && node.tracked)
      node.backprop(*this);
  }
}

namespace {

bool any_tracked(const Tape& t, Var a) { return t.tracked(a); }
bool any_tracked(const Tape& t, Var a, Var b) {
  return t.tracked(a) || t.tracked(b);
}

}  // namespace

Var matmul(Tape& t, Var a, Var b) {
  Matrix value = t.val(a) * t.val(b);
  if (!any_tracked(t, a, b)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, b, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    if (t.tracked(a)) t.grad_ref(a).noalias() += g * t.val(b).transpose();
    if (t.tracked(b)) t.grad_ref(b).noalias() += t.val(a).transpose() * g;
  });
}

Var add(Tape& t, Var a, Var b) {
  Matrix value = t.val(a) + t.val(b);
  if (!any_tracked(t, a, b)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, b, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var scale(Tape& t, Var a, Real s) {
  Matrix value = s * t.val(a);
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, s, out](Tape& t) {
    t.grad_ref(a) += s * t.grad_ref(out);
  });
}

Var add_const(Tape& t, Var a, Real c) {
  Matrix value = (t.val(a).array() + c).matrix();
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, out](Tape& t) {
    t.grad_ref(a) += t.grad_ref(out);
  });
}

Var cmul(Tape& t, Var a, Var b) {
  Matrix value = t.val(a).cwiseProduct(t.val(b));
  if (!any_tracked(t, a, b)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, b, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    if (t.tracked(a)) t.grad_ref(a) += g.cwiseProduct(t.val(b));
    if (t.tracked(b)) t.grad_ref(b) += g.cwiseProduct(t.val(a));
  });
}

Var relu(Tape& t, Var a) {
  Matrix value = t.val(a).cwiseMax(0.0);
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, out](Tape& t) {
    const Matrix mask =
        (t.val(a).array() > 0.0).cast<Real>().matrix();
    t.grad_ref(a) += t.grad_ref(out).cwiseProduct(mask);
  });
}

Var add_rowvec(Tape& t, Var m, Var row) {
  Matrix value = t.val(m);
  value.rowwise() += t.val(row).row(0);
  if (!any_tracked(t, m, row)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [m, row, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    t.accumulate(m, g);
    if (t.tracked(row)) t.grad_ref(row) += g.colwise().sum();
  });
}

Var cmul_rowvec(Tape& t, Var m, Var row) {
  Matrix value =
      (t.val(m).array().rowwise() * t.val(row).row(0).array()).matrix();
  if (!any_tracked(t, m, row)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [m, row, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    if (t.tracked(m))
      t.grad_ref(m).array() += g.array().rowwise() * t.val(row).row(0).array();
    if (t.tracked(row))
      t.grad_ref(row) += g.cwiseProduct(t.val(m)).colwise().sum();
  });
}

Var softmax_rows(Tape& t, Var a) {
  const Matrix& x = t.val(a);
  Matrix value(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    const Real m = x.row(i).maxCoeff();
    value.row(i) = (x.row(i).array() - m).exp();
    value.row(i) /= value.row(i).sum();
  }
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    const Matrix& y = t.val(out);
    const Vector dot = g.cwiseProduct(y).rowwise().sum();
    const Matrix shifted = g.colwise() - dot;
    t.grad_ref(a) += y.cwiseProduct(shifted);
  });
}

Var layer_norm_rows(Tape& t, Var a, Real eps) {
  const Matrix& x = t.val(a);
  const int cols = static_cast<int>(x.cols());
  Vector mean = x.rowwise().mean();
  Matrix centered = x.colwise() - mean;
  Vector inv_std =
      (centered.array().square().rowwise().mean() + eps).sqrt().inverse().matrix();
  Matrix value = (centered.array().colwise() * inv_std.array()).matrix();
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, out, inv_std, cols](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    const Matrix& y = t.val(out);
    const Vector gmean = g.rowwise().mean();
    const Vector gydot = g.cwiseProduct(y).rowwise().mean();
    Matrix dx = g.colwise() - gmean;
    dx -= (y.array().colwise() * gydot.array()).matrix();
    dx = (dx.array().colwise() * inv_std.array()).matrix();
    t.grad_ref(a) += dx;
  });
}

Var concat_cols(Tape& t, Var a, Var b) {
  const Matrix& va = t.val(a);
  const Matrix& vb = t.val(b);
  Matrix value(va.rows(), va.cols() + vb.cols());
  value << va, vb;
  if (!any_tracked(t, a, b)) return t.constant(std::move(value));
  const int ca = static_cast<int>(va.cols());
  const int cb = static_cast<int>(vb.cols());
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, b, ca, cb, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    if (t.tracked(a)) t.grad_ref(a) += g.leftCols(ca);
    if (t.tracked(b)) t.grad_ref(b) += g.rightCols(cb);
  });
}

Var slice_cols(Tape& t, Var a, int begin, int len) {
  Matrix value = t.val(a).middleCols(begin, len);
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, begin, len, out](Tape& t) {
    t.grad_ref(a).middleCols(begin, len) += t.grad_ref(out);
  });
}

Var sum_cols(Tape& t, Var a) {
  Matrix value = t.val(a).rowwise().sum();
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    t.grad_ref(a).colwise() += g.col(0);
  });
}

Var mean_rows(Tape& t, Var a) {
  const Real inv = 1.0 / static_cast<Real>(t.val(a).rows());
  Matrix value = t.val(a).colwise().sum() * inv;
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, inv, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    t.grad_ref(a).rowwise() += (g.row(0) * inv).eval();
  });
}

Var gather_rows(Tape& t, Var a, std::vector<int> rows) {
  const Matrix& va = t.val(a);
  Matrix value(static_cast<int>(rows.size()), va.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) value.row(r) = va.row(rows[r]);
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true,
                [a, rows = std::move(rows), out](Tape& t) {
                  const Matrix& g = t.grad_ref(out);
                  Matrix& da = t.grad_ref(a);
                  for (std::size_t r = 0; r < rows.size(); ++r)
                    da.row(rows[r]) += g.row(r);
                });
}

Var rows_to_square(Tape& t, Var a, int n) {
  const Matrix& va = t.val(a);
  Matrix value(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) value(i, j) = va(i * n + j, 0);
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, n, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    Matrix& da = t.grad_ref(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) da(i * n + j, 0) += g(i, j);
  });
}

Var pair_outer(Tape& t, Var a, Var b, Real s) {
  const Matrix& va = t.val(a);
  const Matrix& vb = t.val(b);
  const int n = static_cast<int>(va.rows());
  const int d = static_cast<int>(va.cols());
  Matrix value(n * n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      value.row(i * n + j) = s * va.row(i).cwiseProduct(vb.row(j));
  if (!any_tracked(t, a, b)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, b, s, n, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    const Matrix& va = t.val(a);
    const Matrix& vb = t.val(b);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto grow = g.row(i * n + j);
        if (t.tracked(a))
          t.grad_ref(a).row(i) += s * grow.cwiseProduct(vb.row(j));
        if (t.tracked(b))
          t.grad_ref(b).row(j) += s * grow.cwiseProduct(va.row(i));
      }
    }
  });
}

Var sym_pairs(Tape& t, Var a, int n) {
  const Matrix& va = t.val(a);
  Matrix value(va.rows(), va.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      value.row(i * n + j) = 0.5 * (va.row(i * n + j) + va.row(j * n + i));
  if (!any_tracked(t, a)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [a, n, out](Tape& t) {
    const Matrix& g = t.grad_ref(out);
    Matrix& da = t.grad_ref(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        da.row(i * n + j) +=
            0.5 * (g.row(i * n + j) + g.row(j * n + i));
  });
}

Var channel_attention(Tape& t, Var scores, Var values, int n) {
  const Matrix& s = t.val(scores);
  const Matrix& v = t.val(values);
  const int d = static_cast<int>(s.cols());
  if (s.rows() != static_cast<long>(n) * n || v.rows() != n || v.cols() != d)
    throw NumericalError("channel_attention shape mismatch");

  // attn(i*n+j, c) = softmax over j of s(i*n+j, c), per channel.
  Matrix attn(n * n, d);
  for (int c = 0; c < d; ++c) {
    for (int i = 0; i < n; ++i) {
      Real m = -std::numeric_limits<Real>::infinity();
      for (int j = 0; j < n; ++j) m = std::max(m, s(i * n + j, c));
      Real z = 0.0;
      for (int j = 0; j < n; ++j) {
        const Real e = std::exp(s(i * n + j, c) - m);
        attn(i * n + j, c) = e;
        z += e;
      }
      for (int j = 0; j < n; ++j) attn(i * n + j, c) /= z;
    }
  }
  Matrix value = Matrix::Zero(n, d);
  for (int c = 0; c < d; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        value(i, c) += attn(i * n + j, c) * v(j, c);

  if (!any_tracked(t, scores, values)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(
      std::move(value), true, [scores, values, attn, n, d, out](Tape& t) {
        const Matrix& g = t.grad_ref(out);
        const Matrix& v = t.val(values);
        const Matrix& y = t.val(out);
        if (t.tracked(values)) {
          Matrix& dv = t.grad_ref(values);
          for (int c = 0; c < d; ++c)
            for (int j = 0; j < n; ++j) {
              Real acc = 0.0;
              for (int i = 0; i < n; ++i) acc += g(i, c) * attn(i * n + j, c);
              dv(j, c) += acc;
            }
        }
        if (t.tracked(scores)) {
          Matrix& ds = t.grad_ref(scores);
          for (int c = 0; c < d; ++c)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                ds(i * n + j, c) +=
                    g(i, c) * attn(i * n + j, c) * (v(j, c) - y(i, c));
        }
      });
}

Var cross_entropy_rows(Tape& t, Var logits, const IntVector& targets) {
  const Matrix& x = t.val(logits);
  if (x.rows() != targets.size())
    throw NumericalError("cross entropy target count mismatch");
  Real loss = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const Real m = x.row(i).maxCoeff();
    const Real lse = m + std::log((x.row(i).array() - m).exp().sum());
    loss += lse - x(i, targets[i]);
  }
  Matrix value(1, 1);
  value(0, 0) = loss;
  if (!any_tracked(t, logits)) return t.constant(std::move(value));
  Var out{static_cast<int>(t.size())};
  return t.emit(std::move(value), true, [logits, targets, out](Tape& t) {
    const Real g = t.grad_ref(out)(0, 0);
    const Matrix& x = t.val(logits);
    Matrix& dx = t.grad_ref(logits);
    for (int i = 0; i < x.rows(); ++i) {
      const Real m = x.row(i).maxCoeff();
      RowVector p = (x.row(i).array() - m).exp();
      p /= p.sum();
      dx.row(i) += g * p;
      dx(i, targets[i]) -= g;
    }
  });
}

}  // namespace cometh
