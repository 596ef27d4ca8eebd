#include "cometh/denoiser.hpp"

#include <cmath>
#include <thread>

namespace cometh {

void DenoiserConfig::validate() const {
  if (hidden_dim < 1 || n_layers < 1 || n_heads < 1 || rrwp_K < 1 || a < 1 ||
      b < 1 || global_dim < 1 || conditioner_dim < 0)
    throw ConfigError("denoiser dimensions must be positive");
  if (hidden_dim % n_heads != 0)
    throw ConfigError("hidden_dim must be divisible by n_heads");
}

const Matrix& DenoiserParams::at(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end())
    throw DataError("missing parameter tensor '" + name + "'");
  return it->second;
}

void DenoiserParams::check_finite() const {
  for (const auto& [name, tensor] : tensors)
    if (!tensor.allFinite())
      throw NumericalError("non-finite values in parameter '" + name + "'");
}

Real DenoiserOutput::edge_logit(int i, int j, int label) const {
  if (i == j) throw DataError("diagonal edge logits are masked");
  if (i > j) std::swap(i, j);
  return edge_logits_pair(pair_index(n, i, j), label);
}

Matrix DenoiserOutput::edge_logits_full(int label_count) const {
  Matrix full = Matrix::Zero(n * n, label_count);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      full.row(i * n + j) = edge_logits_pair.row(pair_index(n, i, j));
      full.row(j * n + i) = full.row(i * n + j);
    }
  }
  return full;
}

namespace {

// Parameter tensor names and shapes, in the (lexicographic) order the
// containing map iterates them. Initialization draws follow this order.
std::vector<std::pair<std::string, std::pair<int, int>>> param_shapes(
    const DenoiserConfig& cfg) {
  const int d = cfg.hidden_dim;
  const int dy = cfg.global_dim;
  const int c = cfg.conditioner_dim;
  const int in_x = cfg.a + cfg.rrwp_K + c;
  const int in_e = cfg.b + 2 * cfg.rrwp_K + c;
  const int in_y = 1 + c;

  std::vector<std::pair<std::string, std::pair<int, int>>> shapes;
  auto mlp = [&shapes](const std::string& prefix, int in, int hidden, int out) {
    shapes.push_back({prefix + ".W1", {in, hidden}});
    shapes.push_back({prefix + ".b1", {1, hidden}});
    shapes.push_back({prefix + ".W2", {hidden, out}});
    shapes.push_back({prefix + ".b2", {1, out}});
  };
  auto lin = [&shapes](const std::string& name, int in, int out,
                       bool bias = true) {
    shapes.push_back({name + "", {in, out}});
    if (bias) {
      std::string b = name;
      const auto pos = b.rfind(".W");
      b.replace(pos, 2, ".b");
      shapes.push_back({b, {1, out}});
    }
  };
  auto norm = [&shapes](const std::string& prefix, int dim) {
    shapes.push_back({prefix + ".gain", {1, dim}});
    shapes.push_back({prefix + ".offset", {1, dim}});
  };

  mlp("embed.node", in_x, d, d);
  mlp("embed.edge", in_e, d, d);
  mlp("embed.glob", in_y, dy, dy);
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string lp = "layer" + std::to_string(l);
    lin(lp + ".att.Wq", d, d);
    lin(lp + ".att.Wk", d, d);
    lin(lp + ".att.Wv", d, d);
    lin(lp + ".att.We1", d, d);
    lin(lp + ".att.We2", d, d);
    lin(lp + ".att.Weo", d, d);
    lin(lp + ".att.Wxo", d, d);
    lin(lp + ".att.Wyx1", dy, d);
    lin(lp + ".att.Wyx2", dy, d);
    lin(lp + ".att.Wye1", dy, d);
    lin(lp + ".att.Wye2", dy, d);
    lin(lp + ".att.Wyy", dy, dy);
    lin(lp + ".att.Wxy", d, dy, false);
    lin(lp + ".att.Wey", d, dy, false);
    norm(lp + ".norm.x1", d);
    norm(lp + ".norm.e1", d);
    norm(lp + ".norm.y1", dy);
    norm(lp + ".norm.x2", d);
    norm(lp + ".norm.e2", d);
    norm(lp + ".norm.y2", dy);
    mlp(lp + ".ffn.x", d, 2 * d, d);
    mlp(lp + ".ffn.e", d, 2 * d, d);
    mlp(lp + ".ffn.y", dy, 2 * dy, dy);
  }
  mlp("out.node", d, d, cfg.a);
  mlp("out.edge", d, d, cfg.b);
  if (c > 0) shapes.push_back({"null_emb", {1, c}});
  return shapes;
}

bool is_weight_name(const std::string& name) {
  const auto pos = name.rfind(".W");
  return pos != std::string::npos && pos + 2 < name.size();
}

bool is_gain_name(const std::string& name) {
  return name.size() >= 5 && name.compare(name.size() - 5, 5, ".gain") == 0;
}

// One-hot node labels next to the per-node walk encoding.
Matrix node_input_base(const AttributedGraph& g, const RrwpEncoding& enc,
                       const DenoiserConfig& cfg) {
  const int n = g.n();
  Matrix x = Matrix::Zero(n, cfg.a + cfg.rrwp_K);
  for (int i = 0; i < n; ++i) {
    x(i, g.node_labels[i]) = 1.0;
    for (int k = 0; k < cfg.rrwp_K; ++k)
      x(i, cfg.a + k) = enc.node_enc(i, k);
  }
  return x;
}

// Pair-major edge inputs: one-hot labels (diagonal uses the no-edge
// label) and the two-orientation mean and absolute difference of the walk
// encoding, which are symmetric functions of the unordered pair.
Matrix edge_input_base(const AttributedGraph& g, const RrwpEncoding& enc,
                       const DenoiserConfig& cfg) {
  const int n = g.n();
  const int K = cfg.rrwp_K;
  Matrix e = Matrix::Zero(n * n, cfg.b + 2 * K);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      e(row, i == j ? 0 : g.edge_labels(i, j)) = 1.0;
      for (int k = 0; k < K; ++k) {
        const Real forward = enc.power[k](i, j);
        const Real backward = enc.power[k](j, i);
        e(row, cfg.b + k) = 0.5 * (forward + backward);
        e(row, cfg.b + K + k) = std::abs(forward - backward);
      }
    }
  }
  return e;
}

struct ParamVars {
  std::map<std::string, Var> vars;
  Var operator()(const std::string& name) const {
    auto it = vars.find(name);
    if (it == vars.end())
      throw DataError("missing parameter tensor '" + name + "'");
    return it->second;
  }
};

Var linear(Tape& t, Var x, Var w, Var b) {
  return add_rowvec(t, matmul(t, x, w), b);
}

Var mlp2(Tape& t, Var x, const ParamVars& pv, const std::string& prefix) {
  Var h = relu(t, linear(t, x, pv(prefix + ".W1"), pv(prefix + ".b1")));
  return linear(t, h, pv(prefix + ".W2"), pv(prefix + ".b2"));
}

Var norm_affine(Tape& t, Var x, const ParamVars& pv,
                const std::string& prefix) {
  Var normed = layer_norm_rows(t, x);
  return add_rowvec(t, cmul_rowvec(t, normed, pv(prefix + ".gain")),
                    pv(prefix + ".offset"));
}

struct PassVars {
  Var node_logits;
  Var edge_logits_pair;
};

PassVars build_pass(Tape& tape, const ParamVars& pv,
                    const DenoiserConfig& cfg, const AttributedGraph& g,
                    const RrwpEncoding& enc, Real t,
                    const std::optional<Vector>& y) {
  if (g.a != cfg.a || g.b != cfg.b)
    throw DataError("graph alphabets do not match the denoiser config");
  if (enc.K != cfg.rrwp_K)
    throw DataError("encoding K does not match the denoiser config");
  const int n = g.n();
  const int dh = cfg.head_dim();

  Var cond;
  if (cfg.conditioner_dim > 0) {
    if (y) {
      if (static_cast<int>(y->size()) != cfg.conditioner_dim)
        throw DataError("conditioner dimension mismatch");
      Matrix ym(1, cfg.conditioner_dim);
      ym.row(0) = y->transpose();
      cond = tape.constant(std::move(ym));
    } else {
      cond = pv("null_emb");
    }
  } else if (y) {
    throw DataError("conditioner given to an unconditional model");
  }

  Var X = tape.constant(node_input_base(g, enc, cfg));
  Var E = tape.constant(edge_input_base(g, enc, cfg));
  Matrix tmat(1, 1);
  tmat(0, 0) = t;
  Var Y = tape.constant(std::move(tmat));
  if (cond.valid()) {
    Var ones_n = tape.constant(Matrix::Ones(n, 1));
    Var ones_nn = tape.constant(Matrix::Ones(n * n, 1));
    X = concat_cols(tape, X, matmul(tape, ones_n, cond));
    E = concat_cols(tape, E, matmul(tape, ones_nn, cond));
    Y = concat_cols(tape, Y, cond);
  }
  X = mlp2(tape, X, pv, "embed.node");
  E = mlp2(tape, E, pv, "embed.edge");
  Y = mlp2(tape, Y, pv, "embed.glob");

  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string lp = "layer" + std::to_string(l);
    const std::string at = lp + ".att";

    Var q = linear(tape, X, pv(at + ".Wq"), pv(at + ".bq"));
    Var k = linear(tape, X, pv(at + ".Wk"), pv(at + ".bk"));
    Var v = linear(tape, X, pv(at + ".Wv"), pv(at + ".bv"));

    // Pairwise scores FiLM-modulated by edge features; the same tensor
    // drives the per-channel attention weights and (symmetrized) the edge
    // update.
    Var qk = pair_outer(tape, q, k, 1.0 / std::sqrt(static_cast<Real>(dh)));
    Var f1 = linear(tape, E, pv(at + ".We1"), pv(at + ".be1"));
    Var f2 = linear(tape, E, pv(at + ".We2"), pv(at + ".be2"));
    Var scores = add(tape, cmul(tape, qk, add_const(tape, f1, 1.0)), f2);

    Var xattn = channel_attention(tape, scores, v, n);
    Var xo = linear(tape, xattn, pv(at + ".Wxo"), pv(at + ".bxo"));
    Var ysx = linear(tape, Y, pv(at + ".Wyx2"), pv(at + ".byx2"));
    Var ybx = linear(tape, Y, pv(at + ".Wyx1"), pv(at + ".byx1"));
    xo = add_rowvec(tape, cmul_rowvec(tape, xo, add_const(tape, ysx, 1.0)),
                    ybx);

    Var eo = linear(tape, sym_pairs(tape, scores, n), pv(at + ".Weo"),
                    pv(at + ".beo"));
    Var yse = linear(tape, Y, pv(at + ".Wye2"), pv(at + ".bye2"));
    Var ybe = linear(tape, Y, pv(at + ".Wye1"), pv(at + ".bye1"));
    eo = add_rowvec(tape, cmul_rowvec(tape, eo, add_const(tape, yse, 1.0)),
                    ybe);

    Var yo = add(tape, linear(tape, Y, pv(at + ".Wyy"), pv(at + ".byy")),
                 add(tape, matmul(tape, mean_rows(tape, xo), pv(at + ".Wxy")),
                     matmul(tape, mean_rows(tape, eo), pv(at + ".Wey"))));

    X = norm_affine(tape, add(tape, X, xo), pv, lp + ".norm.x1");
    E = norm_affine(tape, add(tape, E, eo), pv, lp + ".norm.e1");
    Y = norm_affine(tape, add(tape, Y, yo), pv, lp + ".norm.y1");

    X = norm_affine(tape, add(tape, X, mlp2(tape, X, pv, lp + ".ffn.x")), pv,
                    lp + ".norm.x2");
    E = norm_affine(tape, add(tape, E, mlp2(tape, E, pv, lp + ".ffn.e")), pv,
                    lp + ".norm.e2");
    Y = norm_affine(tape, add(tape, Y, mlp2(tape, Y, pv, lp + ".ffn.y")), pv,
                    lp + ".norm.y2");
  }

  std::vector<int> pair_rows;
  pair_rows.reserve(num_pairs(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_rows.push_back(i * n + j);

  PassVars out;
  out.node_logits = mlp2(tape, X, pv, "out.node");
  out.edge_logits_pair =
      mlp2(tape, gather_rows(tape, E, std::move(pair_rows)), pv, "out.edge");
  return out;
}

ParamVars register_params(Tape& tape, const DenoiserParams& params) {
  ParamVars pv;
  for (const auto& [name, tensor] : params.tensors)
    pv.vars[name] = tape.leaf(tensor);
  return pv;
}

IntVector edge_targets_pairs(const AttributedGraph& g) {
  IntVector targets(num_pairs(g.n()));
  int p = 0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) targets[p++] = g.edge_labels(i, j);
  return targets;
}

}  // namespace

DenoiserParams init_params(const DenoiserConfig& config, Rng& rng) {
  config.validate();
  DenoiserParams params;
  params.config = config;
  for (const auto& [name, shape] : param_shapes(config)) {
    Matrix tensor(shape.first, shape.second);
    if (name == "null_emb") {
      tensor.setZero();
    } else if (is_gain_name(name)) {
      tensor.setOnes();
    } else if (is_weight_name(name)) {
      const Real bound = std::sqrt(3.0 / static_cast<Real>(shape.first));
      for (int r = 0; r < tensor.rows(); ++r)
        for (int c = 0; c < tensor.cols(); ++c)
          tensor(r, c) = bound * (2.0 * rng.uniform01() - 1.0);
    } else {
      tensor.setZero();
    }
    params.tensors.emplace(name, std::move(tensor));
  }
  return params;
}

DenoiserOutput denoiser_forward(const DenoiserParams& params,
                                const AttributedGraph& g_t,
                                const RrwpEncoding& enc, Real t,
                                const std::optional<Vector>& y) {
  Tape tape;
  const ParamVars pv = register_params(tape, params);
  const PassVars pass = build_pass(tape, pv, params.config, g_t, enc, t, y);
  DenoiserOutput out;
  out.n = g_t.n();
  out.node_logits = tape.val(pass.node_logits);
  out.edge_logits_pair = tape.val(pass.edge_logits_pair);
  if (!out.node_logits.allFinite() || !out.edge_logits_pair.allFinite())
    throw NumericalError("denoiser produced non-finite logits");
  return out;
}

DenoiserProbs probs(const DenoiserOutput& out) {
  auto softmax = [](const Matrix& logits) {
    Matrix p(logits.rows(), logits.cols());
    for (int i = 0; i < logits.rows(); ++i) {
      const Real m = logits.row(i).maxCoeff();
      p.row(i) = (logits.row(i).array() - m).exp();
      p.row(i) /= p.row(i).sum();
    }
    return p;
  };
  return DenoiserProbs{softmax(out.node_logits),
                       softmax(out.edge_logits_pair)};
}

GradientResult denoiser_gradient(const DenoiserParams& params,
                                 const std::vector<TrainingExample>& batch,
                                 Real lambda_edge, int n_threads) {
  if (batch.empty()) throw DataError("gradient needs a non-empty batch");
  const Real inv_batch = 1.0 / static_cast<Real>(batch.size());

  std::vector<Real> losses(batch.size(), 0.0);
  std::vector<std::map<std::string, Matrix>> grads(batch.size());

  auto run_one = [&](std::size_t idx) {
    const TrainingExample& ex = batch[idx];
    Tape tape;
    const ParamVars pv = register_params(tape, params);
    const PassVars pass =
        build_pass(tape, pv, params.config, ex.noisy, ex.enc, ex.t, ex.y);
    Var node_ce =
        cross_entropy_rows(tape, pass.node_logits, ex.clean.node_labels);
    Var edge_ce = cross_entropy_rows(tape, pass.edge_logits_pair,
                                     edge_targets_pairs(ex.clean));
    Var loss = add(tape, node_ce, scale(tape, edge_ce, lambda_edge));
    tape.backward(loss);
    losses[idx] = tape.val(loss)(0, 0);
    for (const auto& [name, var] : pv.vars)
      grads[idx].emplace(name, tape.grad(var));
  };

  if (n_threads <= 1 || batch.size() == 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> workers;
    const int count = std::min<int>(n_threads, static_cast<int>(batch.size()));
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&, w]() {
        for (std::size_t i = w; i < batch.size(); i += count) run_one(i);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  GradientResult result;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    result.loss += losses[i] * inv_batch;
    for (auto& [name, g] : grads[i]) {
      auto it = result.grads.find(name);
      if (it == result.grads.end())
        result.grads.emplace(name, g * inv_batch);
      else
        it->second += g * inv_batch;
    }
  }
  if (!std::isfinite(result.loss)) {
    params.check_finite();
    throw NumericalError("non-finite training loss");
  }
  return result;
}

}  // namespace cometh
