#ifndef COMETH_DENOISER_HPP_
#define COMETH_DENOISER_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cometh/ctmc.hpp"
#include "cometh/graph.hpp"
#include "cometh/rng.hpp"
#include "cometh/rrwp.hpp"
#include "cometh/tape.hpp"

namespace cometh {

struct DenoiserConfig {
  int hidden_dim = 64;
  int n_layers = 4;
  int n_heads = 4;
  int rrwp_K = 10;
  int a = 1;
  int b = 2;
  int global_dim = 16;
  int conditioner_dim = 0;  // 0 = unconditional model
  std::uint64_t seed = 0;

  void validate() const;
  int head_dim() const { return hidden_dim / n_heads; }
};

/**
 * All learnable tensors, keyed by name ("embed.node.W1", "layer0.att.Wq",
 * "out.edge.W2", "null_emb", ...). The map ordering fixes the
 * initialization draw order and the checkpoint layout, so identical seeds
 * give byte-identical checkpoints.
 */
struct DenoiserParams {
  DenoiserConfig config;
  std::map<std::string, Matrix> tensors;

  const Matrix& at(const std::string& name) const;
  void check_finite() const;
};

/// Node and symmetric edge logits. Edge logits are computed once per
/// unordered pair (pair-major rows, see pair_index) and mirrored on read.
struct DenoiserOutput {
  int n = 0;
  Matrix node_logits;       // n x a
  Matrix edge_logits_pair;  // num_pairs(n) x b

  Real edge_logit(int i, int j, int label) const;
  Matrix edge_logits_full(int label_count) const;  // (n*n) x b, diag zero
};

/// Row-softmaxed probability tables in the same layout.
struct DenoiserProbs {
  Matrix node;  // n x a
  Matrix edge;  // num_pairs(n) x b
};

DenoiserParams init_params(const DenoiserConfig& config, Rng& rng);

/**
 * Permutation-equivariant graph-transformer pass. Inputs are one-hot
 * labels concatenated with walk encodings (edge encodings are fed as the
 * mean and absolute difference of the two orientations, which keeps the
 * per-pair features symmetric), plus a global vector [t, y]. When the
 * model is conditional and y is absent, the learned null embedding stands
 * in for it.
 */
DenoiserOutput denoiser_forward(const DenoiserParams& params,
                                const AttributedGraph& g_t,
                                const RrwpEncoding& enc, Real t,
                                const std::optional<Vector>& y = std::nullopt);

DenoiserProbs probs(const DenoiserOutput& out);

struct TrainingExample {
  AttributedGraph noisy;
  RrwpEncoding enc;  // computed on `noisy`
  Real t = 0.0;
  AttributedGraph clean;
  std::optional<Vector> y;  // absent = dropped / unconditional
};

struct GradientResult {
  Real loss = 0.0;
  std::map<std::string, Matrix> grads;
};

/**
 * Mean over the batch of the per-graph cross-entropy loss
 * (node term + lambda_edge * unordered-pair edge term), with exact
 * reverse-mode gradients for every parameter tensor.
 */
GradientResult denoiser_gradient(const DenoiserParams& params,
                                 const std::vector<TrainingExample>& batch,
                                 Real lambda_edge, int n_threads = 1);

}  // namespace cometh

#endif  // COMETH_DENOISER_HPP_
