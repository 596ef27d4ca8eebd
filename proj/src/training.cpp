#include "cometh/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace cometh {

void TrainConfig::validate() const {
  if (!(lambda_edge > 0.0)) throw ConfigError("train.lambda_edge must be > 0");
  if (!(learning_rate > 0.0)) throw ConfigError("train.lr must be > 0");
  if (!(p_uncond >= 0.0 && p_uncond < 1.0))
    throw ConfigError("train.p_uncond must lie in [0, 1)");
  if (batch_size < 1 || epochs < 1)
    throw ConfigError("train.batch_size and train.epochs must be >= 1");
}

namespace {

Real stable_row_ce(const Matrix& logits, int row, int target) {
  const Real m = logits.row(row).maxCoeff();
  const Real lse =
      m + std::log((logits.row(row).array() - m).exp().sum());
  return lse - logits(row, target);
}

}  // namespace

Real cross_entropy_loss(const DenoiserOutput& pred,
                        const AttributedGraph& target, Real lambda_edge) {
  const int n = target.n();
  if (pred.n != n || pred.node_logits.cols() != target.a ||
      pred.edge_logits_pair.cols() != target.b ||
      pred.edge_logits_pair.rows() != num_pairs(n))
    throw DataError("prediction and target shapes do not match");

  Real node_term = 0.0;
  for (int i = 0; i < n; ++i)
    node_term += stable_row_ce(pred.node_logits, i, target.node_labels[i]);
  Real edge_term = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edge_term += stable_row_ce(pred.edge_logits_pair, pair_index(n, i, j),
                                 target.edge_labels(i, j));
  const Real loss = node_term + lambda_edge * edge_term;
  if (!std::isfinite(loss)) throw NumericalError("non-finite loss");
  return loss;
}

void adam_update(DenoiserParams& params,
                 const std::map<std::string, Matrix>& grads, AdamState& state,
                 Real lr, Real beta1, Real beta2, Real eps) {
  const std::uint64_t t = ++state.step;
  const Real bc1 = 1.0 - std::pow(beta1, static_cast<Real>(t));
  const Real bc2 = 1.0 - std::pow(beta2, static_cast<Real>(t));
  for (auto& [name, tensor] : params.tensors) {
    const auto git = grads.find(name);
    if (git == grads.end()) continue;
    const Matrix& g = git->second;
    auto mit = state.m.find(name);
    if (mit == state.m.end()) {
      mit = state.m.emplace(name, Matrix::Zero(g.rows(), g.cols())).first;
      state.v.emplace(name, Matrix::Zero(g.rows(), g.cols()));
    }
    Matrix& m = mit->second;
    Matrix& v = state.v.at(name);
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const Matrix m_hat = m / bc1;
    const Matrix v_hat = v / bc2;
    tensor.array() -= lr * m_hat.array() / (v_hat.array().sqrt() + eps);
  }
}

Real train_step(DenoiserParams& params, AdamState& state,
                const std::vector<const AttributedGraph*>& batch,
                const std::vector<std::optional<Vector>>& conditioners,
                const NoiseSchedule& schedule, const MarginalPair& marginals,
                const TrainConfig& config, std::uint64_t step) {
  if (batch.empty()) throw DataError("train_step needs a non-empty batch");
  const Rng step_rng = Rng(config.seed).child(step);

  std::vector<TrainingExample> examples;
  examples.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    Rng rng = step_rng.child(i);
    TrainingExample ex;
    ex.clean = *batch[i];
    ex.t = rng.uniform01();
    ex.noisy = noise_graph(ex.clean, ex.t, schedule, marginals, rng);
    ex.enc = rrwp(ex.noisy, params.config.rrwp_K);
    if (params.config.conditioner_dim > 0) {
      const bool drop = rng.uniform01() < config.p_uncond;
      if (!drop && conditioners[i]) ex.y = conditioners[i];
    }
    examples.push_back(std::move(ex));
  }

  GradientResult grad = denoiser_gradient(params, examples, config.lambda_edge,
                                          config.n_threads);
  for (const auto& [name, g] : grad.grads)
    if (!g.allFinite())
      throw NumericalError("non-finite gradient in '" + name + "'");
  adam_update(params, grad.grads, state, config.learning_rate, config.beta1,
              config.beta2, config.adam_eps);
  return grad.loss;
}

Real validate(const DenoiserParams& params, const GraphDataset& val,
              const std::vector<std::optional<Vector>>& conditioners,
              const NoiseSchedule& schedule, const MarginalPair& marginals,
              Real lambda_edge, std::uint64_t seed) {
  if (val.graphs.empty()) throw DataError("validation set is empty");
  const Rng base(seed);
  Real total = 0.0;
  int count = 0;
  for (std::size_t gi = 0; gi < val.graphs.size(); ++gi) {
    const AttributedGraph& g = val.graphs[gi];
    for (int ti = 1; ti <= 9; ++ti) {
      const Real t = 0.1 * ti;
      Rng rng = base.child(gi * 16 + ti);
      const AttributedGraph noisy =
          noise_graph(g, t, schedule, marginals, rng);
      const RrwpEncoding enc = rrwp(noisy, params.config.rrwp_K);
      const DenoiserOutput out =
          denoiser_forward(params, noisy, enc, t, conditioners[gi]);
      total += cross_entropy_loss(out, g, lambda_edge);
      ++count;
    }
  }
  return total / static_cast<Real>(count);
}

TrainResult run_training(
    const DenoiserConfig& model_config, const TrainConfig& train_config,
    const GraphDataset& train, const GraphDataset& val,
    const NoiseSchedule& schedule, const MarginalPair& marginals,
    const std::function<Vector(const AttributedGraph&)>& conditioner_fn,
    const std::function<void(const std::string&)>& log,
    const std::string& checkpoint_dir, const std::optional<Checkpoint>& resume) {
  model_config.validate();
  train_config.validate();
  if (train.graphs.empty()) throw DataError("training set is empty");

  auto conditioners_of = [&](const GraphDataset& ds) {
    std::vector<std::optional<Vector>> out(ds.graphs.size());
    if (model_config.conditioner_dim > 0 && conditioner_fn)
      for (std::size_t i = 0; i < ds.graphs.size(); ++i)
        out[i] = conditioner_fn(ds.graphs[i]);
    return out;
  };
  const auto train_cond = conditioners_of(train);
  const auto val_cond = conditioners_of(val);

  TrainResult result;
  AdamState adam;
  std::uint64_t start_step = 0;
  if (resume) {
    result.params = resume->params;
    adam.m = resume->adam_m;
    adam.v = resume->adam_v;
    adam.step = resume->step;
    start_step = resume->step;
  } else {
    Rng init_rng(model_config.seed);
    result.params = init_params(model_config, init_rng);
  }
  result.best_params = result.params;
  result.best_val_loss = std::numeric_limits<Real>::infinity();

  const int n_train = static_cast<int>(train.graphs.size());
  const int steps_per_epoch =
      (n_train + train_config.batch_size - 1) / train_config.batch_size;
  const std::uint64_t total_steps =
      static_cast<std::uint64_t>(steps_per_epoch) * train_config.epochs;

  auto run_validation = [&](std::uint64_t step) {
    if (val.graphs.empty()) return;
    const Real val_loss =
        validate(result.params, val, val_cond, schedule, marginals,
                 train_config.lambda_edge, train_config.seed ^ 0x5a5a5a5aULL);
    if (log)
      log("val " + std::to_string(step) + " " + std::to_string(val_loss));
    if (val_loss < result.best_val_loss) {
      result.best_val_loss = val_loss;
      result.best_params = result.params;
      if (!checkpoint_dir.empty())
        save_checkpoint(Checkpoint{result.best_params, {}, {}, step},
                        checkpoint_dir + "/best.bin");
    }
  };

  for (std::uint64_t step = start_step; step < total_steps; ++step) {
    const std::uint64_t epoch = step / steps_per_epoch;
    const std::uint64_t pos = step % steps_per_epoch;

    // Epoch order is a pure function of (seed, epoch) so resumed runs
    // replay the same batches.
    std::vector<int> order(n_train);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng = Rng(train_config.seed).child(0xe70c000000000000ULL + epoch);
    for (int i = n_train - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

    std::vector<const AttributedGraph*> batch;
    std::vector<std::optional<Vector>> batch_cond;
    for (int k = static_cast<int>(pos) * train_config.batch_size;
         k < std::min<int>((pos + 1) * train_config.batch_size, n_train); ++k) {
      batch.push_back(&train.graphs[order[k]]);
      batch_cond.push_back(train_cond[order[k]]);
    }

    const auto t0 = std::chrono::steady_clock::now();
    const Real loss = train_step(result.params, adam, batch, batch_cond,
                                 schedule, marginals, train_config, step);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    if (log)
      log(std::to_string(step) + " " + std::to_string(loss) + " " +
          std::to_string(train_config.learning_rate) + " " +
          std::to_string(ms));

    const std::uint64_t done = step + 1;
    if (train_config.validate_every > 0 &&
        (done % train_config.validate_every == 0 || done == total_steps))
      run_validation(done);
    if (!checkpoint_dir.empty() && train_config.checkpoint_every > 0 &&
        (done % train_config.checkpoint_every == 0 || done == total_steps))
      save_checkpoint(Checkpoint{result.params, adam.m, adam.v, done},
                      checkpoint_dir + "/ckpt_step" + std::to_string(done) +
                          ".bin");
  }
  result.steps = total_steps;
  if (!checkpoint_dir.empty()) {
    save_checkpoint(Checkpoint{result.params, adam.m, adam.v, total_steps},
                    checkpoint_dir + "/final.bin");
    if (std::isinf(result.best_val_loss))
      save_checkpoint(Checkpoint{result.params, {}, {}, total_steps},
                      checkpoint_dir + "/best.bin");
  }
  return result;
}

}  // namespace cometh
