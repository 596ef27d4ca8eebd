#ifndef COMETH_TRAINING_HPP_
#define COMETH_TRAINING_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cometh/checkpoint.hpp"
#include "cometh/denoiser.hpp"
#include "cometh/schedule.hpp"

namespace cometh {

struct TrainConfig {
  Real lambda_edge = 5.0;
  Real learning_rate = 3e-4;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real adam_eps = 1e-8;
  int batch_size = 8;
  int epochs = 50;
  Real p_uncond = 0.1;    // conditioner dropout probability
  int checkpoint_every = 100;  // steps
  int validate_every = 50;     // steps
  std::uint64_t seed = 0;
  int n_threads = 1;

  void validate() const;
};

/**
 * Eq-weighted cross entropy between predicted tables and a clean graph:
 * node term over all nodes plus lambda_edge times the edge term over
 * unordered pairs i < j.
 */
Real cross_entropy_loss(const DenoiserOutput& pred,
                        const AttributedGraph& target, Real lambda_edge);

struct AdamState {
  std::map<std::string, Matrix> m;
  std::map<std::string, Matrix> v;
  std::uint64_t step = 0;  // completed updates
};

/// Bias-corrected adaptive-moment update, applied in place.
void adam_update(DenoiserParams& params,
                 const std::map<std::string, Matrix>& grads, AdamState& state,
                 Real lr, Real beta1, Real beta2, Real eps);

/**
 * One optimizer step on a batch of clean graphs: per graph, draw
 * t ~ U[0,1], noise forward, drop the conditioner with probability
 * p_uncond, evaluate the loss, and apply one Adam update from the summed
 * gradients. All randomness comes from streams derived from
 * (config seed, step), so a resumed run replays exactly.
 */
Real train_step(DenoiserParams& params, AdamState& state,
                const std::vector<const AttributedGraph*>& batch,
                const std::vector<std::optional<Vector>>& conditioners,
                const NoiseSchedule& schedule, const MarginalPair& marginals,
                const TrainConfig& config, std::uint64_t step);

/// Mean loss over the validation set on the fixed time grid
/// t in {0.1, ..., 0.9}; deterministic given the seed, no updates.
Real validate(const DenoiserParams& params, const GraphDataset& val,
              const std::vector<std::optional<Vector>>& conditioners,
              const NoiseSchedule& schedule, const MarginalPair& marginals,
              Real lambda_edge, std::uint64_t seed);

struct TrainResult {
  DenoiserParams params;       // final
  DenoiserParams best_params;  // lowest validation loss
  Real best_val_loss = 0.0;
  std::uint64_t steps = 0;
};

/**
 * Full training driver: epochs of shuffled batches over the training set,
 * periodic validation and checkpointing. `log` receives one line per step
 * ("step loss lr time_ms"). Conditioner extraction is optional; when
 * given, it maps a clean graph to its conditioning vector.
 */
TrainResult run_training(
    const DenoiserConfig& model_config, const TrainConfig& train_config,
    const GraphDataset& train, const GraphDataset& val,
    const NoiseSchedule& schedule, const MarginalPair& marginals,
    const std::function<Vector(const AttributedGraph&)>& conditioner_fn,
    const std::function<void(const std::string&)>& log,
    const std::string& checkpoint_dir = "",
    const std::optional<Checkpoint>& resume = std::nullopt);

}  // namespace cometh

#endif  // COMETH_TRAINING_HPP_
