#ifndef COMETH_SAMPLING_HPP_
#define COMETH_SAMPLING_HPP_

#include <functional>
#include <map>
#include <optional>

#include "cometh/ctmc.hpp"
#include "cometh/denoiser.hpp"
#include "cometh/graph.hpp"
#include "cometh/schedule.hpp"

namespace cometh {

struct SampleRunConfig {
  Real tau = 0.002;          // predictor step length
  int corrector_steps = 0;   // corrector iterations per predictor step
  Real tau_c = 0.7;          // corrector step scale (Poisson mean tau_c*tau*rate)
  Real corrector_window = 0.1;  // correctors active only when t < window
  Real guidance_s = 0.0;     // classifier-free guidance strength
  Real t_min = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
  int predictor_steps() const;
};

/// Nonnegative reverse rates per dimension and target label; the current
/// label's column is zero. Pair rows follow pair_index order.
struct ReverseRates {
  Matrix node;  // n x a
  Matrix edge;  // num_pairs(n) x b
  long clamp_events = 0;
};

/**
 * Single-dimension reverse-rate assembly: for each target label z != cur,
 * rate = beta_t * m[cur] * sum_{z0} q(target | z0) / q(cur | z0) * p0[z0],
 * with the denominator floored at 1e-12 (floored evaluations are counted
 * as clamp events).
 */
Vector reverse_rate_row(int cur, const TransitionMatrix& qbar, const Vector& m,
                        Real beta_t, const Vector& p0, long* clamp_events);

ReverseRates reverse_rates(const AttributedGraph& g_t, Real t,
                           const DenoiserProbs& probs,
                           const NoiseSchedule& schedule,
                           const MarginalPair& marginals);

/**
 * One tau-leaping interval: per dimension and target, a Poisson count with
 * mean tau * rate; the dimension transitions only when exactly one event
 * occurred across all of its targets. Edges are decided on i < j and
 * mirrored. Each dimension draws from its own stream.
 */
AttributedGraph tau_leap_step(const AttributedGraph& g_t,
                              const ReverseRates& rates, Real tau,
                              std::vector<Rng>& node_streams,
                              std::vector<Rng>& pair_streams);

/// One stationarity-preserving step at fixed time t with rate
/// R_hat + R(t) and step scale tau_c * tau; time does not advance.
AttributedGraph corrector_step(const AttributedGraph& g_t, Real t,
                               const DenoiserProbs& probs,
                               const NoiseSchedule& schedule,
                               const MarginalPair& marginals, Real tau,
                               Real tau_c, std::vector<Rng>& node_streams,
                               std::vector<Rng>& pair_streams,
                               long* clamp_events = nullptr);

/**
 * Classifier-free guidance in log space:
 * log p = log p_uncond + (s + 1) (log p_cond - log p_uncond), rows
 * renormalized. Tables are floored at 1e-12 and renormalized first; s = 0
 * and s = -1 return the (floored) conditional/unconditional tables
 * exactly.
 */
DenoiserProbs guided_probs(const DenoiserProbs& p_cond,
                           const DenoiserProbs& p_uncond, Real s);

/// Denoiser abstraction used by the samplers: clean-graph probability
/// tables given the noisy graph and the time.
using ProbFn = std::function<DenoiserProbs(const AttributedGraph&, Real)>;

/// Wraps a trained model; applies classifier-free guidance when y is set
/// and the model is conditional.
ProbFn make_denoiser_prob_fn(const DenoiserParams& params,
                             const std::optional<Vector>& y, Real guidance_s);

struct DatasetStats {
  int a = 1;
  int b = 2;
  std::map<int, Real> size_histogram;
  MarginalPair marginals;

  static DatasetStats from_dataset(const GraphDataset& ds);
};

struct SampleResult {
  AttributedGraph graph;
  long clamp_events = 0;
  int denoiser_calls = 0;
};

/**
 * Reverse simulation from a given prior draw with explicit per-dimension
 * streams: predictor tau-leaps from t = 1 down to t_min (last step
 * shortened to land exactly), correctors inside the window, and a final
 * argmax pass at t_min.
 */
SampleResult sample_graph_from(const AttributedGraph& g1, const ProbFn& probs_fn,
                               const DatasetStats& stats,
                               const NoiseSchedule& schedule,
                               const SampleRunConfig& config,
                               std::vector<Rng>& node_streams,
                               std::vector<Rng>& pair_streams);

/// Full pipeline: n from the size histogram, prior draw, reverse run.
SampleResult sample_graph(const DenoiserParams& params,
                          const DatasetStats& stats,
                          const NoiseSchedule& schedule,
                          const SampleRunConfig& config,
                          const std::optional<Vector>& y, Rng& rng);

/// sample_graph with an arbitrary denoiser (exact-posterior toys).
SampleResult sample_graph_with(const ProbFn& probs_fn, const DatasetStats& stats,
                               const NoiseSchedule& schedule,
                               const SampleRunConfig& config, Rng& rng);

}  // namespace cometh

#endif  // COMETH_SAMPLING_HPP_
