#ifndef COMETH_TOY_POSTERIOR_HPP_
#define COMETH_TOY_POSTERIOR_HPP_

#include <utility>
#include <vector>

#include "cometh/sampling.hpp"

namespace cometh {

/**
 * Exact-posterior denoiser over an enumerable data distribution: given a
 * weighted support of clean graphs (all of the same order), computes
 * p(clean graph | noisy graph at time t) by direct enumeration and
 * marginalizes it into per-node and per-pair clean-label tables. Plugs
 * into the samplers as a ProbFn; used to validate the reverse process
 * without any training in the loop.
 */
class EnumeratedPosterior {
 public:
  EnumeratedPosterior(std::vector<std::pair<AttributedGraph, Real>> support,
                      NoiseSchedule schedule, MarginalPair marginals);

  DenoiserProbs operator()(const AttributedGraph& g_t, Real t) const;

  ProbFn as_prob_fn() const;

  const MarginalPair& marginals() const { return marginals_; }
  const std::vector<std::pair<AttributedGraph, Real>>& support() const {
    return support_;
  }

  /// Exact time-t distribution over the support's label configuration for
  /// a single-node toy (a-state chain); used by corrector stationarity
  /// tests. Returns q_t over node-label values of node 0.
  Vector node_marginal_at(Real t) const;

 private:
  std::vector<std::pair<AttributedGraph, Real>> support_;
  NoiseSchedule schedule_;
  MarginalPair marginals_;
};

/// The eight 3-node single-edge-type graphs weighted by edge count:
/// class probabilities (0.15, 0.2, 0.25, 0.4) for 0..3 edges, spread
/// uniformly inside each class.
std::vector<std::pair<AttributedGraph, Real>> three_node_toy_support();

}  // namespace cometh

#endif  // COMETH_TOY_POSTERIOR_HPP_
