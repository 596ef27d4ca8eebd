#include "cometh/sampling.hpp"

#include <cmath>

namespace cometh {

namespace {
constexpr Real kRatioFloor = 1e-12;
constexpr Real kProbFloor = 1e-12;
}  // namespace

void SampleRunConfig::validate() const {
  if (!(t_min > 0.0 && t_min < 1.0))
    throw ConfigError("sample.t_min must lie in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0 - t_min))
    throw ConfigError("sample.tau must lie in (0, 1 - t_min]");
  if (corrector_steps < 0)
    throw ConfigError("sample.corrector_steps must be >= 0");
  if (!(tau_c >= 0.0)) throw ConfigError("sample.tau_c must be >= 0");
  if (!(guidance_s >= -1.0)) throw ConfigError("sample.s must be >= -1");
}

int SampleRunConfig::predictor_steps() const {
  return static_cast<int>(std::ceil((1.0 - t_min) / tau - 1e-9));
}

Vector reverse_rate_row(int cur, const TransitionMatrix& qbar, const Vector& m,
                        Real beta_t, const Vector& p0, long* clamp_events) {
  const int s = static_cast<int>(m.size());
  Vector rates = Vector::Zero(s);
  for (int target = 0; target < s; ++target) {
    if (target == cur) continue;
    Real acc = 0.0;
    for (int z0 = 0; z0 < s; ++z0) {
      Real denom = qbar(z0, cur);
      if (denom < kRatioFloor) {
        denom = kRatioFloor;
        if (clamp_events) ++*clamp_events;
      }
      acc += qbar(z0, target) / denom * p0[z0];
    }
    rates[target] = beta_t * m[cur] * acc;
  }
  return rates;
}

ReverseRates reverse_rates(const AttributedGraph& g_t, Real t,
                           const DenoiserProbs& probs,
                           const NoiseSchedule& schedule,
                           const MarginalPair& marginals) {
  if (t < schedule.t_min)
    throw DataError("reverse rates requested below t_min");
  const int n = g_t.n();
  const Real beta_t = schedule.beta(t);
  const Real bbar = schedule.beta_bar(t);
  const TransitionMatrix qx = transition_closed_form(marginals.m_x, bbar);
  const TransitionMatrix qe = transition_closed_form(marginals.m_e, bbar);

  ReverseRates out;
  out.node = Matrix::Zero(n, g_t.a);
  out.edge = Matrix::Zero(num_pairs(n), g_t.b);
  for (int i = 0; i < n; ++i)
    out.node.row(i) =
        reverse_rate_row(g_t.node_labels[i], qx, marginals.m_x, beta_t,
                         probs.node.row(i).transpose(), &out.clamp_events)
            .transpose();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int p = pair_index(n, i, j);
      out.edge.row(p) =
          reverse_rate_row(g_t.edge_labels(i, j), qe, marginals.m_e, beta_t,
                           probs.edge.row(p).transpose(), &out.clamp_events)
              .transpose();
    }
  }
  return out;
}

namespace {

// Applies the tau-leaping rejection rule for a single dimension: the
// dimension moves only when its total event count is exactly one.
int leap_dimension(int cur, const RowVector& rates, Real tau, Rng& stream) {
  int total = 0;
  int chosen = cur;
  for (int target = 0; target < rates.size(); ++target) {
    if (target == cur) continue;
    const int count = stream.poisson(tau * rates[target]);
    total += count;
    if (count == 1) chosen = target;
    if (total > 1) {
      // Keep the stream advancing over the remaining targets so that the
      // draw count per dimension stays fixed.
      for (int rest = target + 1; rest < rates.size(); ++rest)
        if (rest != cur) stream.poisson(tau * rates[rest]);
      return cur;
    }
  }
  return total == 1 ? chosen : cur;
}

}  // namespace

AttributedGraph tau_leap_step(const AttributedGraph& g_t,
                              const ReverseRates& rates, Real tau,
                              std::vector<Rng>& node_streams,
                              std::vector<Rng>& pair_streams) {
  if (!rates.node.allFinite() || !rates.edge.allFinite())
    throw NumericalError("non-finite reverse rates");
  const int n = g_t.n();
  AttributedGraph out(n, g_t.a, g_t.b);
  for (int i = 0; i < n; ++i)
    out.node_labels[i] = leap_dimension(g_t.node_labels[i], rates.node.row(i),
                                        tau, node_streams[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int p = pair_index(n, i, j);
      const int label = leap_dimension(g_t.edge_labels(i, j),
                                       rates.edge.row(p), tau, pair_streams[p]);
      if (label != 0) out.set_edge(i, j, label);
    }
  }
  return out;
}

AttributedGraph corrector_step(const AttributedGraph& g_t, Real t,
                               const DenoiserProbs& probs,
                               const NoiseSchedule& schedule,
                               const MarginalPair& marginals, Real tau,
                               Real tau_c, std::vector<Rng>& node_streams,
                               std::vector<Rng>& pair_streams,
                               long* clamp_events) {
  ReverseRates rates = reverse_rates(g_t, t, probs, schedule, marginals);
  if (clamp_events) *clamp_events += rates.clamp_events;

  // Corrector rate R_hat + R(t): the forward rate from the current label
  // into target z is beta(t) * m[z].
  const Real beta_t = schedule.beta(t);
  const int n = g_t.n();
  for (int i = 0; i < n; ++i)
    for (int z = 0; z < g_t.a; ++z)
      if (z != g_t.node_labels[i])
        rates.node(i, z) += beta_t * marginals.m_x[z];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int z = 0; z < g_t.b; ++z)
        if (z != g_t.edge_labels(i, j))
          rates.edge(pair_index(n, i, j), z) += beta_t * marginals.m_e[z];

  return tau_leap_step(g_t, rates, tau_c * tau, node_streams, pair_streams);
}

namespace {

Matrix floor_normalize(const Matrix& p) {
  Matrix out = p.cwiseMax(kProbFloor);
  for (int i = 0; i < out.rows(); ++i) out.row(i) /= out.row(i).sum();
  return out;
}

Matrix combine_log_space(const Matrix& cond, const Matrix& uncond, Real s) {
  Matrix out(cond.rows(), cond.cols());
  for (int i = 0; i < cond.rows(); ++i) {
    RowVector logp = uncond.row(i).array().log() +
                     (s + 1.0) * (cond.row(i).array().log() -
                                  uncond.row(i).array().log());
    const Real m = logp.maxCoeff();
    out.row(i) = (logp.array() - m).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

}  // namespace

DenoiserProbs guided_probs(const DenoiserProbs& p_cond,
                           const DenoiserProbs& p_uncond, Real s) {
  if (s < -1.0) throw ConfigError("guidance strength must be >= -1");
  DenoiserProbs cond{floor_normalize(p_cond.node), floor_normalize(p_cond.edge)};
  DenoiserProbs uncond{floor_normalize(p_uncond.node),
                       floor_normalize(p_uncond.edge)};
  if (s == 0.0) return cond;    // the combination reduces to p_cond
  if (s == -1.0) return uncond; // coefficient on the conditional term is zero
  return DenoiserProbs{combine_log_space(cond.node, uncond.node, s),
                       combine_log_space(cond.edge, uncond.edge, s)};
}

ProbFn make_denoiser_prob_fn(const DenoiserParams& params,
                             const std::optional<Vector>& y, Real guidance_s) {
  if (y && params.config.conditioner_dim == 0)
    throw ConfigError("conditioner given but the model is unconditional");
  return [params, y, guidance_s](const AttributedGraph& g_t,
                                 Real t) -> DenoiserProbs {
    const RrwpEncoding enc = rrwp(g_t, params.config.rrwp_K);
    if (!y) {
      return probs(denoiser_forward(params, g_t, enc, t, std::nullopt));
    }
    const DenoiserProbs cond =
        probs(denoiser_forward(params, g_t, enc, t, y));
    const DenoiserProbs uncond =
        probs(denoiser_forward(params, g_t, enc, t, std::nullopt));
    return guided_probs(cond, uncond, guidance_s);
  };
}

DatasetStats DatasetStats::from_dataset(const GraphDataset& ds) {
  DatasetStats stats;
  stats.a = ds.a;
  stats.b = ds.b;
  stats.size_histogram = ds.size_histogram();
  stats.marginals = compute_marginals(ds);
  return stats;
}

namespace {

int argmax_row(const Matrix& m, int row) {
  int best = 0;
  for (int c = 1; c < m.cols(); ++c)
    if (m(row, c) > m(row, best)) best = c;
  return best;
}

int sample_size_from_histogram(const std::map<int, Real>& hist, Rng& rng) {
  if (hist.empty()) throw DataError("empty size histogram");
  Real u = rng.uniform01();
  int last = 0;
  for (const auto& [n, w] : hist) {
    last = n;
    u -= w;
    if (u < 0.0) return n;
  }
  return last;
}

}  // namespace

SampleResult sample_graph_from(const AttributedGraph& g1, const ProbFn& probs_fn,
                               const DatasetStats& stats,
                               const NoiseSchedule& schedule,
                               const SampleRunConfig& config,
                               std::vector<Rng>& node_streams,
                               std::vector<Rng>& pair_streams) {
  config.validate();
  NoiseSchedule sched = schedule;
  sched.t_min = config.t_min;

  SampleResult result;
  result.graph = g1;
  Real t = 1.0;
  while (t > config.t_min + 1e-12) {
    const Real step = std::min(config.tau, t - config.t_min);
    const DenoiserProbs p = probs_fn(result.graph, t);
    ++result.denoiser_calls;
    const ReverseRates rates =
        reverse_rates(result.graph, t, p, sched, stats.marginals);
    result.clamp_events += rates.clamp_events;
    result.graph =
        tau_leap_step(result.graph, rates, step, node_streams, pair_streams);
    t -= step;
    if (t < config.t_min) t = config.t_min;  // absorb accumulation dust

    if (config.corrector_steps > 0 && t < config.corrector_window) {
      for (int c = 0; c < config.corrector_steps; ++c) {
        const DenoiserProbs pc = probs_fn(result.graph, t);
        ++result.denoiser_calls;
        result.graph = corrector_step(result.graph, t, pc, sched,
                                      stats.marginals, config.tau, config.tau_c,
                                      node_streams, pair_streams,
                                      &result.clamp_events);
      }
    }
  }

  // Final pass: per-dimension argmax of the predicted clean distribution.
  const DenoiserProbs p = probs_fn(result.graph, config.t_min);
  ++result.denoiser_calls;
  const int n = result.graph.n();
  AttributedGraph decoded(n, stats.a, stats.b);
  for (int i = 0; i < n; ++i) decoded.node_labels[i] = argmax_row(p.node, i);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int label = argmax_row(p.edge, pair_index(n, i, j));
      if (label != 0) decoded.set_edge(i, j, label);
    }
  }
  result.graph = std::move(decoded);
  return result;
}

SampleResult sample_graph_with(const ProbFn& probs_fn, const DatasetStats& stats,
                               const NoiseSchedule& schedule,
                               const SampleRunConfig& config, Rng& rng) {
  const int n = sample_size_from_histogram(stats.size_histogram, rng);
  std::vector<Rng> node_streams, pair_streams;
  make_dimension_streams(rng.next_u64(), n, node_streams, pair_streams);
  const AttributedGraph g1 = prior_sample_with_streams(
      n, stats.a, stats.b, stats.marginals, node_streams, pair_streams);
  return sample_graph_from(g1, probs_fn, stats, schedule, config, node_streams,
                           pair_streams);
}

SampleResult sample_graph(const DenoiserParams& params,
                          const DatasetStats& stats,
                          const NoiseSchedule& schedule,
                          const SampleRunConfig& config,
                          const std::optional<Vector>& y, Rng& rng) {
  return sample_graph_with(make_denoiser_prob_fn(params, y, config.guidance_s),
                           stats, schedule, config, rng);
}

}  // namespace cometh
