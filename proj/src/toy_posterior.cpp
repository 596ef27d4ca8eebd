#include "cometh/toy_posterior.hpp"

#include <cmath>

namespace cometh {

EnumeratedPosterior::EnumeratedPosterior(
    std::vector<std::pair<AttributedGraph, Real>> support,
    NoiseSchedule schedule, MarginalPair marginals)
    : support_(std::move(support)),
      schedule_(schedule),
      marginals_(std::move(marginals)) {
  if (support_.empty()) throw DataError("empty posterior support");
  Real total = 0.0;
  for (const auto& [g, w] : support_) {
    if (g.n() != support_.front().first.n())
      throw DataError("posterior support graphs must share the node count");
    if (w < 0.0) throw DataError("negative support weight");
    total += w;
  }
  for (auto& [g, w] : support_) w /= total;
}

DenoiserProbs EnumeratedPosterior::operator()(const AttributedGraph& g_t,
                                              Real t) const {
  const int n = g_t.n();
  const Real bbar = schedule_.beta_bar(t);
  const TransitionMatrix qx = transition_closed_form(marginals_.m_x, bbar);
  const TransitionMatrix qe = transition_closed_form(marginals_.m_e, bbar);

  // Posterior weight of each support graph given the noisy observation;
  // log space keeps small likelihoods well-conditioned.
  Vector logw(support_.size());
  for (std::size_t k = 0; k < support_.size(); ++k) {
    const AttributedGraph& g0 = support_[k].first;
    Real lw = std::log(std::max(support_[k].second, 1e-300));
    for (int i = 0; i < n; ++i)
      lw += std::log(std::max(qx(g0.node_labels[i], g_t.node_labels[i]),
                              1e-300));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        lw += std::log(std::max(qe(g0.edge_labels(i, j), g_t.edge_labels(i, j)),
                                1e-300));
    logw[k] = lw;
  }
  const Real m = logw.maxCoeff();
  Vector w = (logw.array() - m).exp();
  w /= w.sum();

  DenoiserProbs out;
  out.node = Matrix::Zero(n, g_t.a);
  out.edge = Matrix::Zero(num_pairs(n), g_t.b);
  for (std::size_t k = 0; k < support_.size(); ++k) {
    const AttributedGraph& g0 = support_[k].first;
    for (int i = 0; i < n; ++i) out.node(i, g0.node_labels[i]) += w[k];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out.edge(pair_index(n, i, j), g0.edge_labels(i, j)) += w[k];
  }
  return out;
}

ProbFn EnumeratedPosterior::as_prob_fn() const {
  return [self = *this](const AttributedGraph& g_t, Real t) {
    return self(g_t, t);
  };
}

Vector EnumeratedPosterior::node_marginal_at(Real t) const {
  const int a = support_.front().first.a;
  const Real bbar = schedule_.beta_bar(t);
  const TransitionMatrix qx = transition_closed_form(marginals_.m_x, bbar);
  Vector q = Vector::Zero(a);
  for (const auto& [g0, w] : support_)
    q += w * qx.q.row(g0.node_labels[0]).transpose();
  return q;
}

std::vector<std::pair<AttributedGraph, Real>> three_node_toy_support() {
  const Real class_prob[4] = {0.15, 0.2, 0.25, 0.4};
  const int class_size[4] = {1, 3, 3, 1};
  std::vector<std::pair<AttributedGraph, Real>> support;
  for (int mask = 0; mask < 8; ++mask) {
    AttributedGraph g(3, 1, 2);
    int edges = 0;
    const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
    for (int p = 0; p < 3; ++p) {
      if (mask & (1 << p)) {
        g.set_edge(pairs[p].first, pairs[p].second, 1);
        ++edges;
      }
    }
    support.emplace_back(std::move(g),
                         class_prob[edges] / class_size[edges]);
  }
  return support;
}

}  // namespace cometh
