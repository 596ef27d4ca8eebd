#include "cometh/ctmc.hpp"

#include <cmath>

namespace cometh {
namespace {

void check_marginal(const Vector& m) {
  if (m.size() < 1) throw DataError("empty marginal");
  if (m.minCoeff() < 0.0) throw DataError("negative marginal entry");
  if (std::abs(m.sum() - 1.0) > 1e-12)
    throw DataError("marginal does not sum to 1");
}

}  // namespace

BaseRateMatrix BaseRateMatrix::from_marginal(const Vector& m) {
  check_marginal(m);
  const int s = static_cast<int>(m.size());
  BaseRateMatrix rb;
  rb.m = m;
  rb.r = Vector::Ones(s) * m.transpose() - Matrix::Identity(s, s);
  return rb;
}

void BaseRateMatrix::validate() const {
  const int s = size();
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j)
      if (i != j && r(i, j) < 0.0) throw DataError("negative off-diagonal rate");
    if (std::abs(r.row(i).sum()) > 1e-12)
      throw DataError("rate matrix row does not sum to 0");
  }
}

void TransitionMatrix::validate() const {
  if (q.minCoeff() < 0.0 || q.maxCoeff() > 1.0 + 1e-12)
    throw DataError("transition probabilities outside [0, 1]");
  for (int i = 0; i < size(); ++i)
    if (std::abs(q.row(i).sum() - 1.0) > 1e-10)
      throw DataError("transition matrix row does not sum to 1");
}

TransitionMatrix transition_closed_form(const Vector& m, Real bbar) {
  check_marginal(m);
  if (bbar < 0.0) throw DataError("cumulative noise must be nonnegative");
  const int s = static_cast<int>(m.size());
  const Real decay = std::exp(-bbar);
  TransitionMatrix out;
  out.q = decay * Matrix::Identity(s, s) +
          (1.0 - decay) * Vector::Ones(s) * m.transpose();
  return out;
}

TransitionMatrix transition_expm_oracle(const Vector& m, Real bbar) {
  check_marginal(m);
  const int s = static_cast<int>(m.size());
  Matrix a = bbar * BaseRateMatrix::from_marginal(m).r;

  // Scaling and squaring: exp(a) = exp(a / 2^k)^(2^k) with the scaled
  // exponential from a truncated Taylor series.
  int k = 0;
  Real norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2.0;
    ++k;
  }
  const Matrix scaled = a / std::pow(2.0, k);
  Matrix result = Matrix::Identity(s, s);
  Matrix term = Matrix::Identity(s, s);
  for (int i = 1; i <= 30; ++i) {
    term = (term * scaled / static_cast<Real>(i)).eval();
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < k; ++i) result = (result * result).eval();

  TransitionMatrix out;
  out.q = result;
  return out;
}

int gillespie_forward(int z0, const NoiseSchedule& schedule, const Vector& m,
                      Real horizon, Rng& rng) {
  check_marginal(m);
  if (!(horizon >= 0.0 && horizon <= 1.0))
    throw DataError("horizon must lie in [0, 1]");
  const Real u_end = schedule.beta_bar(horizon);
  int z = z0;
  Real u = 0.0;
  while (true) {
    const Real hold_rate = 1.0 - m[z];  // total outflow of R_b at z
    if (hold_rate <= 0.0) return z;     // absorbing under a point-mass marginal
    u += rng.exponential(hold_rate);
    if (u >= u_end) return z;
    // Jump: target j != z with probability m[j] / (1 - m[z]).
    Vector w = m;
    w[z] = 0.0;
    z = rng.categorical(w);
  }
}

AttributedGraph noise_graph_with_streams(const AttributedGraph& g, Real t,
                                         const NoiseSchedule& schedule,
                                         const MarginalPair& marginals,
                                         std::vector<Rng>& node_streams,
                                         std::vector<Rng>& pair_streams) {
  const int n = g.n();
  const Real bbar = schedule.beta_bar(t);
  const TransitionMatrix qx = transition_closed_form(marginals.m_x, bbar);
  const TransitionMatrix qe = transition_closed_form(marginals.m_e, bbar);

  AttributedGraph out(n, g.a, g.b);
  for (int i = 0; i < n; ++i)
    out.node_labels[i] =
        node_streams[i].categorical(qx.q.row(g.node_labels[i]).transpose());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int label = pair_streams[pair_index(n, i, j)].categorical(
          qe.q.row(g.edge_labels(i, j)).transpose());
      if (label != 0) out.set_edge(i, j, label);
    }
  }
  return out;
}

AttributedGraph noise_graph(const AttributedGraph& g, Real t,
                            const NoiseSchedule& schedule,
                            const MarginalPair& marginals, Rng& rng) {
  std::vector<Rng> node_streams, pair_streams;
  make_dimension_streams(rng.next_u64(), g.n(), node_streams, pair_streams);
  return noise_graph_with_streams(g, t, schedule, marginals, node_streams,
                                  pair_streams);
}

AttributedGraph prior_sample_with_streams(int n, int a, int b,
                                          const MarginalPair& marginals,
                                          std::vector<Rng>& node_streams,
                                          std::vector<Rng>& pair_streams) {
  if (n < 1) throw DataError("prior sample needs n >= 1");
  AttributedGraph g(n, a, b);
  for (int i = 0; i < n; ++i)
    g.node_labels[i] = node_streams[i].categorical(marginals.m_x);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int label =
          pair_streams[pair_index(n, i, j)].categorical(marginals.m_e);
      if (label != 0) g.set_edge(i, j, label);
    }
  }
  return g;
}

AttributedGraph prior_sample(int n, int a, int b, const MarginalPair& marginals,
                             Rng& rng) {
  std::vector<Rng> node_streams, pair_streams;
  make_dimension_streams(rng.next_u64(), n, node_streams, pair_streams);
  return prior_sample_with_streams(n, a, b, marginals, node_streams,
                                   pair_streams);
}

void make_dimension_streams(std::uint64_t seed, int n,
                            std::vector<Rng>& node_streams,
                            std::vector<Rng>& pair_streams) {
  const Rng base(seed);
  node_streams.clear();
  pair_streams.clear();
  node_streams.reserve(n);
  pair_streams.reserve(num_pairs(n));
  for (int i = 0; i < n; ++i) node_streams.push_back(base.child(i));
  for (int p = 0; p < num_pairs(n); ++p)
    pair_streams.push_back(base.child(1000003 + p));
}

}  // namespace cometh
