#ifndef COMETH_CTMC_HPP_
#define COMETH_CTMC_HPP_

#include <vector>

#include "cometh/graph.hpp"
#include "cometh/rng.hpp"
#include "cometh/schedule.hpp"

namespace cometh {

/**
 * Marginal base rate matrix R_b = 1 m' - I: off-diagonal rate into state j
 * equals m[j], rows sum to zero. The time-dependent forward generator is
 * beta(t) * R_b.
 */
struct BaseRateMatrix {
  Vector m;
  Matrix r;

  static BaseRateMatrix from_marginal(const Vector& m);
  int size() const { return static_cast<int>(m.size()); }
  void validate() const;
};

/**
 * Row-stochastic forward transition matrix with the row = source-state
 * convention: q(i, j) = P(z_t = j | z_0 = i).
 */
struct TransitionMatrix {
  Matrix q;

  int size() const { return static_cast<int>(q.rows()); }
  const Real& operator()(int from, int to) const { return q(from, to); }
  void validate() const;
};

/// Closed form Q(t) = e^{-bbar} I + (1 - e^{-bbar}) 1 m'.
TransitionMatrix transition_closed_form(const Vector& m, Real bbar);

/// Matrix exponential exp(bbar * R_b) by scaling-and-squaring with a
/// truncated Taylor series; test oracle for the closed form.
TransitionMatrix transition_expm_oracle(const Vector& m, Real bbar);

/**
 * Forward-noises a graph to time t: each node label is resampled from row
 * Q_X[x_i], each edge label on i < j from row Q_E[e_ij] and mirrored.
 * Randomness is drawn from one stream per dimension so that noising
 * commutes with node permutations under matching stream permutations.
 */
AttributedGraph noise_graph(const AttributedGraph& g, Real t,
                            const NoiseSchedule& schedule,
                            const MarginalPair& marginals, Rng& rng);

AttributedGraph noise_graph_with_streams(const AttributedGraph& g, Real t,
                                         const NoiseSchedule& schedule,
                                         const MarginalPair& marginals,
                                         std::vector<Rng>& node_streams,
                                         std::vector<Rng>& pair_streams);

/**
 * Exact event-driven simulation of the single-dimension forward CTMC with
 * rate beta(s) * R_b, run to the given horizon. The time-inhomogeneous
 * chain is simulated as the homogeneous chain in transformed time
 * u = beta_bar(s), which shares the generator's eigenstructure across s.
 */
int gillespie_forward(int z0, const NoiseSchedule& schedule, const Vector& m,
                      Real horizon, Rng& rng);

/// Samples from the factorized prior: nodes i.i.d. m_X, pairs i.i.d. m_E.
AttributedGraph prior_sample(int n, int a, int b, const MarginalPair& marginals,
                             Rng& rng);

AttributedGraph prior_sample_with_streams(int n, int a, int b,
                                          const MarginalPair& marginals,
                                          std::vector<Rng>& node_streams,
                                          std::vector<Rng>& pair_streams);

/// Index of the unordered pair (i, j), i < j, in lexicographic order.
inline int pair_index(int n, int i, int j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}
inline int num_pairs(int n) { return n * (n - 1) / 2; }

/// Per-dimension streams for a graph with n nodes, derived from a seed.
void make_dimension_streams(std::uint64_t seed, int n,
                            std::vector<Rng>& node_streams,
                            std::vector<Rng>& pair_streams);

}  // namespace cometh

#endif  // COMETH_CTMC_HPP_
