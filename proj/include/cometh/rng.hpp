#ifndef COMETH_RNG_HPP_
#define COMETH_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "cometh/types.hpp"

namespace cometh {

/**
 * Deterministic PRNG (xoshiro256++ seeded via splitmix64).
 *
 * Every stochastic operation in the project takes an explicit Rng so that
 * runs are reproducible byte-for-byte from a seed. child(id) derives an
 * independent stream from the constructing seed, independent of how many
 * draws the parent has made; per-dimension streams in the forward and
 * reverse simulators rely on this.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t seed() const { return seed_; }

  /// Independent stream keyed on (constructing seed, id).
  Rng child(std::uint64_t id) const {
    std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL + id);
    x = splitmix64(x);
    return Rng(x ^ (id * 0xbf58476d1ce4e5b9ULL));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  Real uniform01() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// Index drawn from an unnormalized nonnegative weight vector.
  int categorical(const Vector& weights) {
    const Real total = weights.sum();
    Real u = uniform01() * total;
    const int n = static_cast<int>(weights.size());
    for (int i = 0; i < n; ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return n - 1;
  }

  /// Exp(rate) waiting time.
  Real exponential(Real rate) { return -std::log1p(-uniform01()) / rate; }

  /// Poisson count with the given mean (inversion for small means,
  /// Hormann's PTRS transformed rejection for large ones).
  int poisson(Real mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(mean);
    return poisson_ptrs(mean);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  int poisson_inversion(Real mean) {
    const Real u = uniform01();
    Real p = std::exp(-mean);
    Real cdf = p;
    int k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<Real>(k);
      cdf += p;
    }
    return k;
  }

  int poisson_ptrs(Real mean) {
    const Real slam = std::sqrt(mean);
    const Real loglam = std::log(mean);
    const Real b = 0.931 + 2.53 * slam;
    const Real a = -0.059 + 0.02483 * b;
    const Real inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const Real vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
      const Real u = uniform01() - 0.5;
      const Real v = uniform01();
      const Real us = 0.5 - std::abs(u);
      const Real k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<int>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          k * loglam - mean - std::lgamma(k + 1.0)) {
        return static_cast<int>(k);
      }
    }
  }

  std::uint64_t seed_;
  std::uint64_t state_[4];
};

}  // namespace cometh

#endif  // COMETH_RNG_HPP_
