#ifndef COMETH_SCHEDULE_HPP_
#define COMETH_SCHEDULE_HPP_

#include "cometh/types.hpp"

namespace cometh {

enum class ScheduleFamily { kCosine, kConstant };

/**
 * Noise schedules on normalized time [0, 1].
 *
 *   cosine:   beta(t) = alpha * pi/2 * sin(pi t / 2),
 *             beta_bar(t) = alpha * (1 - cos(pi t / 2))
 *   constant: beta(t) = alpha, beta_bar(t) = alpha * t
 *
 * t_min is the minimum reverse-time cutoff used by the sampler; training
 * draws t uniformly on the full interval.
 */
struct NoiseSchedule {
  ScheduleFamily family = ScheduleFamily::kCosine;
  Real alpha = 5.0;
  Real t_min = 0.01;

  void validate() const;
  Real beta(Real t) const;
  Real beta_bar(Real t) const;
};

ScheduleFamily schedule_family_from_string(const std::string& name);
std::string to_string(ScheduleFamily family);

}  // namespace cometh

#endif  // COMETH_SCHEDULE_HPP_
