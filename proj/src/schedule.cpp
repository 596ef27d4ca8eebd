#include "cometh/schedule.hpp"

#include <cmath>
#include <numbers>

namespace cometh {
namespace {

void check_time(Real t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw DataError("schedule time must lie in [0, 1], got " +
                    std::to_string(t));
}

}  // namespace

void NoiseSchedule::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("schedule.alpha must be positive");
  if (!(t_min > 0.0 && t_min < 1.0))
    throw ConfigError("schedule.t_min must lie in (0, 1)");
}

Real NoiseSchedule::beta(Real t) const {
  check_time(t);
  switch (family) {
    case ScheduleFamily::kCosine:
      return alpha * std::numbers::pi / 2.0 *
             std::sin(std::numbers::pi / 2.0 * t);
    case ScheduleFamily::kConstant:
      return alpha;
  }
  throw ConfigError("unknown schedule family");
}

Real NoiseSchedule::beta_bar(Real t) const {
  check_time(t);
  switch (family) {
    case ScheduleFamily::kCosine:
      return alpha * (1.0 - std::cos(std::numbers::pi / 2.0 * t));
    case ScheduleFamily::kConstant:
      return alpha * t;
  }
  throw ConfigError("unknown schedule family");
}

ScheduleFamily schedule_family_from_string(const std::string& name) {
  if (name == "cosine") return ScheduleFamily::kCosine;
  if (name == "constant") return ScheduleFamily::kConstant;
  throw ConfigError("unknown schedule family '" + name + "'");
}

std::string to_string(ScheduleFamily family) {
  return family == ScheduleFamily::kCosine ? "cosine" : "constant";
}

}  // namespace cometh
