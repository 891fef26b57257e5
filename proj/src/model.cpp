#include "aoii/model.hpp"

#include <cmath>
#include <string>

#include "aoii/errors.hpp"

namespace aoii {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

SystemParams::SystemParams(int num_states, double p_remain, double p_success)
    : num_states_(num_states), p_remain_(p_remain), p_success_(p_success) {
  if (num_states < 2) {
    throw InvalidArgument("num_states must be >= 2, got " + std::to_string(num_states));
  }
  if (!std::isfinite(p_remain) || p_remain <= 0.0 || p_remain >= 1.0) {
    throw InvalidArgument("p_remain must lie in (0, 1), got " + std::to_string(p_remain));
  }
  if (!is_probability(p_success)) {
    throw InvalidArgument("p_success must lie in [0, 1], got " + std::to_string(p_success));
  }
  const double others = static_cast<double>(num_states - 1);
  p_transition_ = (1.0 - p_remain) / others;
  const double p_fail = 1.0 - p_success;
  growth_idle_ = p_remain + (others - 1.0) * p_transition_;
  growth_transmit_ = p_remain * p_fail + (others - 1.0) * p_transition_ + p_success * p_transition_;
  reset_transmit_ = p_remain * p_success + p_fail * p_transition_;
}

TransitionDistribution aoii_kernel(const SystemParams& params, std::uint64_t s, bool transmit) noexcept {
  if (s == 0) {
    // A correct monitor learns nothing from an update; only the source moves.
    return {params.p_remain(), params.change_rate()};
  }
  if (transmit) {
    return {params.reset_transmit(), params.growth_transmit()};
  }
  return {params.reset_idle(), params.growth_idle()};
}

std::uint64_t step_aoii(const SystemParams& params, std::uint64_t s, bool transmit, double u) noexcept {
  return u < aoii_kernel(params, s, transmit).p_reset ? 0 : s + 1;
}

std::uint64_t step_aoi(const SystemParams& /*params*/, std::uint64_t delta, bool transmit,
                       bool channel_success) noexcept {
  return (transmit && channel_success) ? 1 : delta + 1;
}

}  // namespace aoii
