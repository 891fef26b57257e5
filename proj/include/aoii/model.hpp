#pragma once

#include <cstdint>

namespace aoii {

/// Parameters of a symmetric N-state Markov source observed over an i.i.d.
/// erasure channel.
///
/// The source keeps its value with probability p_remain and jumps to each of
/// the other N-1 values with probability p_transition, so
/// p_remain + (N-1) p_transition = 1. Only (N, p_remain, p_success) are
/// accepted; p_transition is derived.
///
/// Two growth probabilities of the incorrect-information chain are cached:
///   growth_transmit() = p_R p_f + (N-2) p_t + p_s p_t   (written `a`)
///   growth_idle()     = p_R + (N-2) p_t = 1 - p_t       (written `b`)
/// Their complements are stored directly rather than formed as 1 - a, 1 - b,
/// which matters when the source is slow (p_t close to 0).
class SystemParams {
 public:
  /// Throws InvalidArgument unless N >= 2, 0 < p_remain < 1 and
  /// 0 <= p_success <= 1.
  SystemParams(int num_states, double p_remain, double p_success);

  int num_states() const noexcept { return num_states_; }
  double p_remain() const noexcept { return p_remain_; }
  double p_transition() const noexcept { return p_transition_; }
  double p_success() const noexcept { return p_success_; }
  double p_failure() const noexcept { return 1.0 - p_success_; }

  /// (N-1) p_t: probability that a correct monitor becomes incorrect.
  double change_rate() const noexcept { return 1.0 - p_remain_; }

  double growth_transmit() const noexcept { return growth_transmit_; }
  double growth_idle() const noexcept { return growth_idle_; }
  /// 1 - growth_transmit() = p_R p_s + p_f p_t.
  double reset_transmit() const noexcept { return reset_transmit_; }
  /// 1 - growth_idle() = p_t.
  double reset_idle() const noexcept { return p_transition_; }

  /// True when updates can reduce the penalty at all (p_t < p_R).
  bool updates_help() const noexcept { return p_transition_ < p_remain_; }

 private:
  int num_states_;
  double p_remain_;
  double p_transition_;
  double p_success_;
  double growth_transmit_;
  double growth_idle_;
  double reset_transmit_;
};

/// Penalty processes of one monitor at a slot boundary.
struct PenaltyState {
  std::uint64_t aoii = 0;  // slots since the monitor was last correct, 0 while correct
  std::uint64_t aoi = 0;   // slots since generation of the freshest delivered sample

  bool in_error() const noexcept { return aoii > 0; }
};

/// One-step law of the AoII: either back to 0 or one step up.
struct TransitionDistribution {
  double p_reset;
  double p_grow;
};

/// Transition law of S(t+1) given S(t) = s and the transmit decision.
TransitionDistribution aoii_kernel(const SystemParams& params, std::uint64_t s, bool transmit) noexcept;

/// Samples aoii_kernel with a caller-supplied uniform draw u in [0, 1):
/// returns 0 when u < p_reset, s + 1 otherwise.
std::uint64_t step_aoii(const SystemParams& params, std::uint64_t s, bool transmit, double u) noexcept;

/// AoI update. A sample generated at slot t and delivered within the slot is
/// one slot old at t+1, so a successful delivery resets the age to 1.
std::uint64_t step_aoi(const SystemParams& params, std::uint64_t delta, bool transmit,
                       bool channel_success) noexcept;

}  // namespace aoii
