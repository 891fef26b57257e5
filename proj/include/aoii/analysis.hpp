#pragma once

#include <cstdint>

#include "aoii/model.hpp"

// Closed-form long-run behaviour of threshold transmission policies.
//
// A threshold policy with threshold n transmits whenever the AoII is at least
// n. Threshold 0 is "always update"; threshold 1 is "update while in error".
// All quantities are exact geometric-series identities; nothing here truncates
// a series.
namespace aoii::analysis {

using Threshold = std::uint64_t;

/// Average AoII of the always-update policy.
double cost_always_update(const SystemParams& params);

/// Average AoII when nothing is ever transmitted.
double cost_never_update(const SystemParams& params);

/// Stationary law pi_k(n) of the AoII chain under threshold n >= 1:
///   pi_k = (N-1) p_t b^(k-1) pi_0           for 1 <= k <= n
///   pi_k = (N-1) p_t b^(n-1) a^(k-n) pi_0   for k > n
class StationaryDistribution {
 public:
  StationaryDistribution(const SystemParams& params, Threshold threshold);

  Threshold threshold() const noexcept { return threshold_; }
  const SystemParams& params() const noexcept { return params_; }
  double pi0() const noexcept { return pi0_; }
  double pi(std::uint64_t k) const noexcept;

  /// Sum of pi_k for 1 <= k <= n and for k > n, in closed form.
  double mass_below_threshold() const noexcept;
  double mass_at_or_above_threshold() const noexcept;
  double total_mass() const noexcept;

 private:
  SystemParams params_;
  Threshold threshold_;
  double pi0_;
};

StationaryDistribution stationary(const SystemParams& params, Threshold n);

/// Average AoII of threshold n. n = 0 gives cost_always_update.
double avg_penalty(const SystemParams& params, Threshold n);

/// Long-run fraction of slots with a transmission attempt, A(n). A(0) = 1.
double active_fraction(const SystemParams& params, Threshold n);

struct PolicyCost {
  double penalty_part;   // average AoII
  double lagrange_part;  // lambda * (A(n) - alpha)
  double total;
};

/// Lagrangian cost of threshold n at multiplier lambda and budget alpha.
PolicyCost lagrange_cost(const SystemParams& params, Threshold n, double lambda, double alpha);

/// Multiplier at which thresholds n and n+1 have equal Lagrangian cost.
/// lambda(0) = 0 since thresholds 0 and 1 have the same average penalty.
/// Throws InfeasibleRegime when p_s = 0 or p_t >= p_R, or when A(n) and
/// A(n+1) are not separated in double precision.
double lambda_intersection(const SystemParams& params, Threshold n);

/// Probability of transmitting in state n0 such that the stationary policy
///   idle below n0, transmit w.p. q at n0, transmit above n0
/// has exactly the occupation measure rho * (threshold n0) + (1-rho) * (threshold n0+1).
/// Both its transmit fraction and its average AoII are then the rho-mixture
/// of the two pure thresholds.
double mixing_state_probability(const SystemParams& params, Threshold n0, double rho);

/// Stationary probability of S = 0 under threshold n (n = 0 allowed).
double idle_state_mass(const SystemParams& params, Threshold n);

}  // namespace aoii::analysis
