#pragma once

#include <cstdint>

#include "aoii/model.hpp"

// AoI-threshold comparison policies under the same power budget.
//
// Threshold m on the AoI: idle while Delta < m, transmit while Delta >= m.
// Each delivery starts a renewal cycle at Delta = 1 consisting of m - 1 idle
// slots followed by a Geometric(p_s) number of attempts.
namespace aoii::baseline {

using AoiThreshold = std::uint64_t;

/// Expected renewal-cycle length (m - 1) + 1/p_s.
double aoi_cycle_length(const SystemParams& params, AoiThreshold m);

/// Long-run transmission fraction of AoI threshold m >= 1.
double aoi_active_fraction(const SystemParams& params, AoiThreshold m);

/// Long-run average AoI of AoI threshold m >= 1 (renewal reward).
double aoi_average_age(const SystemParams& params, AoiThreshold m);

struct AoiPolicyFamily {
  double alpha = 0.0;
  AoiThreshold m0 = 1;
  double rho = 1.0;            // weight of threshold m0
  double expected_age = 0.0;   // rho Age(m0) + (1-rho) Age(m0+1)
  double expected_power = 0.0;
};

/// Cheapest budget-feasible AoI mixture: A_aoi(m0) >= alpha > A_aoi(m0+1).
/// Throws InvalidArgument for alpha outside (0, 1], InfeasibleRegime for p_s = 0.
AoiPolicyFamily solve_aoi_constrained(const SystemParams& params, double alpha);

/// AoI analogue of analysis::mixing_state_probability: the transmit
/// probability at Delta = m0 whose occupation measure is the rho-mixture.
double aoi_mixing_state_probability(const SystemParams& params, AoiThreshold m0, double rho);

}  // namespace aoii::baseline
