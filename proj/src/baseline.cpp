#include "aoii/baseline.hpp"

#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii::baseline {

namespace {

void require_channel(const SystemParams& params) {
  if (!(params.p_success() > 0.0)) throw InfeasibleRegime("channel never delivers (p_s = 0)");
}

void require_threshold(AoiThreshold m) {
  if (m < 1) throw InvalidArgument("AoI threshold must be >= 1");
}

}  // namespace

double aoi_cycle_length(const SystemParams& params, AoiThreshold m) {
  require_channel(params);
  require_threshold(m);
  return static_cast<double>(m - 1) + 1.0 / params.p_success();
}

double aoi_active_fraction(const SystemParams& params, AoiThreshold m) {
  return (1.0 / params.p_success()) / aoi_cycle_length(params, m);
}

double aoi_average_age(const SystemParams& params, AoiThreshold m) {
  // Ages within a cycle of length L are 1..L, so the reward is L (L + 1) / 2.
  // L = m - 1 + K with K ~ Geometric(p_s): Var L = (1 - p_s) / p_s^2.
  const double mean = aoi_cycle_length(params, m);
  const double ps = params.p_success();
  const double second_moment = (1.0 - ps) / (ps * ps) + mean * mean;
  return (second_moment + mean) / (2.0 * mean);
}

AoiPolicyFamily solve_aoi_constrained(const SystemParams& params, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 1], got " << alpha;
    throw InvalidArgument(os.str());
  }
  require_channel(params);

  // A_aoi(m) = 1 / (1 + (m - 1) p_s) is decreasing, so the largest m with
  // A_aoi(m) >= alpha is floor(1 + (1/alpha - 1) / p_s); rounding is repaired
  // by the two loops.
  const double ps = params.p_success();
  double guess = std::floor(1.0 + (1.0 / alpha - 1.0) / ps);
  AoiThreshold m0 = guess < 1.0 ? 1 : static_cast<AoiThreshold>(guess);
  while (m0 > 1 && aoi_active_fraction(params, m0) < alpha) --m0;
  while (aoi_active_fraction(params, m0 + 1) >= alpha) ++m0;

  AoiPolicyFamily out;
  out.alpha = alpha;
  out.m0 = m0;
  const double a_lo = aoi_active_fraction(params, m0);
  const double a_hi = aoi_active_fraction(params, m0 + 1);
  out.rho = (alpha - a_hi) / (a_lo - a_hi);
  out.expected_age = out.rho * aoi_average_age(params, m0) + (1.0 - out.rho) * aoi_average_age(params, m0 + 1);
  out.expected_power = out.rho * a_lo + (1.0 - out.rho) * a_hi;
  return out;
}

double aoi_mixing_state_probability(const SystemParams& params, AoiThreshold m0, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  if (rho == 0.0 || rho == 1.0) return rho;
  // Delta = m0 is visited exactly once per cycle under both thresholds.
  const double lower = rho / aoi_cycle_length(params, m0);
  const double upper = (1.0 - rho) / aoi_cycle_length(params, m0 + 1);
  return lower / (lower + upper);
}

}  // namespace aoii::baseline
