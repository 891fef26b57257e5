#include "aoii/analysis.hpp"

#include <cmath>
#include <string>

#include "aoii/errors.hpp"

namespace aoii::analysis {

namespace {

// Below this magnitude b^n is treated as 0 and the never-update limits apply.
constexpr double kPowerFloor = 1e-300;
const double kLogPowerFloor = std::log(kPowerFloor);

// Direct summation threshold for the weighted geometric sum; see weighted_sum().
constexpr Threshold kDirectSumLimit = 4096;

void require_nondegenerate(const SystemParams& params) {
  if (!(params.reset_transmit() > 0.0)) {
    throw InfeasibleRegime("growth probability under transmission is 1 (a >= 1)");
  }
  if (!(params.reset_idle() > 0.0)) {
    throw InfeasibleRegime("growth probability while idle is 1 (b >= 1)");
  }
}

// Powers of b = 1 - x evaluated as exp(m log1p(-x)), flushed to 0 below 1e-300.
class IdlePowers {
 public:
  explicit IdlePowers(const SystemParams& params)
      : x_(params.reset_idle()), log_b_(std::log1p(-params.reset_idle())) {}

  double pow(double m) const {
    const double l = m * log_b_;
    return l < kLogPowerFloor ? 0.0 : std::exp(l);
  }

  // (1 - b^n) / (1 - b) = sum_{k<n} b^k
  double geometric_sum(Threshold n) const {
    const double l = static_cast<double>(n) * log_b_;
    if (l < kLogPowerFloor) return 1.0 / x_;
    return -std::expm1(l) / x_;
  }

  // sum_{k=1}^{n} k b^(k-1) = (1 + b^n (n b - n - 1)) / (1 - b)^2.
  // The closed form cancels to second order when n (1 - b) is small, so that
  // regime is summed directly; the terms are positive.
  double weighted_sum(Threshold n) const {
    const double nd = static_cast<double>(n);
    if (n <= kDirectSumLimit && nd * x_ < 1.0) {
      const double b = 1.0 - x_;
      double acc = 0.0;
      // Horner, highest power first.
      for (Threshold k = n; k >= 1; --k) acc = acc * b + static_cast<double>(k);
      return acc;
    }
    return (geometric_sum(n) - nd * pow(nd)) / x_;
  }

 private:
  double x_;
  double log_b_;
};

// 1 + (N-1)p_t (1-b^n)/(1-b) + (N-1)p_t a b^(n-1)/(1-a): reciprocal of pi_0(n).
double normaliser(const SystemParams& params, const IdlePowers& bp, Threshold n) {
  const double c = params.change_rate();
  const double a = params.growth_transmit();
  const double one_minus_a = params.reset_transmit();
  return 1.0 + c * bp.geometric_sum(n) + c * a * bp.pow(static_cast<double>(n - 1)) / one_minus_a;
}

void require_threshold(Threshold n) {
  if (n < 1) throw InvalidArgument("threshold must be >= 1");
}

}  // namespace

double cost_always_update(const SystemParams& params) {
  if (!(params.reset_transmit() > 0.0)) {
    throw InfeasibleRegime("always-update cost undefined for a >= 1");
  }
  const double c = params.change_rate();
  const double one_minus_a = params.reset_transmit();
  return c * (1.0 / (one_minus_a * one_minus_a)) / (1.0 + c / one_minus_a);
}

double cost_never_update(const SystemParams& params) {
  if (!(params.reset_idle() > 0.0)) {
    throw InfeasibleRegime("never-update cost undefined for b >= 1");
  }
  const double c = params.change_rate();
  const double one_minus_b = params.reset_idle();
  return c / (one_minus_b * one_minus_b + one_minus_b * c);
}

StationaryDistribution::StationaryDistribution(const SystemParams& params, Threshold threshold)
    : params_(params), threshold_(threshold), pi0_(0.0) {
  require_threshold(threshold);
  require_nondegenerate(params);
  pi0_ = 1.0 / normaliser(params, IdlePowers(params), threshold);
}

double StationaryDistribution::pi(std::uint64_t k) const noexcept {
  if (k == 0) return pi0_;
  const IdlePowers bp(params_);
  const double c = params_.change_rate();
  if (k <= threshold_) return c * bp.pow(static_cast<double>(k - 1)) * pi0_;
  const double a = params_.growth_transmit();
  const double tail = std::pow(a, static_cast<double>(k - threshold_));
  return c * bp.pow(static_cast<double>(threshold_ - 1)) * tail * pi0_;
}

double StationaryDistribution::mass_below_threshold() const noexcept {
  return params_.change_rate() * IdlePowers(params_).geometric_sum(threshold_) * pi0_;
}

double StationaryDistribution::mass_at_or_above_threshold() const noexcept {
  const IdlePowers bp(params_);
  const double c = params_.change_rate();
  return c * bp.pow(static_cast<double>(threshold_ - 1)) * pi0_ / params_.reset_transmit();
}

double StationaryDistribution::total_mass() const noexcept {
  // pi_n is counted in mass_below_threshold(); the tail above n sums to
  // pi_n * a / (1 - a).
  const double above = mass_at_or_above_threshold() * params_.growth_transmit();
  return pi0_ + mass_below_threshold() + above;
}

StationaryDistribution stationary(const SystemParams& params, Threshold n) {
  return StationaryDistribution(params, n);
}

double avg_penalty(const SystemParams& params, Threshold n) {
  if (n == 0) return cost_always_update(params);
  require_nondegenerate(params);
  const IdlePowers bp(params);
  const double c = params.change_rate();
  const double a = params.growth_transmit();
  const double one_minus_a = params.reset_transmit();
  const double nd = static_cast<double>(n);
  const double tail = bp.pow(nd - 1.0) * a * (nd + 1.0 / one_minus_a) / one_minus_a;
  return c * (bp.weighted_sum(n) + tail) / normaliser(params, bp, n);
}

double active_fraction(const SystemParams& params, Threshold n) {
  if (n == 0) return 1.0;
  require_nondegenerate(params);
  const IdlePowers bp(params);
  const double c = params.change_rate();
  return c * bp.pow(static_cast<double>(n - 1)) /
         (params.reset_transmit() * normaliser(params, bp, n));
}

PolicyCost lagrange_cost(const SystemParams& params, Threshold n, double lambda, double alpha) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1]");
  }
  PolicyCost out{};
  out.penalty_part = avg_penalty(params, n);
  out.lagrange_part = lambda * (active_fraction(params, n) - alpha);
  out.total = out.penalty_part + out.lagrange_part;
  return out;
}

double lambda_intersection(const SystemParams& params, Threshold n) {
  if (!(params.p_success() > 0.0)) {
    throw InfeasibleRegime("lambda(n) undefined when p_s = 0");
  }
  if (!params.updates_help()) {
    throw InfeasibleRegime("lambda(n) undefined when p_t >= p_R");
  }
  if (n == 0) return 0.0;
  const double a_n = active_fraction(params, n);
  const double a_next = active_fraction(params, n + 1);
  if (!(a_n > a_next)) {
    throw InfeasibleRegime("A(" + std::to_string(n) + ") and A(n+1) are not separated");
  }
  return (avg_penalty(params, n + 1) - avg_penalty(params, n)) / (a_n - a_next);
}

double idle_state_mass(const SystemParams& params, Threshold n) {
  if (n == 0) {
    if (!(params.reset_transmit() > 0.0)) {
      throw InfeasibleRegime("always-update chain undefined for a >= 1");
    }
    return 1.0 / (1.0 + params.change_rate() / params.reset_transmit());
  }
  return stationary(params, n).pi0();
}

double mixing_state_probability(const SystemParams& params, Threshold n0, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  if (rho == 0.0 || rho == 1.0) return rho;
  // Both thresholds share pi_k / pi_0 for k <= n0, so the mass at n0 under
  // each is proportional to its pi_0.
  const double lower = rho * idle_state_mass(params, n0);
  const double upper = (1.0 - rho) * idle_state_mass(params, n0 + 1);
  return lower / (lower + upper);
}

}  // namespace aoii::analysis
