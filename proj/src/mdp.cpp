#include "aoii/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aoii/errors.hpp"

namespace aoii::mdp {

void MdpConfig::validate() const {
  if (truncation < 2) throw InvalidArgument("MDP truncation must be >= 2");
  if (!(tol > 0.0)) throw InvalidArgument("MDP tolerance must be > 0");
  if (max_iters == 0) throw InvalidArgument("MDP max_iters must be > 0");
}

namespace {

struct Backup {
  double idle;
  double transmit;
};

Backup bellman(const SystemParams& params, const std::vector<double>& h, std::size_t s, double lambda) {
  const std::size_t top = h.size() - 1;
  const std::size_t next = std::min(s + 1, top);
  const double cost = static_cast<double>(s);
  const TransitionDistribution idle = aoii_kernel(params, s, false);
  const TransitionDistribution tx = aoii_kernel(params, s, true);
  return {cost + idle.p_reset * h[0] + idle.p_grow * h[next],
          cost + lambda + tx.p_reset * h[0] + tx.p_grow * h[next]};
}

MdpSolution relative_value_iteration(const SystemParams& params, double lambda, const MdpConfig& cfg) {
  cfg.validate();
  const std::size_t states = cfg.truncation + 1;
  std::vector<double> h(states, 0.0);
  std::vector<double> next(states, 0.0);

  double span = 0.0;
  double gain = 0.0;
  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
      const Backup q = bellman(params, h, s, lambda);
      next[s] = std::min(q.idle, q.transmit);
      const double d = next[s] - h[s];
      if (s == 0 || d < lo) lo = d;
      if (s == 0 || d > hi) hi = d;
    }
    span = hi - lo;
    gain = 0.5 * (hi + lo);
    const double ref = next[0];
    for (std::size_t s = 0; s < states; ++s) h[s] = next[s] - ref;

    if (span < cfg.tol * std::max(1.0, std::abs(gain))) {
      MdpSolution sol;
      sol.gain = gain;
      sol.iterations = iter;
      sol.final_span = span;
      sol.q_idle.resize(states);
      sol.q_transmit.resize(states);
      sol.policy.resize(states);
      for (std::size_t s = 0; s < states; ++s) {
        const Backup q = bellman(params, h, s, lambda);
        sol.q_idle[s] = q.idle;
        sol.q_transmit[s] = q.transmit;
        // Exact indifference resolves to idle.
        sol.policy[s] = q.transmit < q.idle ? Action::kTransmit : Action::kIdle;
      }
      sol.value = std::move(h);
      return sol;
    }
  }
  throw ConvergenceError("relative value iteration did not converge in " +
                             std::to_string(cfg.max_iters) + " iterations (span " +
                             std::to_string(span) + ")",
                         span);
}

}  // namespace

MdpSolution solve_unconstrained(const SystemParams& params, const MdpConfig& cfg) {
  return relative_value_iteration(params, 0.0, cfg);
}

MdpSolution solve_lagrangian(const SystemParams& params, double lambda, const MdpConfig& cfg) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }
  return relative_value_iteration(params, lambda, cfg);
}

std::optional<std::uint64_t> extract_threshold(const MdpSolution& sol) {
  std::optional<std::uint64_t> first;
  for (std::size_t s = 0; s < sol.policy.size(); ++s) {
    if (sol.policy[s] == Action::kTransmit) {
      if (!first) first = s;
    } else if (first) {
      throw StructuralViolation("policy transmits at S=" + std::to_string(*first) +
                                " but idles at S=" + std::to_string(s));
    }
  }
  return first;
}

bool is_saturated(const MdpSolution& sol) { return !extract_threshold(sol).has_value(); }

}  // namespace aoii::mdp
