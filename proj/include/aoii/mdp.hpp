#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "aoii/model.hpp"

// Relative value iteration on the AoII MDP truncated to states 0..S_max.
//
// Per-slot cost is S + lambda * psi. Growth out of S_max stays at S_max, which
// approximates the geometric tail of the countable chain.
namespace aoii::mdp {

enum class Action : std::uint8_t { kIdle = 0, kTransmit = 1 };

struct MdpConfig {
  std::size_t truncation = 500;   // S_max
  double tol = 1e-10;             // span of successive iterates, scaled by max(1, |gain|)
  std::size_t max_iters = 1'000'000;

  void validate() const;
};

struct MdpSolution {
  double gain = 0.0;                // optimal long-run average cost
  std::vector<double> value;        // relative values, value[0] == 0
  std::vector<Action> policy;       // greedy action per state
  std::vector<double> q_idle;       // Bellman right-hand side for each action
  std::vector<double> q_transmit;
  std::size_t iterations = 0;
  double final_span = 0.0;

  std::size_t truncation() const noexcept { return value.empty() ? 0 : value.size() - 1; }
};

/// Minimises the average AoII (lambda = 0).
MdpSolution solve_unconstrained(const SystemParams& params, const MdpConfig& cfg = {});

/// Minimises average AoII + lambda * transmission rate. Throws InvalidArgument
/// for negative lambda and ConvergenceError when max_iters is exhausted.
MdpSolution solve_lagrangian(const SystemParams& params, double lambda, const MdpConfig& cfg = {});

/// Smallest state whose action is transmit; std::nullopt when the policy never
/// transmits. Throws StructuralViolation when transmit is followed by idle.
std::optional<std::uint64_t> extract_threshold(const MdpSolution& sol);

/// True when the solver found no transmit state at all, i.e. the optimal
/// threshold lies at or beyond the truncation.
bool is_saturated(const MdpSolution& sol);

}  // namespace aoii::mdp
