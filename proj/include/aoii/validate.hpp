#pragma once

#include <string>
#include <vector>

#include "aoii/model.hpp"

// Cross-module property suite run by `aoii validate`.
//
// Every closed form is compared with a brute-force solve of the truncated
// AoII chain, structural monotonicity claims are checked along threshold
// sequences, and the MDP and optimizer are checked against the closed forms.
namespace aoii::validate {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  std::string detail;  // first violation, if any
};

struct ValidateOptions {
  std::vector<SystemParams> grid;  // empty selects default_grid()
  std::size_t max_threshold = 40;
  std::size_t mdp_truncation = 300;
  // Flips the sign of the p_f p_t term in the brute-force chain's transmit
  // reset probability. Exists to prove the suite can fail.
  bool inject_kernel_fault = false;
};

/// N in {2, 4, 8}, p_R in {0.2, 0.4, 0.6, 0.8, 0.95}, p_s in {0.3, 0.8, 1}.
/// Includes regimes with p_t >= p_R.
std::vector<SystemParams> default_grid();

std::vector<PropertyResult> run_suite(const ValidateOptions& opts);

bool all_passed(const std::vector<PropertyResult>& results);

/// Stationary law of the AoII chain under threshold n truncated to states
/// 0..size-1 (growth from the last state stays there), by dense linear solve.
std::vector<double> truncated_chain_stationary(const SystemParams& params, std::size_t n, std::size_t size,
                                               bool inject_kernel_fault = false);

}  // namespace aoii::validate
