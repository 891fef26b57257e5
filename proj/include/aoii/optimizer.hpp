#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoii/analysis.hpp"
#include "aoii/model.hpp"

// Power-constrained AoII minimisation: minimise the average AoII subject to a
// long-run transmission fraction of at most alpha.
//
// When updates help (p_t < p_R) the optimum randomises between the adjacent
// thresholds n0 and n0 + 1 that bracket the budget, A(n0) >= alpha > A(n0+1).
// Otherwise never transmitting is optimal and the budget is irrelevant.
namespace aoii::optimizer {

using analysis::Threshold;

struct ThresholdSearch {
  Threshold n_prime = 0;        // smallest n >= 1 with A(n) < alpha
  std::size_t evaluations = 0;  // calls to A(.)
};

/// Exponential bracketing of the upper bound followed by binary search.
/// Throws InvalidArgument for alpha outside (0, 1], InfeasibleRegime when
/// p_s = 0 or p_t >= p_R.
ThresholdSearch find_threshold(const SystemParams& params, double alpha);

enum class Regime : std::uint8_t {
  kMixture,        // randomise between thresholds n0 and n0 + 1
  kNeverTransmit,  // p_t >= p_R
};

struct ConstrainedSolution {
  Regime regime = Regime::kMixture;
  double alpha = 0.0;
  Threshold n0 = 0;
  double rho = 1.0;            // weight of threshold n0
  double lambda_star = 0.0;    // multiplier at which n0 and n0+1 tie
  double expected_cost = 0.0;  // rho C(n0) + (1-rho) C(n0+1)
  double expected_power = 0.0; // rho A(n0) + (1-rho) A(n0+1)
  std::size_t evaluations = 0;
};

ConstrainedSolution solve_constrained(const SystemParams& params, double alpha);

struct Clause {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Certificate {
  std::vector<Clause> clauses;

  bool passed() const;
  /// Name of the first failed clause, empty when all pass.
  std::string first_failure() const;
};

struct CertifyOptions {
  double tol = 1e-9;
  // Scan [0, n0 + window] in the minimality clause; 0 selects 10 (n0 + 1).
  Threshold window = 0;
};

/// Checks, for a mixture solution:
///   indifference  C(n0, l*) == C(n0+1, l*)
///   minimality    C(n, l*) >= C(n0, l*) - tol over the scan window
///   bracketing    A(n0) >= alpha > A(n0+1)
///   budget        rho A(n0) + (1-rho) A(n0+1) == alpha
/// For the never-transmit regime it checks that idling beats always updating.
Certificate verify_optimality(const SystemParams& params, const ConstrainedSolution& sol,
                              const CertifyOptions& opts = {});

}  // namespace aoii::optimizer
