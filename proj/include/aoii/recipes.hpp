#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aoii/config.hpp"
#include "aoii/sim.hpp"

// Experiment recipes behind `aoii table1` and `aoii figure`.
namespace aoii::cli {

struct Table1Row {
  double p_remain;
  std::optional<std::uint64_t> n0;  // empty: never-transmit regime
};

/// n0 for each p_R of the sweep (default 0.2, 0.4, 0.6, 0.8).
std::vector<Table1Row> table1(const ExperimentConfig& cfg);

inline constexpr const char* kAoiiOptimalTag = "aoii-optimal";
inline constexpr const char* kAoiBaselineTag = "aoi-baseline";

struct FigurePoint {
  double x = 0.0;
  std::optional<double> closed_form;
  double sim_mean = 0.0;
  double sim_se = 0.0;
  std::string policy_tag;
  sim::SimMetrics metrics;
};

/// fig4: AoII of the constrained optimum against p_R (default sweep 0.2..0.9).
/// fig5: AoII of the optimum and of the AoI baseline against alpha.
/// fig6: AoI of the same two policies against alpha.
/// fig5/fig6 use p_R = 0.5 unless the config sets p_remain.
std::vector<FigurePoint> figure(const ExperimentConfig& cfg, const std::string& which);

std::vector<double> default_table1_sweep();
std::vector<double> default_fig4_sweep();
std::vector<double> default_alpha_sweep();

sim::MixtureRule parse_mixture_rule(const std::string& name);

}  // namespace aoii::cli
