#include "aoii/recipes.hpp"

#include "aoii/baseline.hpp"
#include "aoii/errors.hpp"
#include "aoii/optimizer.hpp"

namespace aoii::cli {

namespace {

constexpr double kFig56Default = 0.5;

sim::PolicySpec optimal_policy(const optimizer::ConstrainedSolution& sol, sim::MixtureRule rule) {
  if (sol.regime == optimizer::Regime::kNeverTransmit) return sim::PolicySpec::never_update();
  return sim::PolicySpec::mixture(sol.n0, sol.rho, rule);
}

sim::SweepOptions sweep_options(const ExperimentConfig& cfg) {
  sim::SweepOptions o;
  o.horizon = cfg.horizon;
  o.burn_in = cfg.burn_in;
  o.base_seed = cfg.seed;
  o.threads = cfg.threads;
  return o;
}

}  // namespace

std::vector<double> default_table1_sweep() { return {0.2, 0.4, 0.6, 0.8}; }
std::vector<double> default_fig4_sweep() { return {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }
std::vector<double> default_alpha_sweep() {
  return {0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

sim::MixtureRule parse_mixture_rule(const std::string& name) {
  if (name == "calibrated") return sim::MixtureRule::kCalibrated;
  if (name == "rho-at-threshold") return sim::MixtureRule::kRhoAtThreshold;
  if (name == "literal") return sim::MixtureRule::kLiteral;
  throw InvalidArgument("mixture_rule must be calibrated, rho-at-threshold or literal, got '" + name + "'");
}

std::vector<Table1Row> table1(const ExperimentConfig& cfg) {
  const std::vector<double> sweep = cfg.sweep_p_remain.empty() ? default_table1_sweep() : cfg.sweep_p_remain;
  std::vector<Table1Row> rows;
  for (double pr : sweep) {
    const SystemParams params(cfg.num_states, pr, cfg.p_success);
    const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(params, cfg.alpha);
    Table1Row row{pr, std::nullopt};
    if (sol.regime == optimizer::Regime::kMixture) row.n0 = sol.n0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<FigurePoint> figure(const ExperimentConfig& cfg, const std::string& which) {
  const sim::MixtureRule rule = parse_mixture_rule(cfg.mixture_rule);
  std::vector<sim::SweepCell> cells;
  std::vector<std::optional<double>> closed;

  if (which == "fig4") {
    const std::vector<double> sweep = cfg.sweep_p_remain.empty() ? default_fig4_sweep() : cfg.sweep_p_remain;
    for (double pr : sweep) {
      const SystemParams params(cfg.num_states, pr, cfg.p_success);
      const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(params, cfg.alpha);
      cells.push_back({kAoiiOptimalTag, pr, params, optimal_policy(sol, rule)});
      closed.push_back(sol.expected_cost);
    }
  } else if (which == "fig5" || which == "fig6") {
    const SystemParams params(cfg.num_states, cfg.p_remain.value_or(kFig56Default), cfg.p_success);
    const std::vector<double> sweep = cfg.sweep_alpha.empty() ? default_alpha_sweep() : cfg.sweep_alpha;
    const bool age = which == "fig6";
    for (double alpha : sweep) {
      const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(params, alpha);
      const baseline::AoiPolicyFamily base = baseline::solve_aoi_constrained(params, alpha);
      cells.push_back({kAoiiOptimalTag, alpha, params, optimal_policy(sol, rule)});
      closed.push_back(age ? std::nullopt : std::optional<double>(sol.expected_cost));
      cells.push_back({kAoiBaselineTag, alpha, params, sim::PolicySpec::aoi_mixture(base.m0, base.rho, rule)});
      closed.push_back(age ? std::optional<double>(base.expected_age) : std::nullopt);
    }
  } else {
    throw InvalidArgument("which must be fig4, fig5 or fig6, got '" + which + "'");
  }

  const std::vector<sim::SweepRow> rows = sim::run_sweep(cells, sweep_options(cfg));
  std::vector<FigurePoint> points;
  points.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const sim::SimMetrics& m = rows[i].metrics;
    FigurePoint p;
    p.x = rows[i].cell.x;
    p.closed_form = closed[i];
    p.policy_tag = rows[i].cell.tag;
    p.metrics = m;
    if (which == "fig6") {
      p.sim_mean = m.avg_aoi;
      p.sim_se = m.se_aoi;
    } else {
      p.sim_mean = m.avg_aoii;
      p.sim_se = m.se_aoii;
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace aoii::cli
