#include "aoii/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "aoii/baseline.hpp"
#include "aoii/config.hpp"
#include "aoii/errors.hpp"
#include "aoii/optimizer.hpp"
#include "aoii/recipes.hpp"
#include "aoii/sim.hpp"
#include "aoii/validate.hpp"

#ifndef AOII_VERSION
#define AOII_VERSION "0.0.0"
#endif

namespace aoii::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

struct Overrides {
  std::string config_path;
  std::optional<int> num_states;
  std::optional<double> p_remain;
  std::optional<double> p_success;
  std::optional<double> alpha;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> which;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> threshold;
  std::optional<double> rho;
  std::optional<std::string> sweep_p_remain;
  std::optional<std::string> sweep_alpha;
  std::optional<std::string> mixture_rule;
  std::optional<std::size_t> threads;
  bool inject_fault = false;
};

struct Resolved {
  ExperimentConfig cfg;
  bool format_explicit = false;
};

Resolved resolve(const Overrides& o) {
  Resolved r;
  if (!o.config_path.empty()) {
    const ConfigEntries entries = read_config_file(o.config_path);
    apply_entries(entries, r.cfg);
    r.format_explicit = entries.count("format") > 0;
  }
  ExperimentConfig& c = r.cfg;
  if (o.num_states) c.num_states = *o.num_states;
  if (o.p_remain) c.p_remain = *o.p_remain;
  if (o.p_success) c.p_success = *o.p_success;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.seed) c.seed = *o.seed;
  if (o.burn_in) c.burn_in = *o.burn_in;
  if (o.out) c.out = *o.out;
  if (o.which) c.which = *o.which;
  if (o.policy) c.policy = *o.policy;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.rho) c.rho = *o.rho;
  if (o.sweep_p_remain) c.sweep_p_remain = parse_number_list(*o.sweep_p_remain);
  if (o.sweep_alpha) c.sweep_alpha = parse_number_list(*o.sweep_alpha);
  if (o.mixture_rule) c.mixture_rule = *o.mixture_rule;
  if (o.threads) c.threads = *o.threads;
  if (o.format) {
    ConfigEntries e{{"format", *o.format}};
    apply_entries(e, c);
    r.format_explicit = true;
  }
  return r;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1], got " + num(alpha));
}

SystemParams point_params(const ExperimentConfig& c) {
  if (!c.p_remain) throw InvalidArgument("p_remain is required for this command");
  return SystemParams(c.num_states, *c.p_remain, c.p_success);
}

void check_sim(const ExperimentConfig& c) {
  sim::SimOptions o;
  o.horizon = c.horizon;
  o.burn_in = c.burn_in;
  o.seed = c.seed;
  o.validate();
  parse_mixture_rule(c.mixture_rule);
}

std::string meta_line(const ExperimentConfig& c, const std::string& command) {
  return std::string("# aoii ") + version() + " config-hash=" + c.hash() + " command=" + command + "\n";
}

json meta_json(const ExperimentConfig& c, const std::string& command) {
  return json{{"tool", "aoii"}, {"version", version()}, {"config_hash", c.hash()}, {"command", command}};
}

void emit(const ExperimentConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot open output file '" + c.out + "'");
  f << text;
  if (!f) throw InvalidArgument("cannot write output file '" + c.out + "'");
}

const char* regime_name(optimizer::Regime r) {
  return r == optimizer::Regime::kMixture ? "mixture" : "never-transmit";
}

int cmd_solve(const Resolved& r, std::ostream& out, std::ostream& err) {
  const ExperimentConfig& c = r.cfg;
  const SystemParams params = point_params(c);
  check_alpha(c.alpha);

  const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(params, c.alpha);
  const optimizer::Certificate cert = optimizer::verify_optimality(params, sol);

  std::ostringstream os;
  if (r.format_explicit || !c.out.empty()) {
    if (c.format == OutputFormat::kJson) {
      json clauses = json::array();
      for (const auto& cl : cert.clauses) {
        clauses.push_back({{"name", cl.name}, {"passed", cl.passed}, {"detail", cl.detail}});
      }
      json doc{{"meta", meta_json(c, "solve")},
               {"regime", regime_name(sol.regime)},
               {"alpha", sol.alpha},
               {"n0", sol.n0},
               {"rho", sol.rho},
               {"lambda_star", sol.lambda_star},
               {"expected_cost", sol.expected_cost},
               {"expected_power", sol.expected_power},
               {"evaluations", sol.evaluations},
               {"certificate", {{"passed", cert.passed()}, {"clauses", clauses}}}};
      os << doc.dump(2) << '\n';
    } else {
      os << meta_line(c, "solve")
         << "regime,alpha,n0,rho,lambda_star,expected_cost,expected_power,evaluations,certificate\n"
         << regime_name(sol.regime) << ',' << num(sol.alpha) << ',' << sol.n0 << ',' << num(sol.rho) << ','
         << num(sol.lambda_star) << ',' << num(sol.expected_cost) << ',' << num(sol.expected_power) << ','
         << sol.evaluations << ',' << (cert.passed() ? "pass" : "fail") << '\n';
    }
    emit(c, os.str(), out);
  } else {
    os << "regime          " << regime_name(sol.regime) << '\n'
       << "n0              " << sol.n0 << '\n'
       << "rho             " << num(sol.rho) << '\n'
       << "lambda*         " << num(sol.lambda_star) << '\n'
       << "expected cost   " << num(sol.expected_cost) << '\n'
       << "expected power  " << num(sol.expected_power) << '\n'
       << "certificate     " << (cert.passed() ? "pass" : "fail") << '\n';
    out << os.str();
  }

  if (!cert.passed()) {
    err << "aoii: certificate failed at clause '" << cert.first_failure() << "'\n";
    return kExitCertification;
  }
  return kExitOk;
}

int cmd_table1(const Resolved& r, std::ostream& out) {
  const ExperimentConfig& c = r.cfg;
  check_alpha(c.alpha);
  for (double pr : c.sweep_p_remain.empty() ? default_table1_sweep() : c.sweep_p_remain) {
    SystemParams(c.num_states, pr, c.p_success);
  }
  const std::vector<Table1Row> rows = table1(c);

  std::ostringstream os;
  if (c.format == OutputFormat::kJson) {
    json jrows = json::array();
    for (const auto& row : rows) {
      json j{{"p_R", row.p_remain}};
      j["n0"] = row.n0 ? json(*row.n0) : json("never");
      jrows.push_back(j);
    }
    os << json{{"meta", meta_json(c, "table1")}, {"rows", jrows}}.dump(2) << '\n';
  } else {
    os << meta_line(c, "table1") << "p_R,n0\n";
    for (const auto& row : rows) {
      os << num(row.p_remain) << ',' << (row.n0 ? std::to_string(*row.n0) : std::string("never")) << '\n';
    }
  }
  emit(c, os.str(), out);
  return kExitOk;
}

int cmd_figure(const Resolved& r, std::ostream& out) {
  const ExperimentConfig& c = r.cfg;
  check_sim(c);
  if (c.which == "fig4") {
    check_alpha(c.alpha);
    for (double pr : c.sweep_p_remain.empty() ? default_fig4_sweep() : c.sweep_p_remain) {
      SystemParams(c.num_states, pr, c.p_success);
    }
  } else if (c.which == "fig5" || c.which == "fig6") {
    SystemParams(c.num_states, c.p_remain.value_or(0.5), c.p_success);
    for (double a : c.sweep_alpha.empty() ? default_alpha_sweep() : c.sweep_alpha) check_alpha(a);
  } else {
    throw InvalidArgument("which must be fig4, fig5 or fig6, got '" + c.which + "'");
  }

  const std::vector<FigurePoint> points = figure(c, c.which);
  std::ostringstream os;
  if (c.format == OutputFormat::kJson) {
    json jp = json::array();
    for (const auto& p : points) {
      jp.push_back({{"x", p.x},
                    {"closed_form", p.closed_form ? json(*p.closed_form) : json(nullptr)},
                    {"sim_mean", p.sim_mean},
                    {"sim_se", p.sim_se},
                    {"policy_tag", p.policy_tag},
                    {"tx_fraction", p.metrics.tx_fraction},
                    {"se_tx", p.metrics.se_tx}});
    }
    os << json{{"meta", meta_json(c, "figure")}, {"which", c.which}, {"points", jp}}.dump(2) << '\n';
  } else {
    os << meta_line(c, "figure") << "x,closed_form,sim_mean,sim_se,policy_tag\n";
    for (const auto& p : points) {
      os << num(p.x) << ',' << (p.closed_form ? num(*p.closed_form) : std::string()) << ',' << num(p.sim_mean)
         << ',' << num(p.sim_se) << ',' << p.policy_tag << '\n';
    }
  }
  emit(c, os.str(), out);
  return kExitOk;
}

sim::PolicySpec simulate_policy(const ExperimentConfig& c, const SystemParams& params) {
  const sim::MixtureRule rule = parse_mixture_rule(c.mixture_rule);
  const std::string& p = c.policy;
  if (p == "always") return sim::PolicySpec::always_update();
  if (p == "never") return sim::PolicySpec::never_update();
  if (p == "threshold") return sim::PolicySpec::aoii_threshold(c.threshold);
  if (p == "mixture") return sim::PolicySpec::mixture(c.threshold, c.rho, rule);
  if (p == "aoi-threshold") return sim::PolicySpec::aoi_threshold(c.threshold);
  if (p == "aoi-mixture") return sim::PolicySpec::aoi_mixture(c.threshold, c.rho, rule);
  if (p == "optimal") {
    check_alpha(c.alpha);
    const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(params, c.alpha);
    if (sol.regime == optimizer::Regime::kNeverTransmit) return sim::PolicySpec::never_update();
    return sim::PolicySpec::mixture(sol.n0, sol.rho, rule);
  }
  if (p == "aoi-optimal") {
    check_alpha(c.alpha);
    const baseline::AoiPolicyFamily base = baseline::solve_aoi_constrained(params, c.alpha);
    return sim::PolicySpec::aoi_mixture(base.m0, base.rho, rule);
  }
  throw InvalidArgument("policy must be always, never, threshold, mixture, aoi-threshold, aoi-mixture, optimal "
                        "or aoi-optimal, got '" + p + "'");
}

int cmd_simulate(const Resolved& r, std::ostream& out) {
  const ExperimentConfig& c = r.cfg;
  const SystemParams params = point_params(c);
  check_sim(c);
  const sim::PolicySpec policy = simulate_policy(c, params);
  policy.validate();

  sim::SimOptions o;
  o.horizon = c.horizon;
  o.burn_in = c.burn_in;
  o.seed = c.seed;
  const sim::SimMetrics m = sim::run(params, policy, o);

  std::ostringstream os;
  if (c.format == OutputFormat::kJson) {
    json doc{{"meta", meta_json(c, "simulate")}, {"policy", policy.tag()},  {"avg_aoii", m.avg_aoii},
             {"se_aoii", m.se_aoii},             {"avg_aoi", m.avg_aoi},    {"se_aoi", m.se_aoi},
             {"error_rate", m.error_rate},       {"se_error", m.se_error},  {"tx_fraction", m.tx_fraction},
             {"se_tx", m.se_tx},                 {"horizon", m.horizon},    {"burn_in", m.burn_in},
             {"seed", m.seed}};
    os << doc.dump(2) << '\n';
  } else {
    os << meta_line(c, "simulate")
       << "policy,avg_aoii,se_aoii,avg_aoi,se_aoi,error_rate,se_error,tx_fraction,se_tx,horizon,burn_in,seed\n"
       << policy.tag() << ',' << num(m.avg_aoii) << ',' << num(m.se_aoii) << ',' << num(m.avg_aoi) << ','
       << num(m.se_aoi) << ',' << num(m.error_rate) << ',' << num(m.se_error) << ',' << num(m.tx_fraction) << ','
       << num(m.se_tx) << ',' << m.horizon << ',' << m.burn_in << ',' << m.seed << '\n';
  }
  emit(c, os.str(), out);
  return kExitOk;
}

int cmd_validate(const Resolved& r, bool inject_fault, std::ostream& out, std::ostream& err) {
  validate::ValidateOptions opts;
  opts.inject_kernel_fault = inject_fault;
  const std::vector<validate::PropertyResult> results = validate::run_suite(opts);

  std::ostringstream os;
  std::string failed;
  for (const auto& p : results) {
    os << (p.passed ? "PASS " : "FAIL ") << p.name << " (" << p.checks << " checks)";
    if (!p.passed) {
      os << ": " << p.detail;
      failed += failed.empty() ? p.name : ", " + p.name;
    }
    os << '\n';
  }
  emit(r.cfg, os.str(), out);
  if (!failed.empty()) {
    err << "aoii: properties failed: " << failed << '\n';
    return kExitCertification;
  }
  return kExitOk;
}

void add_shared_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "key = value config file; flags override it");
  app.add_option("--N", o.num_states, "number of source states");
  app.add_option("--p-remain", o.p_remain, "probability the source keeps its value");
  app.add_option("--p-success", o.p_success, "channel success probability");
  app.add_option("--alpha", o.alpha, "transmission budget in (0, 1]");
  app.add_option("--horizon", o.horizon, "measured slots per simulation");
  app.add_option("--seed", o.seed, "base RNG seed");
  app.add_option("--burn-in", o.burn_in, "discarded slots before measuring");
  app.add_option("--format", o.format, "csv or json");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--which", o.which, "fig4, fig5 or fig6");
  app.add_option("--policy", o.policy,
                 "always|never|threshold|mixture|aoi-threshold|aoi-mixture|optimal|aoi-optimal");
  app.add_option("--threshold", o.threshold, "threshold (or lower threshold of a mixture)");
  app.add_option("--rho", o.rho, "weight of the lower threshold in a mixture");
  app.add_option("--sweep-p-remain", o.sweep_p_remain, "comma-separated p_R values");
  app.add_option("--sweep-alpha", o.sweep_alpha, "comma-separated alpha values");
  app.add_option("--mixture-rule", o.mixture_rule, "calibrated, rho-at-threshold or literal");
  app.add_option("--threads", o.threads, "sweep worker threads, 0 = all cores");
  app.add_flag("--inject-fault", o.inject_fault)->group("");
}

}  // namespace

const char* version() { return AOII_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Age of Incorrect Information: analysis, optimisation and simulation", "aoii"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1, 1);

  Overrides o;
  add_shared_options(app, o);
  CLI::App* solve = app.add_subcommand("solve", "optimal power-constrained policy for one parameter set");
  CLI::App* t1 = app.add_subcommand("table1", "lower threshold n0 across p_R");
  CLI::App* fig = app.add_subcommand("figure", "simulated curves with closed-form overlays");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of one policy");
  CLI::App* val = app.add_subcommand("validate", "cross-module property suite");
  for (CLI::App* sub : {solve, t1, fig, simulate, val}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "aoii: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }

  try {
    const Resolved r = resolve(o);
    if (r.cfg.threads > 256) throw InvalidArgument("threads must be at most 256");
    if (*solve) return cmd_solve(r, out, err);
    if (*t1) return cmd_table1(r, out);
    if (*fig) return cmd_figure(r, out);
    if (*simulate) return cmd_simulate(r, out);
    return cmd_validate(r, o.inject_fault, out, err);
  } catch (const InvalidArgument& e) {
    err << "aoii: invalid configuration: " << one_line(e.what()) << '\n';
    return kExitConfig;
  } catch (const InfeasibleRegime& e) {
    err << "aoii: infeasible regime: " << one_line(e.what()) << '\n';
    return kExitInfeasible;
  } catch (const StructuralViolation& e) {
    err << "aoii: structural violation: " << one_line(e.what()) << '\n';
    return kExitCertification;
  } catch (const std::exception& e) {
    err << "aoii: error: " << one_line(e.what()) << '\n';
    return kExitInternal;
  }
}

}  // namespace aoii::cli
