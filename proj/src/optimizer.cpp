#include "aoii/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii::optimizer {

namespace {

void require_budget(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 1], got " << alpha;
    throw InvalidArgument(os.str());
  }
}

void require_useful_channel(const SystemParams& params) {
  if (!(params.p_success() > 0.0)) {
    throw InfeasibleRegime("channel never delivers (p_s = 0)");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ThresholdSearch find_threshold(const SystemParams& params, double alpha) {
  require_budget(alpha);
  require_useful_channel(params);
  if (!params.updates_help()) {
    throw InfeasibleRegime("threshold search requires p_t < p_R");
  }

  ThresholdSearch out;
  auto meets_budget = [&](Threshold n) {
    ++out.evaluations;
    return analysis::active_fraction(params, n) >= alpha;
  };

  Threshold lower = 1;
  Threshold upper = 1;
  while (meets_budget(upper)) {
    lower = upper;
    upper *= 2;
  }
  Threshold probe = (lower + upper + 1) / 2;
  while (probe < upper) {
    if (meets_budget(probe)) {
      lower = probe;
    } else {
      upper = probe;
    }
    probe = (lower + upper + 1) / 2;
  }
  out.n_prime = probe;
  return out;
}

ConstrainedSolution solve_constrained(const SystemParams& params, double alpha) {
  require_budget(alpha);
  require_useful_channel(params);

  ConstrainedSolution sol;
  sol.alpha = alpha;
  if (!params.updates_help()) {
    sol.regime = Regime::kNeverTransmit;
    sol.rho = 0.0;
    sol.expected_cost = analysis::cost_never_update(params);
    sol.expected_power = 0.0;
    return sol;
  }

  const ThresholdSearch search = find_threshold(params, alpha);
  sol.evaluations = search.evaluations;
  sol.n0 = search.n_prime - 1;

  const double a_lo = analysis::active_fraction(params, sol.n0);
  const double a_hi = analysis::active_fraction(params, sol.n0 + 1);
  sol.rho = (alpha - a_hi) / (a_lo - a_hi);
  sol.lambda_star = analysis::lambda_intersection(params, sol.n0);
  const double c_lo = analysis::avg_penalty(params, sol.n0);
  const double c_hi = analysis::avg_penalty(params, sol.n0 + 1);
  sol.expected_cost = sol.rho * c_lo + (1.0 - sol.rho) * c_hi;
  sol.expected_power = sol.rho * a_lo + (1.0 - sol.rho) * a_hi;
  return sol;
}

bool Certificate::passed() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.passed; });
}

std::string Certificate::first_failure() const {
  for (const Clause& c : clauses) {
    if (!c.passed) return c.name;
  }
  return {};
}

Certificate verify_optimality(const SystemParams& params, const ConstrainedSolution& sol,
                              const CertifyOptions& opts) {
  Certificate cert;

  if (sol.regime == Regime::kNeverTransmit) {
    const double never = analysis::cost_never_update(params);
    const double always = analysis::cost_always_update(params);
    cert.clauses.push_back({"regime", !params.updates_help(),
                            "never-transmit requires p_t >= p_R"});
    cert.clauses.push_back({"idle-optimal", never <= always + opts.tol,
                            "C_never=" + fmt(never) + " C_always=" + fmt(always)});
    return cert;
  }

  const Threshold n0 = sol.n0;
  const double lambda = sol.lambda_star;
  const double alpha = sol.alpha;

  const double at_n0 = analysis::lagrange_cost(params, n0, lambda, alpha).total;
  const double at_next = analysis::lagrange_cost(params, n0 + 1, lambda, alpha).total;
  const double scale = std::max(1.0, std::abs(at_n0));
  cert.clauses.push_back({"indifference", std::abs(at_n0 - at_next) <= opts.tol * scale,
                          "C(n0,l*)=" + fmt(at_n0) + " C(n0+1,l*)=" + fmt(at_next)});

  const Threshold window = opts.window > 0 ? opts.window : 10 * (n0 + 1);
  bool minimal = true;
  std::string worst;
  for (Threshold n = 0; n <= n0 + window; ++n) {
    const double c = analysis::lagrange_cost(params, n, lambda, alpha).total;
    if (c < at_n0 - opts.tol * scale) {
      minimal = false;
      worst = "C(" + std::to_string(n) + ",l*)=" + fmt(c) + " < C(n0,l*)=" + fmt(at_n0);
      break;
    }
  }
  cert.clauses.push_back({"minimality", minimal,
                          minimal ? "scanned [0, " + std::to_string(n0 + window) + "]" : worst});

  const double a_lo = analysis::active_fraction(params, n0);
  const double a_hi = analysis::active_fraction(params, n0 + 1);
  cert.clauses.push_back({"bracketing", a_lo >= alpha && a_hi < alpha,
                          "A(n0)=" + fmt(a_lo) + " A(n0+1)=" + fmt(a_hi) + " alpha=" + fmt(alpha)});

  const double power = sol.rho * a_lo + (1.0 - sol.rho) * a_hi;
  const bool rho_ok = sol.rho >= 0.0 && sol.rho <= 1.0;
  cert.clauses.push_back({"budget", rho_ok && std::abs(power - alpha) <= 1e-12,
                          "rho=" + fmt(sol.rho) + " power=" + fmt(power)});
  return cert;
}

}  // namespace aoii::optimizer
