// Acceptance run: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aoii/analysis.hpp"
#include "aoii/config.hpp"
#include "aoii/mdp.hpp"
#include "aoii/optimizer.hpp"
#include "aoii/recipes.hpp"
#include "aoii/sim.hpp"
#include "oracle.hpp"

using aoii::SystemParams;
namespace an = aoii::analysis;
namespace opt = aoii::optimizer;
namespace sim = aoii::sim;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) {
      passed = false;
      detail = what;
    }
  }
};

int g_failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) o.require(false, "runtime " + std::to_string(secs) + " s over " + std::to_string(budget_s));
  std::printf("%s %-28s %8.3f s  %s\n", o.passed ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
  if (!o.passed) ++g_failures;
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string describe(const SystemParams& p) {
  return "N=" + std::to_string(p.num_states()) + " p_R=" + str(p.p_remain()) + " p_s=" + str(p.p_success());
}

oracle::Raw raw(const SystemParams& p) { return {p.num_states(), p.p_remain(), p.p_success()}; }

bool rel_close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)); }

constexpr double kTableAlpha = 0.1;
const std::pair<double, std::uint64_t> kTable1[] = {{0.2, 15}, {0.4, 12}, {0.6, 10}, {0.8, 7}};

Outcome table1() {
  Outcome o;
  std::string got;
  for (const auto& [pr, n0] : kTable1) {
    const auto sol = opt::solve_constrained(SystemParams(8, pr, 0.8), kTableAlpha);
    got += std::to_string(sol.n0) + " ";
    o.require(sol.regime == opt::Regime::kMixture && sol.n0 == n0,
              "p_R=" + str(pr) + " n0=" + std::to_string(sol.n0) + " want " + std::to_string(n0));
  }
  if (o.passed) o.detail = "n0 = " + got;
  return o;
}

Outcome closed_vs_brute() {
  Outcome o;
  std::size_t pairs = 0;
  double worst_pi = 0.0, worst_rel = 0.0;
  for (int n_states : {2, 4, 8}) {
    for (double pr : {0.2, 0.5, 0.8, 0.95}) {
      for (double ps : {0.4, 1.0}) {
        const SystemParams p(n_states, pr, ps);
        for (std::uint64_t n : {1u, 4u, 12u}) {
          ++pairs;
          const std::string at = describe(p) + " n=" + std::to_string(n);
          const auto st = an::stationary(p, n);
          const Eigen::VectorXd pi =
              oracle::stationary(raw(p), oracle::chain_size(raw(p), n), oracle::threshold(n));
          double err = 0.0;
          for (Eigen::Index k = 0; k < pi.size(); ++k) err = std::max(err, std::abs(pi(k) - st.pi(k)));
          worst_pi = std::max(worst_pi, err);
          o.require(err <= 1e-9, at + " pi Linf " + str(err));

          const double a = p.growth_transmit();
          const std::uint64_t last = n + static_cast<std::uint64_t>(std::ceil(std::log(1e-18) / std::log(a))) + 50;
          double mean = 0.0, active = 0.0;
          for (std::uint64_t k = 0; k <= last; ++k) {
            mean += static_cast<double>(k) * st.pi(k);
            if (k >= n) active += st.pi(k);
          }
          const double e1 = std::abs(mean - an::avg_penalty(p, n)) / an::avg_penalty(p, n);
          const double e2 = std::abs(active - an::active_fraction(p, n)) / an::active_fraction(p, n);
          worst_rel = std::max({worst_rel, e1, e2});
          o.require(e1 <= 1e-9, at + " C rel " + str(e1));
          o.require(e2 <= 1e-9, at + " A rel " + str(e2));
        }
      }
    }
  }
  o.require(pairs >= 50, "only " + std::to_string(pairs) + " pairs");
  if (o.passed) {
    o.detail = std::to_string(pairs) + " pairs, max pi err " + str(worst_pi) + ", max series rel err " + str(worst_rel);
  }
  return o;
}

std::uint64_t argmin_threshold(const SystemParams& p, double lambda, std::uint64_t upto) {
  std::uint64_t best = 0;
  double best_cost = 0.0;
  for (std::uint64_t n = 0; n <= upto; ++n) {
    const double c = an::lagrange_cost(p, n, lambda, 1.0).total;
    if (n == 0 || c < best_cost) {
      best_cost = c;
      best = n;
    }
  }
  return best;
}

Outcome mdp_agreement() {
  Outcome o;
  aoii::mdp::MdpConfig cfg;
  cfg.truncation = 500;
  std::size_t pairs = 0;
  const SystemParams helps[] = {{8, 0.8, 0.8}, {8, 0.4, 0.8}, {4, 0.6, 0.5}, {2, 0.7, 1.0}, {5, 0.9, 0.3}, {3, 0.5, 0.9}};
  for (const auto& p : helps) {
    for (std::uint64_t n : {1u, 2u, 4u, 7u}) {
      const double lambda = 0.5 * (an::lambda_intersection(p, n - 1) + an::lambda_intersection(p, n));
      const std::string at = describe(p) + " lambda=" + str(lambda);
      const auto sol = aoii::mdp::solve_lagrangian(p, lambda, cfg);
      const auto got = aoii::mdp::extract_threshold(sol);  // throws on a non-monotone policy
      const std::uint64_t want = argmin_threshold(p, lambda, 400);
      o.require(got.has_value() && *got == want,
                at + " threshold " + (got ? std::to_string(*got) : "never") + " want " + std::to_string(want));
      ++pairs;
    }
  }
  const SystemParams unconstrained[] = {{8, 0.8, 0.8}, {2, 0.4, 0.8}, {4, 0.2, 0.5}, {3, 0.6, 1.0}, {8, 0.1, 0.9}};
  double worst = 0.0;
  for (const auto& p : unconstrained) {
    const auto sol = aoii::mdp::solve_unconstrained(p, cfg);
    const double want = p.updates_help() ? an::cost_always_update(p) : an::cost_never_update(p);
    worst = std::max(worst, std::abs(sol.gain - want));
    o.require(std::abs(sol.gain - want) <= 1e-6, describe(p) + " gain " + str(sol.gain) + " want " + str(want));
  }
  if (o.passed) o.detail = std::to_string(pairs) + " (params, lambda) pairs, max gain err " + str(worst);
  return o;
}

Outcome simulation() {
  Outcome o;
  sim::SimOptions so;
  so.horizon = 1'000'000;
  so.burn_in = 10'000;
  double worst = 0.0;
  std::uint64_t seed = 1000;
  for (const auto& [pr, n0] : kTable1) {
    const SystemParams p(8, pr, 0.8);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t n : {n0, n0 + 1}) {
      so.seed = ++seed;
      const auto m = sim::run(p, sim::PolicySpec::aoii_threshold(n), so);
      const double zc = std::abs(m.avg_aoii - an::avg_penalty(p, n)) / m.se_aoii;
      const double za = std::abs(m.tx_fraction - an::active_fraction(p, n)) / m.se_tx;
      worst = std::max({worst, zc, za});
      o.require(zc <= 4.0, describe(p) + " threshold " + std::to_string(n) + " AoII off by " + str(zc) + " SE");
      o.require(za <= 4.0, describe(p) + " threshold " + std::to_string(n) + " tx off by " + str(za) + " SE");
    }
    const auto sol = opt::solve_constrained(p, kTableAlpha);
    so.seed = ++seed;
    const auto m = sim::run(p, sim::PolicySpec::mixture(sol.n0, sol.rho), so);
    const double zc = std::abs(m.avg_aoii - sol.expected_cost) / m.se_aoii;
    const double za = std::abs(m.tx_fraction - kTableAlpha) / m.se_tx;
    worst = std::max({worst, zc, za});
    o.require(zc <= 4.0, describe(p) + " mixture AoII off by " + str(zc) + " SE");
    o.require(za <= 4.0, describe(p) + " mixture tx off by " + str(za) + " SE");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 30.0, describe(p) + " took " + str(secs) + " s");
  }
  if (o.passed) o.detail = "12 runs at T=1e6, max deviation " + str(worst) + " SE";
  return o;
}

Outcome structure() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int sets = 0;
  double worst_budget = 0.0;
  while (sets < 250) {
    const int n_states = 2 + static_cast<int>(rng() % 19);
    const double pr = 0.01 + 0.98 * u(rng);
    const double ps = 0.02 + 0.98 * u(rng);
    const SystemParams p(n_states, pr, ps);
    if (!p.updates_help()) continue;
    ++sets;
    const std::string at = describe(p);
    o.require(rel_close(an::avg_penalty(p, 0), an::avg_penalty(p, 1), 1e-12), at + " C(0) != C(1)");
    o.require(an::lambda_intersection(p, 0) == 0.0, at + " lambda(0) != 0");
    for (std::uint64_t n = 0; n < 40; ++n) {
      const std::string here = at + " n=" + std::to_string(n);
      o.require(an::active_fraction(p, n + 1) < an::active_fraction(p, n), here + " A not decreasing");
      o.require(an::avg_penalty(p, n + 1) >= an::avg_penalty(p, n) * (1.0 - 1e-12), here + " C decreasing");
      o.require(an::idle_state_mass(p, n + 1) <= an::idle_state_mass(p, n) || n == 0, here + " pi0 increasing");
      o.require(an::lambda_intersection(p, n + 1) >= an::lambda_intersection(p, n), here + " lambda decreasing");
    }
    const double lo = an::active_fraction(p, 40);
    const auto sol = opt::solve_constrained(p, lo + (1.0 - lo) * u(rng));
    const double power =
        sol.rho * an::active_fraction(p, sol.n0) + (1.0 - sol.rho) * an::active_fraction(p, sol.n0 + 1);
    worst_budget = std::max(worst_budget, std::abs(power - sol.alpha));
    o.require(std::abs(power - sol.alpha) <= 1e-12, at + " budget off by " + str(power - sol.alpha));
  }
  if (o.passed) o.detail = std::to_string(sets) + " parameter sets, max budget err " + str(worst_budget);
  return o;
}

double pooled(double a, double b) { return std::sqrt(a * a + b * b); }

Outcome figure_trends() {
  Outcome o;
  aoii::cli::ExperimentConfig cfg;
  cfg.num_states = 8;
  cfg.p_success = 0.8;
  cfg.threads = 0;

  const auto fig4 = aoii::cli::figure(cfg, "fig4");
  for (std::size_t i = 1; i < fig4.size(); ++i) {
    o.require(fig4[i].sim_mean < fig4[i - 1].sim_mean, "fig4 sim not decreasing at p_R=" + str(fig4[i].x));
    o.require(*fig4[i].closed_form < *fig4[i - 1].closed_form, "fig4 closed form not decreasing at p_R=" + str(fig4[i].x));
  }

  const auto fig5 = aoii::cli::figure(cfg, "fig5");
  const auto fig6 = aoii::cli::figure(cfg, "fig6");
  o.require(fig5.size() == fig6.size() && fig5.size() % 2 == 0, "fig5/fig6 shape");
  double first_gap = 0.0, last_gap = 0.0, last_ci = 0.0;
  double first_age_gap = 0.0, last_age_gap = 0.0, last_age_ci = 0.0;
  for (std::size_t i = 0; i + 1 < fig5.size(); i += 2) {
    const auto& opt5 = fig5[i];
    const auto& base5 = fig5[i + 1];
    const auto& opt6 = fig6[i];
    const auto& base6 = fig6[i + 1];
    const std::string at = "alpha=" + str(opt5.x);
    o.require(opt5.policy_tag == aoii::cli::kAoiiOptimalTag && base5.policy_tag == aoii::cli::kAoiBaselineTag,
              "unexpected tags");
    const double ci = 4.0 * pooled(opt5.sim_se, base5.sim_se);
    o.require(opt5.sim_mean <= base5.sim_mean + ci, at + " AoII-optimal worse in AoII");
    const double age_ci = 4.0 * pooled(opt6.sim_se, base6.sim_se);
    o.require(base6.sim_mean <= opt6.sim_mean + age_ci, at + " AoI baseline worse in AoI");
    if (i == 0) {
      first_gap = base5.sim_mean - opt5.sim_mean;
      first_age_gap = opt6.sim_mean - base6.sim_mean;
    }
    last_gap = base5.sim_mean - opt5.sim_mean;
    last_ci = ci;
    last_age_gap = opt6.sim_mean - base6.sim_mean;
    last_age_ci = age_ci;
  }
  o.require(std::abs(last_gap) < last_ci, "AoII gap at alpha=1 is " + str(last_gap) + ", CI " + str(last_ci));
  o.require(std::abs(last_age_gap) < last_age_ci, "AoI gap at alpha=1 is " + str(last_age_gap) + ", CI " + str(last_age_ci));
  o.require(std::abs(last_gap) < std::abs(first_gap), "AoII gap did not shrink");
  o.require(std::abs(last_age_gap) < std::abs(first_age_gap), "AoI gap did not shrink");
  if (o.passed) {
    o.detail = "AoII gap " + str(first_gap) + " -> " + str(last_gap) + ", AoI gap " + str(first_age_gap) + " -> " +
               str(last_age_gap);
  }
  return o;
}

Outcome complexity() {
  Outcome o;
  std::uint64_t biggest = 0;
  std::size_t checked = 0;
  for (const SystemParams& p : {SystemParams(8, 0.2, 0.8), SystemParams(8, 0.8, 0.8), SystemParams(2, 0.9, 0.5),
                                SystemParams(8, 0.99, 0.8), SystemParams(8, 0.999, 0.8), SystemParams(8, 0.9995, 0.5),
                                SystemParams(16, 0.9995, 0.5)}) {
    for (double alpha : {0.5, 0.2, 0.1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
      const auto s = opt::find_threshold(p, alpha);
      const double bound = 2.0 * std::ceil(std::log2(static_cast<double>(s.n_prime))) + 4.0;
      biggest = std::max(biggest, s.n_prime);
      ++checked;
      o.require(static_cast<double>(s.evaluations) <= bound,
                describe(p) + " alpha=" + str(alpha) + " n'=" + std::to_string(s.n_prime) + " used " +
                    std::to_string(s.evaluations) + " > " + str(bound));
    }
  }
  o.require(biggest >= 10000, "largest n' only " + std::to_string(biggest));
  if (o.passed) o.detail = std::to_string(checked) + " searches, largest n' " + std::to_string(biggest);
  return o;
}

}  // namespace

int main() {
  criterion("table1-exact", 1.0, table1);
  criterion("closed-form-vs-brute-force", 10.0, closed_vs_brute);
  criterion("mdp-oracle-agreement", 60.0, mdp_agreement);
  criterion("simulation-cross-validation", 120.0, simulation);
  criterion("structural-properties", 60.0, structure);
  criterion("figure-trends", 300.0, figure_trends);
  criterion("threshold-search-complexity", 10.0, complexity);
  std::printf("%d failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
