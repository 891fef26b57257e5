#include "aoii/validate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aoii/analysis.hpp"
#include "aoii/mdp.hpp"
#include "aoii/optimizer.hpp"

namespace aoii::validate {

namespace {

std::string describe(const SystemParams& p) {
  std::ostringstream os;
  os << "N=" << p.num_states() << " p_R=" << p.p_remain() << " p_s=" << p.p_success();
  return os.str();
}

class Property {
 public:
  explicit Property(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = what;
    }
  }

  PropertyResult done() && { return std::move(result_); }

 private:
  PropertyResult result_;
};

// Enough states that the tail beyond the truncation, which decays like
// a^(k-n), carries less than 1e-13.
std::size_t chain_size(const SystemParams& params, std::size_t n) {
  const double a = params.growth_transmit();
  return n + 8 + static_cast<std::size_t>(std::ceil(std::log(1e-13) / std::log(a)));
}

bool relative_close(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::vector<SystemParams> default_grid() {
  std::vector<SystemParams> grid;
  for (int n : {2, 4, 8}) {
    for (double pr : {0.2, 0.4, 0.6, 0.8, 0.95}) {
      for (double ps : {0.3, 0.8, 1.0}) grid.emplace_back(n, pr, ps);
    }
  }
  return grid;
}

std::vector<double> truncated_chain_stationary(const SystemParams& params, std::size_t n, std::size_t size,
                                               bool inject_kernel_fault) {
  const Eigen::Index m = static_cast<Eigen::Index>(size);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  const double pr = params.p_remain();
  const double pt = params.p_transition();
  const double ps = params.p_success();
  const double pf = 1.0 - ps;
  for (Eigen::Index s = 0; s < m; ++s) {
    const Eigen::Index up = std::min<Eigen::Index>(s + 1, m - 1);
    double reset = 0.0;
    if (s == 0) {
      reset = pr;
    } else if (static_cast<std::size_t>(s) >= n) {
      reset = inject_kernel_fault ? pr * ps - pf * pt : pr * ps + pf * pt;
    } else {
      reset = pt;
    }
    p(s, 0) += reset;
    p(s, up) += 1.0 - reset;
  }
  // pi (P - I) = 0 with the last balance equation replaced by sum(pi) = 1.
  Eigen::MatrixXd lhs = p.transpose() - Eigen::MatrixXd::Identity(m, m);
  lhs.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;
  const Eigen::VectorXd pi = lhs.partialPivLu().solve(rhs);
  return {pi.data(), pi.data() + pi.size()};
}

std::vector<PropertyResult> run_suite(const ValidateOptions& opts) {
  const std::vector<SystemParams> grid = opts.grid.empty() ? default_grid() : opts.grid;
  const std::size_t max_n = std::max<std::size_t>(opts.max_threshold, 2);
  std::vector<PropertyResult> out;

  {
    Property prop("kernel-normalised");
    for (const SystemParams& p : grid) {
      for (std::uint64_t s : {0u, 1u, 7u}) {
        for (bool tx : {false, true}) {
          const TransitionDistribution k = aoii_kernel(p, s, tx);
          const bool ok = k.p_reset >= 0.0 && k.p_reset <= 1.0 && k.p_grow >= 0.0 && k.p_grow <= 1.0 &&
                          std::abs(k.p_reset + k.p_grow - 1.0) <= 1e-12;
          prop.check(ok, describe(p) + " s=" + std::to_string(s));
        }
      }
      const double gain = aoii_kernel(p, 1, true).p_reset - aoii_kernel(p, 1, false).p_reset;
      prop.check((gain > 0.0) == (p.p_remain() > p.p_transition()), describe(p) + " transmit dominance sign");
    }
    out.push_back(std::move(prop).done());
  }

  {
    Property stat("stationary-vs-linear-solve");
    Property sums("series-sums");
    for (const SystemParams& p : grid) {
      for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5}, max_n / 2, max_n}) {
        const std::size_t size = chain_size(p, n);
        const std::vector<double> brute = truncated_chain_stationary(p, n, size, opts.inject_kernel_fault);
        const analysis::StationaryDistribution closed = analysis::stationary(p, n);
        double err = 0.0, mean = 0.0, active = 0.0;
        for (std::size_t k = 0; k < size; ++k) {
          err = std::max(err, std::abs(brute[k] - closed.pi(k)));
          mean += static_cast<double>(k) * closed.pi(k);
          if (k >= n) active += closed.pi(k);
        }
        stat.check(err <= 1e-9, describe(p) + " n=" + std::to_string(n) + " Linf=" + fmt(err));
        sums.check(relative_close(mean, analysis::avg_penalty(p, n), 1e-9),
                   describe(p) + " n=" + std::to_string(n) + " mean " + fmt(mean));
        sums.check(relative_close(active, analysis::active_fraction(p, n), 1e-9),
                   describe(p) + " n=" + std::to_string(n) + " active " + fmt(active));
      }
    }
    out.push_back(std::move(stat).done());
    out.push_back(std::move(sums).done());
  }

  {
    Property prop("monotone-sequences");
    for (const SystemParams& p : grid) {
      if (!p.updates_help() || !(p.p_success() > 0.0)) continue;
      for (std::size_t n = 0; n < max_n; ++n) {
        const std::string at = describe(p) + " n=" + std::to_string(n);
        const double a0 = analysis::active_fraction(p, n);
        const double a1 = analysis::active_fraction(p, n + 1);
        prop.check(a1 < a0, at + " A not strictly decreasing");
        const double c0 = analysis::avg_penalty(p, n);
        const double c1 = analysis::avg_penalty(p, n + 1);
        prop.check(c1 >= c0 * (1.0 - 1e-12), at + " C decreased");
        if (n >= 1) {
          prop.check(analysis::stationary(p, n + 1).pi0() <= analysis::stationary(p, n).pi0(),
                     at + " pi0 increased");
        }
        const double l0 = analysis::lambda_intersection(p, n);
        const double l1 = analysis::lambda_intersection(p, n + 1);
        prop.check(l1 >= l0, at + " lambda decreased");
      }
      prop.check(relative_close(analysis::avg_penalty(p, 0), analysis::avg_penalty(p, 1), 1e-12),
                 describe(p) + " C(0) != C(1)");
    }
    out.push_back(std::move(prop).done());
  }

  {
    Property prop("unconstrained-case-split");
    for (const SystemParams& p : grid) {
      const double au = analysis::cost_always_update(p);
      const double nu = analysis::cost_never_update(p);
      if (p.updates_help()) {
        prop.check(au <= nu, describe(p) + " always-update should win");
      } else {
        prop.check(nu <= au, describe(p) + " never-update should win");
      }
    }
    out.push_back(std::move(prop).done());
  }

  {
    Property gain("mdp-unconstrained-gain");
    Property thresholds("mdp-threshold-vs-argmin");
    mdp::MdpConfig cfg;
    cfg.truncation = opts.mdp_truncation;
    for (const SystemParams& p : grid) {
      const mdp::MdpSolution sol = mdp::solve_unconstrained(p, cfg);
      const double expect = std::min(analysis::cost_always_update(p), analysis::cost_never_update(p));
      gain.check(std::abs(sol.gain - expect) <= 1e-6,
                 describe(p) + " gain " + fmt(sol.gain) + " vs " + fmt(expect));

      if (!p.updates_help() || !(p.p_success() > 0.0)) continue;
      for (std::size_t n : {std::size_t{2}, std::size_t{6}}) {
        const double lambda = 0.5 * (analysis::lambda_intersection(p, n - 1) + analysis::lambda_intersection(p, n));
        const mdp::MdpSolution ls = mdp::solve_lagrangian(p, lambda, cfg);
        const auto thr = mdp::extract_threshold(ls);
        thresholds.check(thr && *thr == n, describe(p) + " lambda=" + fmt(lambda) + " expected threshold " +
                                               std::to_string(n));
      }
    }
    out.push_back(std::move(gain).done());
    out.push_back(std::move(thresholds).done());
  }

  {
    Property search("threshold-search-vs-scan");
    Property cert("optimality-certificate");
    for (const SystemParams& p : grid) {
      if (!p.updates_help() || !(p.p_success() > 0.0)) {
        const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(p, 0.1);
        cert.check(sol.regime == optimizer::Regime::kNeverTransmit &&
                       optimizer::verify_optimality(p, sol).passed(),
                   describe(p) + " never-transmit regime");
        continue;
      }
      for (double alpha : {1.0, 0.5, 0.1, 0.02}) {
        analysis::Threshold scan = 1;
        while (analysis::active_fraction(p, scan) >= alpha) ++scan;
        const optimizer::ThresholdSearch s = optimizer::find_threshold(p, alpha);
        search.check(s.n_prime == scan, describe(p) + " alpha=" + fmt(alpha));
        const optimizer::ConstrainedSolution sol = optimizer::solve_constrained(p, alpha);
        const optimizer::Certificate c = optimizer::verify_optimality(p, sol);
        cert.check(c.passed(), describe(p) + " alpha=" + fmt(alpha) + " failed " + c.first_failure());
      }
    }
    out.push_back(std::move(search).done());
    out.push_back(std::move(cert).done());
  }

  return out;
}

bool all_passed(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

}  // namespace aoii::validate
