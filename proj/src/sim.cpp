#include "aoii/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "aoii/analysis.hpp"
#include "aoii/baseline.hpp"
#include "aoii/errors.hpp"

namespace aoii::sim {

void PolicySpec::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("mixture weight rho must lie in [0, 1]");
  if ((kind == Kind::kAoiThreshold || kind == Kind::kAoiMixture) && threshold < 1) {
    throw InvalidArgument("AoI thresholds start at 1");
  }
}

std::string PolicySpec::tag() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kAlwaysUpdate: return "always";
    case Kind::kNeverUpdate: return "never";
    case Kind::kThreshold: os << "threshold(" << threshold << ")"; break;
    case Kind::kMixture: os << "mixture(" << threshold << "," << rho << ")"; break;
    case Kind::kAoiThreshold: os << "aoi-threshold(" << threshold << ")"; break;
    case Kind::kAoiMixture: os << "aoi-mixture(" << threshold << "," << rho << ")"; break;
  }
  return os.str();
}

void SimOptions::validate() const {
  if (batches < 2) throw InvalidArgument("at least two batches are needed for a standard error");
  if (horizon < batches) throw InvalidArgument("horizon must cover every batch");
  if (horizon < 10 * burn_in) throw InvalidArgument("horizon must be at least 10 x burn_in");
}

namespace {

// Uniform double in [0, 1) from the top 53 bits.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
  }
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Stationary decision rule; looks at the AoII or the AoI only.
class Decision {
 public:
  Decision(const SystemParams& params, const PolicySpec& spec) : spec_(spec) {
    spec.validate();
    if (spec.kind == PolicySpec::Kind::kMixture || spec.kind == PolicySpec::Kind::kAoiMixture) {
      switch (spec.rule) {
        case MixtureRule::kCalibrated:
          q_ = spec.kind == PolicySpec::Kind::kMixture
                   ? analysis::mixing_state_probability(params, spec.threshold, spec.rho)
                   : baseline::aoi_mixing_state_probability(params, spec.threshold, spec.rho);
          break;
        case MixtureRule::kRhoAtThreshold:
        case MixtureRule::kLiteral:
          q_ = spec.rho;
          break;
      }
    }
  }

  bool operator()(const PenaltyState& st, double u) const {
    switch (spec_.kind) {
      case PolicySpec::Kind::kAlwaysUpdate: return true;
      case PolicySpec::Kind::kNeverUpdate: return false;
      case PolicySpec::Kind::kThreshold: return st.aoii >= spec_.threshold;
      case PolicySpec::Kind::kAoiThreshold: return st.aoi >= spec_.threshold;
      case PolicySpec::Kind::kMixture: return mixed(st.aoii, u);
      case PolicySpec::Kind::kAoiMixture: return mixed(st.aoi, u);
    }
    return false;
  }

 private:
  bool mixed(std::uint64_t level, double u) const {
    const std::uint64_t n0 = spec_.threshold;
    if (level < n0) return false;
    if (level == n0) return u < q_;
    if (spec_.rule == MixtureRule::kLiteral && level == n0 + 1) return u < 1.0 - spec_.rho;
    return true;
  }

  PolicySpec spec_;
  double q_ = 1.0;
};

// Joint source / monitor / channel state. Every slot consumes exactly three
// uniforms (policy, channel, source) whatever the policy does, so runs with
// the same seed see the same source and channel realisations.
class System {
 public:
  System(const SystemParams& params, const PolicySpec& policy, std::uint64_t seed)
      : params_(params), decide_(params, policy), uniform_(seed) {}

  const PenaltyState& state() const { return state_; }

  TraceSlot step() {
    TraceSlot slot;
    slot.state = state_;
    const double u_policy = uniform_();
    const double u_channel = uniform_();
    const double u_source = uniform_();

    slot.transmit = decide_(state_, u_policy);
    slot.delivered = slot.transmit && u_channel < params_.p_success();

    // The delivered sample is X(t); the source then moves to X(t+1).
    const int sampled = source_;
    if (!(u_source < params_.p_remain())) {
      const int others = params_.num_states() - 1;
      int j = static_cast<int>((u_source - params_.p_remain()) / params_.p_transition());
      j = std::clamp(j, 0, others - 1);
      source_ = j < source_ ? j : j + 1;
    }
    if (slot.delivered) estimate_ = sampled;

    state_.aoii = estimate_ == source_ ? 0 : state_.aoii + 1;
    state_.aoi = step_aoi(params_, state_.aoi, slot.transmit, slot.delivered);
    return slot;
  }

 private:
  SystemParams params_;
  Decision decide_;
  Uniform uniform_;
  int source_ = 0;
  int estimate_ = 0;
  PenaltyState state_{};
};

struct BatchAccumulator {
  double aoii = 0.0, aoi = 0.0, error = 0.0, tx = 0.0;
  std::uint64_t count = 0;
};

double batch_se(const std::vector<BatchAccumulator>& batches, double BatchAccumulator::*field, double mean) {
  const double k = static_cast<double>(batches.size());
  double ss = 0.0;
  for (const BatchAccumulator& b : batches) {
    const double d = b.*field / static_cast<double>(b.count) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (k * (k - 1.0)));
}

}  // namespace

SimMetrics run(const SystemParams& params, const PolicySpec& policy, const SimOptions& opts) {
  opts.validate();
  System system(params, policy, opts.seed);
  for (std::uint64_t t = 0; t < opts.burn_in; ++t) system.step();

  std::vector<BatchAccumulator> batches(opts.batches);
  BatchAccumulator total;
  for (std::size_t b = 0; b < opts.batches; ++b) {
    const std::uint64_t begin = opts.horizon * b / opts.batches;
    const std::uint64_t end = opts.horizon * (b + 1) / opts.batches;
    BatchAccumulator& acc = batches[b];
    for (std::uint64_t t = begin; t < end; ++t) {
      const TraceSlot slot = system.step();
      acc.aoii += static_cast<double>(slot.state.aoii);
      acc.aoi += static_cast<double>(slot.state.aoi);
      acc.error += slot.state.in_error() ? 1.0 : 0.0;
      acc.tx += slot.transmit ? 1.0 : 0.0;
    }
    acc.count = end - begin;
    total.aoii += acc.aoii;
    total.aoi += acc.aoi;
    total.error += acc.error;
    total.tx += acc.tx;
  }

  const double n = static_cast<double>(opts.horizon);
  SimMetrics m;
  m.avg_aoii = total.aoii / n;
  m.avg_aoi = total.aoi / n;
  m.error_rate = total.error / n;
  m.tx_fraction = total.tx / n;
  m.se_aoii = batch_se(batches, &BatchAccumulator::aoii, m.avg_aoii);
  m.se_aoi = batch_se(batches, &BatchAccumulator::aoi, m.avg_aoi);
  m.se_error = batch_se(batches, &BatchAccumulator::error, m.error_rate);
  m.se_tx = batch_se(batches, &BatchAccumulator::tx, m.tx_fraction);
  m.horizon = opts.horizon;
  m.burn_in = opts.burn_in;
  m.seed = opts.seed;
  return m;
}

std::vector<TraceSlot> trace(const SystemParams& params, const PolicySpec& policy, std::uint64_t slots,
                             std::uint64_t seed) {
  System system(params, policy, seed);
  std::vector<TraceSlot> out;
  out.reserve(slots);
  for (std::uint64_t t = 0; t < slots; ++t) out.push_back(system.step());
  return out;
}

std::vector<SweepRow> run_sweep(std::span<const SweepCell> cells, const SweepOptions& opts) {
  if (cells.empty()) throw InvalidArgument("sweep needs at least one cell");

  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (const SweepCell& c : cells) {
    c.policy.validate();
    rows.push_back({c, SimMetrics{}});
  }
  SimOptions base;
  base.horizon = opts.horizon;
  base.burn_in = opts.burn_in;
  base.validate();

  std::size_t workers = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
  workers = std::clamp<std::size_t>(workers, 1, cells.size());

  std::vector<std::exception_ptr> failures(cells.size());
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < cells.size(); i += workers) {
      SimOptions o = base;
      o.seed = opts.base_seed + i;
      try {
        rows[i].metrics = run(cells[i].params, cells[i].policy, o);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const std::exception_ptr& e : failures) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace aoii::sim
