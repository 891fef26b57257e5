#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aoii/model.hpp"

// Slot-level Monte Carlo of the transmitter / channel / monitor loop.
//
// The source X(t), the monitor estimate X^(t) and the channel are simulated
// explicitly; the AoII is derived from X^ != X, so the reduced AoII kernel is
// checked end to end rather than assumed.
namespace aoii::sim {

/// How a two-threshold mixture is realised as a stationary policy that only
/// looks at the current state.
enum class MixtureRule : std::uint8_t {
  // Transmit w.p. q at the lower threshold and always above it, with q chosen
  // so the occupation measure is exactly the rho-mixture. Default.
  kCalibrated,
  // Same structure with q = rho. Slightly off-budget in general.
  kRhoAtThreshold,
  // Transmit w.p. rho at n0, w.p. 1 - rho at n0 + 1, always above.
  kLiteral,
};

struct PolicySpec {
  enum class Kind : std::uint8_t {
    kAlwaysUpdate,
    kNeverUpdate,
    kThreshold,     // on the AoII
    kMixture,       // on the AoII, thresholds n0 and n0 + 1
    kAoiThreshold,  // on the AoI
    kAoiMixture,    // on the AoI, thresholds m0 and m0 + 1
  };

  Kind kind = Kind::kAlwaysUpdate;
  std::uint64_t threshold = 0;
  double rho = 1.0;
  MixtureRule rule = MixtureRule::kCalibrated;

  static PolicySpec always_update() { return {Kind::kAlwaysUpdate}; }
  static PolicySpec never_update() { return {Kind::kNeverUpdate}; }
  static PolicySpec aoii_threshold(std::uint64_t n) { return {Kind::kThreshold, n}; }
  static PolicySpec mixture(std::uint64_t n0, double rho, MixtureRule rule = MixtureRule::kCalibrated) {
    return {Kind::kMixture, n0, rho, rule};
  }
  static PolicySpec aoi_threshold(std::uint64_t m) { return {Kind::kAoiThreshold, m}; }
  static PolicySpec aoi_mixture(std::uint64_t m0, double rho, MixtureRule rule = MixtureRule::kCalibrated) {
    return {Kind::kAoiMixture, m0, rho, rule};
  }

  void validate() const;
  std::string tag() const;
};

struct SimOptions {
  std::uint64_t horizon = 1'000'000;  // measured slots, after burn-in
  std::uint64_t burn_in = 10'000;
  std::uint64_t seed = 1;
  std::size_t batches = 30;

  void validate() const;
};

struct SimMetrics {
  double avg_aoii = 0.0;
  double avg_aoi = 0.0;
  double error_rate = 0.0;   // fraction of slots with AoII > 0
  double tx_fraction = 0.0;
  double se_aoii = 0.0;      // batch-means standard errors
  double se_aoi = 0.0;
  double se_error = 0.0;
  double se_tx = 0.0;
  std::uint64_t horizon = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 0;

  bool operator==(const SimMetrics&) const = default;
};

SimMetrics run(const SystemParams& params, const PolicySpec& policy, const SimOptions& opts = {});

struct TraceSlot {
  PenaltyState state;  // at the start of the slot
  bool transmit = false;
  bool delivered = false;
};

/// Slot-by-slot record of the first `slots` slots from t = 0 (no burn-in).
std::vector<TraceSlot> trace(const SystemParams& params, const PolicySpec& policy, std::uint64_t slots,
                             std::uint64_t seed);

struct SweepCell {
  std::string tag;
  double x = 0.0;
  SystemParams params;
  PolicySpec policy;
};

struct SweepRow {
  SweepCell cell;
  SimMetrics metrics;
};

struct SweepOptions {
  std::uint64_t horizon = 1'000'000;
  std::uint64_t burn_in = 10'000;
  std::uint64_t base_seed = 1;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

/// Runs every cell with seed base_seed + index. Rows come back in cell order
/// regardless of the thread count.
std::vector<SweepRow> run_sweep(std::span<const SweepCell> cells, const SweepOptions& opts);

}  // namespace aoii::sim
