#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aoii::cli {

enum class OutputFormat { kCsv, kJson };

/// Everything a CLI run may read. Unset optionals fall back to per-command
/// defaults (e.g. the figure recipes pick their own p_R and sweep grids).
struct ExperimentConfig {
  int num_states = 8;
  std::optional<double> p_remain;
  double p_success = 0.8;
  double alpha = 0.1;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t burn_in = 10'000;
  std::string policy = "optimal";
  std::uint64_t threshold = 0;
  double rho = 1.0;
  std::string mixture_rule = "calibrated";
  std::vector<double> sweep_p_remain;
  std::vector<double> sweep_alpha;
  std::string out;
  OutputFormat format = OutputFormat::kCsv;
  std::string which = "fig4";
  std::size_t threads = 1;

  /// Canonical key=value listing, one per line, sorted by key. Fields that
  /// cannot change results (out, threads) are left out.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Raw key -> value text (unit suffix stripped) from a config file.
using ConfigEntries = std::map<std::string, std::string>;

/// Parses the flat `key = value [unit]` format. '#' starts a comment; blank
/// lines are ignored. Unknown keys, duplicate keys, malformed lines and
/// wrong units throw InvalidArgument naming the line.
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);

/// Applies entries onto cfg. Throws InvalidArgument on unparsable values.
void apply_entries(const ConfigEntries& entries, ExperimentConfig& cfg);

/// Keys accepted in config files, in canonical order.
const std::vector<std::string>& known_keys();

std::vector<double> parse_number_list(const std::string& text);

}  // namespace aoii::cli
