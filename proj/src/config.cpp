#include "aoii/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "aoii/errors.hpp"

namespace aoii::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Keys whose values carry a unit; the unit is optional but must match.
const std::map<std::string, std::string>& units() {
  static const std::map<std::string, std::string> u{{"horizon", "slots"}, {"burn_in", "slots"}};
  return u;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw InvalidArgument("bad value for " + key + ": '" + text + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"N", "alpha", "burn_in", "format", "horizon", "mixture_rule",
                                             "out", "p_remain", "p_success", "policy", "rho", "seed",
                                             "sweep_alpha", "sweep_p_remain", "threads", "threshold", "which"};
  return keys;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_number<double>("list", trim(item)));
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

ConfigEntries parse_config_text(const std::string& text) {
  const std::set<std::string> allowed(known_keys().begin(), known_keys().end());
  ConfigEntries entries;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno);
    if (eq == std::string::npos) throw InvalidArgument(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!allowed.count(key)) throw InvalidArgument(where + ": unknown key '" + key + "'");
    if (entries.count(key)) throw InvalidArgument(where + ": duplicate key '" + key + "'");
    if (value.empty()) throw InvalidArgument(where + ": missing value for '" + key + "'");

    const auto space = value.find_first_of(" \t");
    if (space != std::string::npos && key != "sweep_alpha" && key != "sweep_p_remain") {
      const std::string unit = trim(value.substr(space));
      const auto u = units().find(key);
      if (u == units().end()) {
        throw InvalidArgument(where + ": '" + key + "' takes no unit, got '" + unit + "'");
      }
      if (unit != u->second) {
        throw InvalidArgument(where + ": unit for '" + key + "' must be " + u->second + ", got '" + unit + "'");
      }
      value = trim(value.substr(0, space));
    }
    entries.emplace(key, value);
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_entries(const ConfigEntries& entries, ExperimentConfig& cfg) {
  for (const auto& [key, value] : entries) {
    if (key == "N") {
      cfg.num_states = parse_number<int>(key, value);
    } else if (key == "p_remain") {
      cfg.p_remain = parse_number<double>(key, value);
    } else if (key == "p_success") {
      cfg.p_success = parse_number<double>(key, value);
    } else if (key == "alpha") {
      cfg.alpha = parse_number<double>(key, value);
    } else if (key == "horizon") {
      cfg.horizon = parse_number<std::uint64_t>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "burn_in") {
      cfg.burn_in = parse_number<std::uint64_t>(key, value);
    } else if (key == "policy") {
      cfg.policy = value;
    } else if (key == "threshold") {
      cfg.threshold = parse_number<std::uint64_t>(key, value);
    } else if (key == "rho") {
      cfg.rho = parse_number<double>(key, value);
    } else if (key == "mixture_rule") {
      cfg.mixture_rule = value;
    } else if (key == "sweep_p_remain") {
      cfg.sweep_p_remain = parse_number_list(value);
    } else if (key == "sweep_alpha") {
      cfg.sweep_alpha = parse_number_list(value);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "format") {
      if (value == "csv") {
        cfg.format = OutputFormat::kCsv;
      } else if (value == "json") {
        cfg.format = OutputFormat::kJson;
      } else {
        throw InvalidArgument("format must be csv or json, got '" + value + "'");
      }
    } else if (key == "which") {
      cfg.which = value;
    } else if (key == "threads") {
      cfg.threads = parse_number<std::size_t>(key, value);
    } else {
      throw InvalidArgument("unknown key '" + key + "'");
    }
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "N=" << num_states << '\n'
     << "alpha=" << format_double(alpha) << '\n'
     << "burn_in=" << burn_in << '\n'
     << "format=" << (format == OutputFormat::kCsv ? "csv" : "json") << '\n'
     << "horizon=" << horizon << '\n'
     << "mixture_rule=" << mixture_rule << '\n'
     << "p_remain=" << (p_remain ? format_double(*p_remain) : "default") << '\n'
     << "p_success=" << format_double(p_success) << '\n'
     << "policy=" << policy << '\n'
     << "rho=" << format_double(rho) << '\n'
     << "seed=" << seed << '\n'
     << "sweep_alpha=" << join(sweep_alpha) << '\n'
     << "sweep_p_remain=" << join(sweep_p_remain) << '\n'
     << "threshold=" << threshold << '\n'
     << "which=" << which << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace aoii::cli
