#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "vperc/experiments.hpp"

namespace vperc::cli {

inline constexpr const char* kArtifactVersion = "vperc-1.0.0";

/// Names accepted as `experiment`.
const std::vector<std::string>& experiment_names();

/// Every configuration key with its expected JSON type, as shown by --help.
struct KeySpec {
  std::string name;
  enum class Type { number, count, seed, string, numbers, integers } type;
  std::string help;
};
const std::vector<KeySpec>& config_keys();

/// Resolved run configuration: every key present, defaults filled in.
class RunConfig {
 public:
  /// Validates types and rejects unknown keys; the error message lists every
  /// offending key. Missing keys take their defaults.
  static RunConfig from_json(const nlohmann::json& j);

  const nlohmann::json& values() const { return values_; }
  std::string experiment() const { return values_.at("experiment").get<std::string>(); }
  double number(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::uint64_t seed() const;
  std::string string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  bool is_set(const std::string& key) const;  ///< not null

 private:
  nlohmann::json values_;
};

/// Parses one flag value for `key` ("1.5", "3", "10,20,40", "cells").
nlohmann::json parse_flag_value(const std::string& key, const std::string& text);

/// Merges layers in increasing precedence: config file, then the seed from
/// the environment (when given), then command-line flags.
nlohmann::json merge_layers(const nlohmann::json& file, const char* env_seed, const nlohmann::json& flags);

/// Threads for sample-level parallelism; 0 or 1 runs serially.
Runner pool_runner(unsigned workers);

struct Artifacts {
  nlohmann::json summary;
  std::string csv;
  std::vector<std::pair<std::string, Table>> plots;  ///< file stem, two columns
  std::vector<std::pair<std::string, std::string>> extra;  ///< file name, content
  std::vector<std::string> warnings;
};

/// Runs the configured experiment without touching the filesystem.
Artifacts execute(const RunConfig& config);

/// Writes `<experiment>.csv`, `<experiment>.json` and `<stem>.dat` plot files
/// atomically into the output directory.
std::vector<std::string> emit(const RunConfig& config, const Artifacts& artifacts);

/// execute + emit; returns 0 (completed), 2 (completed with warnings) or 1
/// (error), logging to `log`.
int run(const RunConfig& config, std::ostream& log);

}  // namespace vperc::cli
