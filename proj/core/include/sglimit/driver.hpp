#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sglimit/algo_config.hpp"
#include "sglimit/loss_models.hpp"

namespace sglimit {

enum class Study { Simulate, Compare, RateStudy, OuVerify, Metrics, Bounds, VarAvg };

std::string study_name(Study s);
Study parse_study(const std::string& name);

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Every accepted key with its default, in manifest order.
const std::vector<ConfigKey>& config_keys();

/// `key = value` settings. Absent keys resolve to their defaults.
class ConfigMap {
 public:
  /// `#` starts a comment; blank lines are skipped; unknown or repeated keys throw ConfigError.
  static ConfigMap parse(std::istream& in, const std::string& source = "<config>");
  static ConfigMap load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  bool is_auto(const std::string& key) const { return str(key) == "auto"; }

  /// All keys in config_keys() order with resolved values.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::map<std::string, std::string> values_;
};

/// From `model_file` when set, else synthetic data from the synth keys.
GlmModel build_model(const ConfigMap& cfg);

/// AlgoConfig for the `preset` key; n is the sample size (statistical preset).
AlgoConfig build_algo(const ConfigMap& cfg, std::size_t n);

struct ExperimentConfig {
  Study study = Study::Simulate;
  ConfigMap values;
  std::string out_dir = ".";
  int threads = 1;
  std::ostream* explain = nullptr;  ///< bounds: per-term breakdown goes here when set
};

/// Runs the study and writes its artifacts plus manifest.txt into out_dir.
/// Throws ConfigError or NumericError.
void run_study(const ExperimentConfig& ec);

/// run_study with exceptions mapped to exit codes (0, 2, 3) and a one-line diagnostic on err.
int run(const ExperimentConfig& ec, std::ostream& err);

}  // namespace sglimit
