#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace peds {

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"quartic1d",   "map_compare",      "potential2d",
                                                 "hamiltonian", "random_projector", "memristor"};
  return names;
}

/// Flat parameter set shared by all scenarios. Fields a scenario does not use are ignored.
struct ScenarioConfig {
  std::string name = "quartic1d";
  int n = 50;
  double alpha = 0.1;
  double alpha_x = 0.1;
  double alpha_p = 0.1;
  double dt = 0.01;
  long steps = 1000;
  std::string method = "rk4";
  long record_stride = 10;
  std::uint64_t seed = 42;
  int ensemble_size = 1;
  std::string map = "noncommutative";
  std::string ordering = "standard";
  std::string output;
  bool full_state = false;

  // initial ensemble: Gaussian around (mean, mean_y) with spread sigma
  double mean = 0.0;
  double mean_y = 0.0;
  double sigma = 0.1;

  std::vector<double> coeffs = {9.85, 10.0, 2.0, -0.395};  // a1..a4
  double mass = 1.0;
  double chi = 1.0;

  // random_projector
  int k = 25;
  std::string basis = "uniform";

  // memristor
  std::string projector = "mean_field";
  std::string projector_file;  // overrides projector / basis when set
  double beta = 1.0;
  double voltage = 0.2;
};

/// Defaults of the named scenario; throws ConfigError for unknown names.
ScenarioConfig default_config(const std::string& name);

/// Assigns one key; throws ConfigError on unknown keys or malformed values.
void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Ordered key/value listing, the inverse of set_config_value.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& cfg);

/// Reads `key = value` lines. Keys before any header and under [common] or [<cfg.name>] apply;
/// other sections are skipped. `#` starts a comment.
void apply_config_stream(ScenarioConfig& cfg, std::istream& in);
void apply_config_file(ScenarioConfig& cfg, const std::string& path);

/// Checks positivity and membership constraints; throws ConfigError.
void validate_config(const ScenarioConfig& cfg);

/// `[name]` header followed by every key, readable by apply_config_stream.
void dump_config(std::ostream& out, const ScenarioConfig& cfg);

}  // namespace peds
