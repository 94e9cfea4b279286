#pragma once

// Run configuration: scenario name plus flat `key = value` overrides of the
// scenario defaults. Files use one assignment per line and `#` comments.
// Later assignments win, so loading a file and then applying flags gives
// flags > file > defaults.

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "core/experiments.hpp"
#include "core/hamiltonian.hpp"

namespace jch {

struct RunConfig {
  std::string scenario;
  std::vector<std::pair<std::string, double>> overrides;  // parameter keys only
  std::filesystem::path out_dir;
  std::size_t samples = 0;  // 0: scenario default
  double tolerance = 1e-7;

  explicit RunConfig(std::string scenario_name);

  // Accepts SystemParams field names plus `samples` and `tolerance`.
  // Unknown keys throw Error(unknown_key); unparsable or non-finite values
  // throw Error(bad_value). Both messages name the key.
  void set(const std::string& key, const std::string& value);
  // "key=value" as given on the command line.
  void set_assignment(const std::string& assignment);
  void load_file(const std::filesystem::path& path);

  void set_scenario(const std::string& name);

  SystemParams resolved() const;
  ScenarioOptions options() const;
  double get(const std::string& key) const;

  // Every resolved setting, one `key = value` line, readable by load_file.
  std::string resolved_text() const;
};

bool is_scenario(const std::string& name);
const std::vector<std::string>& config_keys();

}  // namespace jch
