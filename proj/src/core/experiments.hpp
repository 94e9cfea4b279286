#pragma once

// Scenario runners: each one reproduces a figure or quoted number, compares
// the computed quantities with their targets and optionally writes CSV plus a
// flat summary into an output directory.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/dynamics.hpp"
#include "core/hamiltonian.hpp"
#include "core/spectra.hpp"

namespace jch {

enum class Provenance { paper, trivial, derived };
enum class Comparison { within, at_most, at_least };

const char* to_string(Provenance p);
const char* to_string(Comparison c);

struct Target {
  std::string key;
  double value = 0.0;
  double expected = 0.0;   // reference value (within) or bound (at_most / at_least)
  double tolerance = 0.0;  // only used by `within`
  Comparison comparison = Comparison::within;
  Provenance provenance = Provenance::derived;

  bool passed() const;
};

struct ScenarioReport {
  std::string scenario;
  SystemParams params;
  std::vector<Target> targets;
  std::vector<std::pair<std::string, std::string>> diagnostics;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;

  void add(Target t) { targets.push_back(std::move(t)); }
  void note(const std::string& key, double value);
  void note(const std::string& key, const std::string& value);

  const Target& target(const std::string& key) const;
  const Target* find_target(const std::string& key) const;
  bool paper_targets_pass() const;
  bool all_targets_pass() const;

  // key = value lines; every target lists value, expected, tolerance,
  // comparison, provenance and pass.
  void write_summary(std::ostream& os) const;
  // Header key,value,expected,tolerance,comparison,provenance,pass.
  void write_summary_csv(std::ostream& os) const;
};

struct ScenarioOptions {
  std::size_t samples = 0;                     // 0 selects the scenario default
  double tolerance = 1e-7;                     // norm tolerance of the direct integrator
  std::optional<std::filesystem::path> out_dir; // nothing written when empty
  bool cross_check = true;                     // phase-rabi: run the direct integrator too
};

struct ScenarioResult {
  ScenarioReport report;
  TimeSeries series;  // empty for table-only scenarios
};

inline constexpr double kKnobSwitchWindow = 100.0;
inline constexpr std::size_t kDefaultSamples = 2001;

ScenarioResult run_knob_switch(const SystemParams& p, const ScenarioOptions& opts = {});
ScenarioResult run_spectrum(const SystemParams& p, const ScenarioOptions& opts = {});
ScenarioResult run_phase_rabi(const SystemParams& p, const ScenarioOptions& opts = {});
ScenarioResult run_iswap_gate(const SystemParams& p, const ScenarioOptions& opts = {});
ScenarioResult run_dispersive_validation(const SystemParams& p, const ScenarioOptions& opts = {});

// Scenario names as used on the command line.
const std::vector<std::string>& scenario_names();
SystemParams scenario_defaults(const std::string& scenario);
ScenarioResult run_scenario(const std::string& scenario, const SystemParams& p, const ScenarioOptions& opts = {});

// Delta_c > g_c^2/kappa0 giving effective logical hopping J' =
// (kappa0 - g_c^2/Delta_c) sin^2(theta_1), with theta_1 evaluated at the
// knob-ground w' = w - g_c^2/Delta_c.
double solve_detuning_for_exchange(const SystemParams& p, double j_prime);
double logical_exchange_rate(const SystemParams& p);

// Position of the smallest sample of `values` with t in [t_lo, t_hi], refined
// by a parabola through its neighbours.
double refined_minimum_time(const std::vector<double>& t, const std::vector<double>& values, double t_lo, double t_hi);

}  // namespace jch
