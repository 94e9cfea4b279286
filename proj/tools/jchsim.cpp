// jchsim: command-line front end over the C API.
//
//   jchsim <scenario|all> [--config FILE] [--out DIR] [--samples N] [--tol X] [key=value ...]
//
// Exit status: 0 when every paper target passes, 1 when one fails, 2 on
// usage errors, 3 when a scenario cannot run.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jch/jch.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRunFailure = 3;

struct Settings {
  std::string config_file;
  std::string out_dir = "out";
  std::string samples;
  std::string tolerance;
  std::vector<std::string> assignments;
};

using ConfigPtr = std::unique_ptr<jch_config, decltype(&jch_config_destroy)>;
using ReportPtr = std::unique_ptr<jch_report, decltype(&jch_report_destroy)>;

struct UsageError {
  std::string message;
};

void check(jch_status s, bool usage) {
  if (s == JCH_OK) return;
  const std::string msg = std::string(jch_status_name(s)) + ": " + jch_last_error();
  if (usage) throw UsageError{msg};
  throw std::runtime_error(msg);
}

ConfigPtr make_config(const std::string& scenario, const Settings& st, const std::filesystem::path& out) {
  jch_config* raw = nullptr;
  check(jch_config_create(scenario.c_str(), &raw), true);
  ConfigPtr cfg(raw, &jch_config_destroy);
  if (!st.config_file.empty()) check(jch_config_load_file(cfg.get(), st.config_file.c_str()), true);
  for (const auto& a : st.assignments) check(jch_config_set_assignment(cfg.get(), a.c_str()), true);
  if (!st.samples.empty()) check(jch_config_set(cfg.get(), "samples", st.samples.c_str()), true);
  if (!st.tolerance.empty()) check(jch_config_set(cfg.get(), "tolerance", st.tolerance.c_str()), true);
  check(jch_config_set_output_dir(cfg.get(), out.string().c_str()), false);
  return cfg;
}

const char* provenance_name(jch_provenance p) {
  switch (p) {
    case JCH_PROVENANCE_PAPER: return "PAPER";
    case JCH_PROVENANCE_TRIVIAL: return "TRIVIAL";
    case JCH_PROVENANCE_DERIVED: return "DERIVED";
  }
  return "?";
}

// Runs one scenario and prints its targets; returns whether all paper
// targets passed.
bool run_one(const jch_config* cfg) {
  check(jch_config_write_resolved(cfg), false);
  jch_report* raw = nullptr;
  check(jch_run(cfg, &raw), false);
  ReportPtr report(raw, &jch_report_destroy);
  const std::string name = jch_report_scenario(report.get());
  for (size_t i = 0; i < jch_report_target_count(report.get()); ++i) {
    jch_target t{};
    check(jch_report_target(report.get(), i, &t), false);
    std::printf("%s %-9s %s.%s = %.10g", t.passed ? "PASS" : "FAIL", provenance_name(t.provenance), name.c_str(), t.key, t.value);
    if (t.comparison == JCH_WITHIN) std::printf("  (target %.10g +/- %.3g)\n", t.expected, t.tolerance);
    else std::printf("  (target %s %.10g)\n", t.comparison == JCH_AT_MOST ? "<=" : ">=", t.expected);
  }
  for (size_t i = 0; i < jch_report_warning_count(report.get()); ++i)
    std::fprintf(stderr, "warning [%s]: %s\n", name.c_str(), jch_report_warning(report.get(), i));
  const bool ok = jch_report_paper_pass(report.get()) != 0;
  std::printf("%s: paper targets %s\n", name.c_str(), ok ? "pass" : "FAIL");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-site Jaynes-Cummings-Hubbard simulator with a knob qubit"};
  app.require_subcommand(1);
  Settings st;

  std::vector<std::string> names;
  for (size_t i = 0; i < jch_scenario_count(); ++i) names.emplace_back(jch_scenario_name(i));
  names.emplace_back("all");

  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n, n == "all" ? "run every scenario into DIR/<scenario>/" : "run the " + n + " scenario");
    sub->add_option("--config", st.config_file, "key = value file applied over the scenario defaults")->check(CLI::ExistingFile);
    sub->add_option("--out", st.out_dir, "output directory")->capture_default_str();
    sub->add_option("--samples", st.samples, "number of time samples");
    sub->add_option("--tol", st.tolerance, "norm tolerance of the direct integrator");
    sub->add_option("overrides", st.assignments, "parameter overrides key=value (highest precedence)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::string scenario = app.get_subcommands().front()->get_name();
  try {
    bool ok = true;
    if (scenario == "all") {
      std::vector<ConfigPtr> configs;
      for (size_t i = 0; i < jch_scenario_count(); ++i) {
        const std::string n = jch_scenario_name(i);
        configs.push_back(make_config(n, st, std::filesystem::path(st.out_dir) / n));
      }
      for (const auto& c : configs) ok = run_one(c.get()) && ok;
    } else {
      ok = run_one(make_config(scenario, st, st.out_dir).get());
    }
    return ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "jchsim: " << e.message << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "jchsim: " << e.what() << '\n';
    return kExitRunFailure;
  }
}
