#include "jch/jch.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "core/experiments.hpp"
#include "core/run_config.hpp"
#include "core/spectra.hpp"

struct jch_config {
  jch::RunConfig cfg;
};

struct jch_report {
  jch::ScenarioReport report;
  std::vector<std::string> files;
};

namespace {

thread_local std::string last_error;

jch_status status_of(jch::ErrorKind k) {
  switch (k) {
    case jch::ErrorKind::invalid_argument: return JCH_ERR_INVALID_ARGUMENT;
    case jch::ErrorKind::dimension_mismatch: return JCH_ERR_DIMENSION_MISMATCH;
    case jch::ErrorKind::numerical: return JCH_ERR_NUMERICAL;
    case jch::ErrorKind::io: return JCH_ERR_IO;
    case jch::ErrorKind::unknown_key: return JCH_ERR_UNKNOWN_KEY;
    case jch::ErrorKind::bad_value: return JCH_ERR_BAD_VALUE;
  }
  return JCH_ERR_INTERNAL;
}

jch_status fail(jch_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <typename F>
jch_status guard(F&& f) {
  try {
    f();
    return JCH_OK;
  } catch (const jch::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(JCH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(JCH_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(JCH_ERR_INTERNAL, "unknown failure");
  }
}

jch_status null_arg(const char* what) { return fail(JCH_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL"); }

jch_status copy_out(const std::string& text, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size();
  if (buf && capacity > 0) {
    const size_t n = std::min(capacity - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return JCH_OK;
}

void fill(const jch::Target& t, jch_target* out) {
  out->key = t.key.c_str();
  out->value = t.value;
  out->expected = t.expected;
  out->tolerance = t.tolerance;
  out->comparison = static_cast<jch_comparison>(t.comparison);
  out->provenance = static_cast<jch_provenance>(t.provenance);
  out->passed = t.passed() ? 1 : 0;
}

}  // namespace

extern "C" {

const char* jch_version(void) { return "0.1.0"; }

const char* jch_last_error(void) { return last_error.c_str(); }

const char* jch_status_name(jch_status status) {
  switch (status) {
    case JCH_OK: return "ok";
    case JCH_ERR_INVALID_ARGUMENT: return "invalid argument";
    case JCH_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case JCH_ERR_NUMERICAL: return "numerical failure";
    case JCH_ERR_IO: return "i/o error";
    case JCH_ERR_UNKNOWN_KEY: return "unknown key";
    case JCH_ERR_BAD_VALUE: return "bad value";
    case JCH_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

size_t jch_scenario_count(void) { return jch::scenario_names().size(); }

const char* jch_scenario_name(size_t index) {
  const auto& n = jch::scenario_names();
  return index < n.size() ? n[index].c_str() : nullptr;
}

jch_status jch_config_create(const char* scenario, jch_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!scenario) return null_arg("scenario");
  return guard([&] { *out = new jch_config{jch::RunConfig(scenario)}; });
}

void jch_config_destroy(jch_config* config) { delete config; }

jch_status jch_config_set_scenario(jch_config* config, const char* scenario) {
  if (!config) return null_arg("config");
  if (!scenario) return null_arg("scenario");
  return guard([&] { config->cfg.set_scenario(scenario); });
}

jch_status jch_config_load_file(jch_config* config, const char* path) {
  if (!config) return null_arg("config");
  if (!path) return null_arg("path");
  return guard([&] { config->cfg.load_file(path); });
}

jch_status jch_config_set(jch_config* config, const char* key, const char* value) {
  if (!config) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guard([&] { config->cfg.set(key, value); });
}

jch_status jch_config_set_assignment(jch_config* config, const char* key_equals_value) {
  if (!config) return null_arg("config");
  if (!key_equals_value) return null_arg("assignment");
  return guard([&] { config->cfg.set_assignment(key_equals_value); });
}

jch_status jch_config_set_output_dir(jch_config* config, const char* dir) {
  if (!config) return null_arg("config");
  return guard([&] { config->cfg.out_dir = dir ? dir : ""; });
}

jch_status jch_config_get(const jch_config* config, const char* key, double* out) {
  if (!config) return null_arg("config");
  if (!key || !out) return null_arg("key/out");
  return guard([&] { *out = config->cfg.get(key); });
}

jch_status jch_config_resolved_text(const jch_config* config, char* buf, size_t capacity, size_t* needed) {
  if (!config) return null_arg("config");
  std::string text;
  const jch_status s = guard([&] { text = config->cfg.resolved_text(); });
  return s == JCH_OK ? copy_out(text, buf, capacity, needed) : s;
}

jch_status jch_config_write_resolved(const jch_config* config) {
  if (!config) return null_arg("config");
  if (config->cfg.out_dir.empty()) return fail(JCH_ERR_INVALID_ARGUMENT, "no output directory configured");
  return guard([&] {
    std::filesystem::create_directories(config->cfg.out_dir);
    const auto path = config->cfg.out_dir / "resolved_params.txt";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw jch::Error(jch::ErrorKind::io, "cannot write " + path.string());
    os << config->cfg.resolved_text();
  });
}

jch_status jch_run(const jch_config* config, jch_report** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!config) return null_arg("config");
  return guard([&] {
    auto result = jch::run_scenario(config->cfg.scenario, config->cfg.resolved(), config->cfg.options());
    auto* r = new jch_report{std::move(result.report), {}};
    for (const auto& f : r->report.files) r->files.push_back(f.string());
    *out = r;
  });
}

const char* jch_report_scenario(const jch_report* report) { return report ? report->report.scenario.c_str() : nullptr; }

size_t jch_report_target_count(const jch_report* report) { return report ? report->report.targets.size() : 0; }

jch_status jch_report_target(const jch_report* report, size_t index, jch_target* out) {
  if (!report || !out) return null_arg("report/out");
  if (index >= report->report.targets.size()) return fail(JCH_ERR_INVALID_ARGUMENT, "target index out of range");
  fill(report->report.targets[index], out);
  return JCH_OK;
}

jch_status jch_report_find_target(const jch_report* report, const char* key, jch_target* out) {
  if (!report || !key || !out) return null_arg("report/key/out");
  const auto* t = report->report.find_target(key);
  if (!t) return fail(JCH_ERR_UNKNOWN_KEY, std::string("no target '") + key + "'");
  fill(*t, out);
  return JCH_OK;
}

size_t jch_report_warning_count(const jch_report* report) { return report ? report->report.warnings.size() : 0; }

const char* jch_report_warning(const jch_report* report, size_t index) {
  if (!report || index >= report->report.warnings.size()) return nullptr;
  return report->report.warnings[index].c_str();
}

size_t jch_report_file_count(const jch_report* report) { return report ? report->files.size() : 0; }

const char* jch_report_file(const jch_report* report, size_t index) {
  if (!report || index >= report->files.size()) return nullptr;
  return report->files[index].c_str();
}

const char* jch_report_diagnostic(const jch_report* report, const char* key) {
  if (!report || !key) return nullptr;
  for (const auto& [k, v] : report->report.diagnostics)
    if (k == key) return v.c_str();
  return nullptr;
}

int jch_report_paper_pass(const jch_report* report) { return report && report->report.paper_targets_pass() ? 1 : 0; }

int jch_report_all_pass(const jch_report* report) { return report && report->report.all_targets_pass() ? 1 : 0; }

jch_status jch_report_summary_text(const jch_report* report, char* buf, size_t capacity, size_t* needed) {
  if (!report) return null_arg("report");
  std::ostringstream os;
  report->report.write_summary(os);
  return copy_out(os.str(), buf, capacity, needed);
}

void jch_report_destroy(jch_report* report) { delete report; }

jch_status jch_repulsion_energy(const jch_config* config, double wprime, double* out) {
  if (!config || !out) return null_arg("config/out");
  return guard([&] {
    const auto p = config->cfg.resolved();
    p.validate();
    *out = jch::repulsion_energy(p, wprime);
  });
}

jch_status jch_two_polariton_levels(const jch_config* config, double* values, size_t capacity, size_t* count) {
  if (!config || !count) return null_arg("config/count");
  return guard([&] {
    const auto p = config->cfg.resolved();
    p.validate();
    const auto sp = jch::two_polariton_spectrum(p);
    *count = sp.eig.size();
    if (values)
      for (size_t i = 0; i < std::min(capacity, sp.eig.size()); ++i) values[i] = sp.eig.values(static_cast<Eigen::Index>(i));
  });
}

jch_status jch_effective_hopping(const jch_config* config, int knob_excited, double* out) {
  if (!config || !out) return null_arg("config/out");
  return guard([&] {
    const auto p = config->cfg.resolved();
    p.validate();
    auto basis = jch::Basis::build(p.n_max);
    *out = jch::hopping_coefficient(jch::build_H_eff(p, basis), knob_excited ? jch::Level::e : jch::Level::g);
  });
}

}  // extern "C"
