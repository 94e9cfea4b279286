#include "core/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

namespace jch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error(ErrorKind::bad_value, "key '" + key + "': empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw Error(ErrorKind::bad_value, "key '" + key + "': '" + t + "' is not a number");
  if (!std::isfinite(v)) throw Error(ErrorKind::bad_value, "key '" + key + "': value must be finite");
  return v;
}

double require_integer(const std::string& key, double v, double min) {
  if (v != std::floor(v) || v < min)
    throw Error(ErrorKind::bad_value, "key '" + key + "': expected an integer >= " + std::to_string(static_cast<long>(min)));
  return v;
}

void assign(SystemParams& p, const std::string& key, double v) {
  if (key == "epsilon") p.epsilon = v;
  else if (key == "epsilon_c") p.epsilon_c = v;
  else if (key == "w") p.w = v;
  else if (key == "g") p.g = v;
  else if (key == "g_c") p.g_c = v;
  else if (key == "kappa0") p.kappa0 = v;
  else if (key == "Omega") p.Omega = v;
  else if (key == "w_d") p.w_d = v;
  else if (key == "n_max") p.n_max = static_cast<int>(v);
}

const std::vector<std::string> kParamKeys{"epsilon", "epsilon_c", "w", "g", "g_c", "kappa0", "Omega", "w_d", "n_max"};

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    auto k = kParamKeys;
    k.push_back("samples");
    k.push_back("tolerance");
    return k;
  }();
  return keys;
}

bool is_scenario(const std::string& name) {
  const auto& n = scenario_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

RunConfig::RunConfig(std::string scenario_name) { set_scenario(scenario_name); }

void RunConfig::set_scenario(const std::string& name) {
  if (!is_scenario(name)) throw Error(ErrorKind::invalid_argument, "unknown scenario '" + name + "'");
  scenario = name;
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "samples") {
    samples = static_cast<std::size_t>(require_integer(key, parse_number(key, value), 3));
    return;
  }
  if (key == "tolerance") {
    const double v = parse_number(key, value);
    if (!(v > 0.0)) throw Error(ErrorKind::bad_value, "key 'tolerance': must be positive");
    tolerance = v;
    return;
  }
  if (std::find(kParamKeys.begin(), kParamKeys.end(), key) == kParamKeys.end())
    throw Error(ErrorKind::unknown_key, "unknown key '" + key + "'");
  double v = parse_number(key, value);
  // Energies are measured in units of g, so g itself is fixed.
  if (key == "g" && v != 1.0) throw Error(ErrorKind::bad_value, "key 'g': energies are in units of g, so g must be 1");
  if (key == "n_max") v = require_integer(key, v, 1);
  for (auto& [k, old] : overrides)
    if (k == key) {
      old = v;
      return;
    }
  overrides.emplace_back(key, v);
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::bad_value, "expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    if (line.find('=') == std::string::npos)
      throw Error(ErrorKind::bad_value, path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    set_assignment(line);
  }
}

SystemParams RunConfig::resolved() const {
  SystemParams p = scenario_defaults(scenario);
  for (const auto& [k, v] : overrides) assign(p, k, v);
  return p;
}

ScenarioOptions RunConfig::options() const {
  ScenarioOptions o;
  o.samples = samples;
  o.tolerance = tolerance;
  if (!out_dir.empty()) o.out_dir = out_dir;
  return o;
}

double RunConfig::get(const std::string& key) const {
  const SystemParams p = resolved();
  if (key == "epsilon") return p.epsilon;
  if (key == "epsilon_c") return p.epsilon_c;
  if (key == "w") return p.w;
  if (key == "g") return p.g;
  if (key == "g_c") return p.g_c;
  if (key == "kappa0") return p.kappa0;
  if (key == "Omega") return p.Omega;
  if (key == "w_d") return p.w_d;
  if (key == "n_max") return p.n_max;
  if (key == "samples") return static_cast<double>(samples == 0 ? kDefaultSamples : samples);
  if (key == "tolerance") return tolerance;
  throw Error(ErrorKind::unknown_key, "unknown key '" + key + "'");
}

std::string RunConfig::resolved_text() const {
  std::ostringstream os;
  os << "# scenario: " << scenario << '\n';
  char buf[32];
  for (const auto& k : config_keys()) {
    // shortest text that parses back to the same double
    const auto end = std::to_chars(buf, buf + sizeof buf, get(k)).ptr;
    os << k << " = " << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
  return os.str();
}

}  // namespace jch
