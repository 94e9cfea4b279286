#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "core/experiments.hpp"

using namespace jch;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("jch_experiments_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("target comparisons") {
  CHECK(Target{"a", 1.0, 1.05, 0.1, Comparison::within, Provenance::paper}.passed());
  CHECK_FALSE(Target{"a", 1.0, 1.2, 0.1, Comparison::within, Provenance::paper}.passed());
  CHECK(Target{"b", 0.5, 0.5, 0.0, Comparison::at_most, Provenance::derived}.passed());
  CHECK_FALSE(Target{"c", 0.4, 0.5, 0.0, Comparison::at_least, Provenance::derived}.passed());
  CHECK_FALSE(Target{"d", std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0, Comparison::within, Provenance::trivial}.passed());
}

TEST_CASE("summary carries provenance and margins for every target") {
  ScenarioReport rep;
  rep.scenario = "demo";
  rep.add(Target{"x", 1.0, 1.0, 0.5, Comparison::within, Provenance::paper});
  rep.add(Target{"y", 2.0, 1.0, 0.0, Comparison::at_most, Provenance::derived});
  rep.note("extra", 3.0);
  std::ostringstream txt, csv;
  rep.write_summary(txt);
  rep.write_summary_csv(csv);
  const std::string s = txt.str();
  CHECK(s.find("target.x.provenance = PAPER") != std::string::npos);
  CHECK(s.find("target.y.provenance = DERIVED") != std::string::npos);
  CHECK(s.find("target.x.tolerance = 0.5") != std::string::npos);
  CHECK(s.find("target.y.pass = false") != std::string::npos);
  CHECK(s.find("diag.extra = 3") != std::string::npos);
  CHECK(s.find("paper_targets_pass = true") != std::string::npos);
  CHECK(s.find("all_targets_pass = false") != std::string::npos);
  CHECK(csv.str() == "key,value,expected,tolerance,comparison,provenance,pass\n"
                     "x,1,1,0.5,within,PAPER,true\n"
                     "y,2,1,0,at_most,DERIVED,false\n");
  CHECK(rep.paper_targets_pass());
  CHECK_FALSE(rep.all_targets_pass());
  CHECK_THROWS_AS(rep.target("z"), Error);
}

TEST_CASE("refined minimum of a sampled cosine") {
  const double rate = 0.0581;
  const auto t = linspace(0.0, 2.0 * std::numbers::pi / rate, 2001);
  std::vector<double> v;
  for (double x : t) v.push_back(std::abs(std::cos(rate * x)));
  const double tmin = refined_minimum_time(t, v, 0.0, 0.75 * std::numbers::pi / rate);
  CHECK(tmin == doctest::Approx(std::numbers::pi / (2.0 * rate)).epsilon(1e-3));
  CHECK_THROWS_AS(refined_minimum_time(t, v, -2.0, -1.0), Error);
}

TEST_CASE("spectrum scenario") {
  const auto dir = scratch("spectrum");
  ScenarioOptions opts;
  opts.out_dir = dir;
  const auto res = run_spectrum(SystemParams::spectrum_defaults(), opts);
  const auto& r = res.report;
  CHECK(r.target("u_r_closed_form").passed());
  CHECK(r.target("u_r_numeric").passed());
  CHECK(r.target("hopping_knob_e").passed());
  CHECK(r.target("hopping_knob_g").passed());
  CHECK(r.target("delta").passed());
  CHECK(r.target("overlap_psi10_phi2").passed());
  CHECK(r.target("w_d").value == doctest::Approx(50.28426963).epsilon(1e-9));
  CHECK(r.target("J_over_u_r").value == doctest::Approx(0.2 / 0.259089012).epsilon(1e-6));
  for (const auto& t : r.targets) CHECK(t.key.find(' ') == std::string::npos);

  const std::string csv = slurp(dir / "spectrum.csv");
  CHECK(csv.rfind("index,eigenvalue,relative_to_E1,dominant_basis_state,dominant_amplitude\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  CHECK(csv.find("\n1,78.6174575") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  CHECK(std::filesystem::exists(dir / "summary.csv"));

  // identical parameters give identical bytes
  const auto dir2 = scratch("spectrum_again");
  opts.out_dir = dir2;
  run_spectrum(SystemParams::spectrum_defaults(), opts);
  CHECK(slurp(dir2 / "spectrum.csv") == csv);
  CHECK(slurp(dir2 / "summary.txt").size() == slurp(dir / "summary.txt").size());
}

TEST_CASE("spectrum labels come from overlaps") {
  const auto r = run_spectrum(SystemParams::spectrum_defaults()).report;
  auto diag = [&](const std::string& k) {
    for (const auto& [key, v] : r.diagnostics)
      if (key == k) return v;
    return std::string();
  };
  CHECK(diag("psi1.label") == "g|1-,1->");
  CHECK(diag("psi9.label") == "e|phi3>");
  CHECK(diag("psi10.label") == "e|phi2>");
  CHECK(diag("psi11.label") == "e|phi1>");
}

TEST_CASE("knob switch scenario") {
  ScenarioOptions opts;
  opts.samples = 401;
  const auto res = run_knob_switch(SystemParams::knob_switch_defaults(), opts);
  CHECK(res.series.channels.size() == 8);
  CHECK(res.series.t.back() == kKnobSwitchWindow);
  CHECK(res.report.target("eff_g_max_n2").passed());
  CHECK(res.report.target("full_e_peak_n2").passed());
  CHECK(res.report.target("eff_e_peak_n2").passed());
  CHECK(res.series.channel("full_g_n1").front() == doctest::Approx(1.0));
}

TEST_CASE("exchange-rate tuning") {
  const SystemParams p = SystemParams::spectrum_defaults();
  const double dc = solve_detuning_for_exchange(p, 0.02);
  CHECK(dc == doctest::Approx(13.728894).epsilon(1e-6));
  SystemParams on = p;
  on.epsilon_c = p.w + dc;
  CHECK(logical_exchange_rate(on) == doctest::Approx(0.02).epsilon(1e-10));
  CHECK(on.kappa0 - on.chi() == doctest::Approx(0.0271609).epsilon(1e-6));
  CHECK_THROWS_AS(solve_detuning_for_exchange(p, 0.5), Error);
  SystemParams no_hop = p;
  no_hop.kappa0 = 0.0;
  CHECK_THROWS_AS(solve_detuning_for_exchange(no_hop, 0.02), Error);
}

TEST_CASE("iswap scenario") {
  ScenarioOptions opts;
  opts.samples = 401;
  const auto res = run_iswap_gate(SystemParams::spectrum_defaults(), opts);
  const auto& r = res.report;
  CHECK(r.target("off.hopping_coefficient").passed());
  CHECK(r.target("off.max_transfer").passed());
  CHECK(r.target("off.stationary_11_deficit").passed());
  CHECK(r.target("on.exchange_max_deviation").passed());
  CHECK(r.target("on.stationary_00_deficit").passed());
  CHECK(r.target("on.stationary_11_deficit").value == doctest::Approx(0.067).epsilon(0.01));
  // J' = 0.05 sits just inside the blockade bound J < 0.3 u_r
  std::string ratio;
  for (const auto& [k, v] : r.diagnostics)
    if (k == "on[J'=0.05].J_over_u_r") ratio = v;
  CHECK(std::stod(ratio) == doctest::Approx(0.2991).epsilon(1e-3));
  CHECK(r.warnings.empty());
}

TEST_CASE("dispersive validation limit") {
  ScenarioOptions opts;
  opts.samples = 201;
  const auto r = run_dispersive_validation(SystemParams::knob_switch_defaults(), opts).report;
  CHECK(r.target("uncoupled_limit_deviation").passed());
  CHECK(r.target("deviation_knob_g").value == doctest::Approx(0.1069).epsilon(0.01));
}

TEST_CASE("phase rabi scenario without the direct integrator") {
  ScenarioOptions opts;
  opts.samples = 1001;
  opts.cross_check = false;
  const auto res = run_phase_rabi(SystemParams::phase_rabi_defaults(), opts);
  const auto& r = res.report;
  CHECK(r.target("omega_prime_matrix_element_gap").passed());
  CHECK(r.target("cat_overlap_psi1").passed());
  CHECK(r.target("omega_prime_extracted").value == doctest::Approx(0.0585).epsilon(0.002));
  CHECK(r.find_target("cross_integrator_distance") == nullptr);
  CHECK(res.series.channel("overlap_psi1").front() == doctest::Approx(1.0).epsilon(1e-12));
  SystemParams undriven = SystemParams::phase_rabi_defaults();
  undriven.Omega = 0.0;
  CHECK_THROWS_AS(run_phase_rabi(undriven, opts), Error);
}

TEST_CASE("scenario registry") {
  CHECK(scenario_names().size() == 5);
  CHECK(scenario_defaults("knob-switch").epsilon == 45.0);
  CHECK(scenario_defaults("phase-rabi").Omega == 0.07);
  CHECK_THROWS_AS(scenario_defaults("nope"), Error);
  CHECK_THROWS_AS(run_scenario("nope", SystemParams{}), Error);
  ScenarioOptions bad;
  bad.samples = 2;
  CHECK_THROWS_AS(run_knob_switch(SystemParams::knob_switch_defaults(), bad), Error);
}

}  // TEST_SUITE
