#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace jch {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::size_t sample_count(const ScenarioOptions& opts) {
  if (opts.samples == 0) return kDefaultSamples;
  if (opts.samples < 3) throw Error(ErrorKind::invalid_argument, "at least 3 samples are required");
  return opts.samples;
}

ScenarioReport start(const std::string& name, const SystemParams& p) {
  p.validate();
  ScenarioReport rep;
  rep.scenario = name;
  rep.params = p;
  if (auto w = p.dispersive_warning()) rep.warnings.push_back(*w);
  return rep;
}

Target within(std::string key, double value, double expected, double tol, Provenance prov) {
  return Target{std::move(key), value, expected, tol, Comparison::within, prov};
}
Target at_most(std::string key, double value, double bound, Provenance prov) {
  return Target{std::move(key), value, bound, 0.0, Comparison::at_most, prov};
}
Target at_least(std::string key, double value, double bound, Provenance prov) {
  return Target{std::move(key), value, bound, 0.0, Comparison::at_least, prov};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot write " + path.string());
  return os;
}

// Lets `write_tables` fill the output directory, then writes both summaries.
template <typename F>
void emit(ScenarioReport& rep, const ScenarioOptions& opts, F&& write_tables) {
  if (!opts.out_dir) return;
  std::error_code ec;
  std::filesystem::create_directories(*opts.out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + opts.out_dir->string() + ": " + ec.message());
  write_tables(*opts.out_dir);
  const auto txt = *opts.out_dir / "summary.txt";
  const auto csv = *opts.out_dir / "summary.csv";
  rep.files.push_back(txt);
  rep.files.push_back(csv);
  {
    auto os = open_out(txt);
    rep.write_summary(os);
  }
  auto os = open_out(csv);
  rep.write_summary_csv(os);
}

void write_series(ScenarioReport& rep, const std::filesystem::path& path, const TimeSeries& ts) {
  auto os = open_out(path);
  ts.write_csv(os);
  rep.files.push_back(path);
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double overlap(const Vector& a, const Vector& b) { return std::abs(a.dot(b)); }

std::vector<Vector> to_full(const std::vector<Vector>& vs, const Basis& sub, const Basis& full) {
  std::vector<Vector> out;
  for (const auto& v : vs) out.push_back(embed(v, sub, full));
  return out;
}

// Eigenstate of the exact Hamiltonian in the excitation sector of `ref`
// (a vector on the unconstrained basis) with the largest overlap with it.
struct DressedState {
  double energy = 0.0;
  Vector vector;  // on the unconstrained basis
  double overlap = 0.0;
};

DressedState dressed_match(const SystemParams& p, const BasisPtr& full, const Vector& ref, int sector) {
  auto sb = Basis::build(p.n_max, sector);
  auto eig = eig_hermitian(build_H_full(p, sb));
  const Vector local = [&] {
    Vector v(static_cast<Eigen::Index>(sb->size()));
    for (std::size_t i = 0; i < sb->size(); ++i) v(static_cast<Eigen::Index>(i)) = ref(static_cast<Eigen::Index>(full->full_index((*sb)[i])));
    return v;
  }();
  DressedState best;
  for (std::size_t l = 0; l < eig.size(); ++l) {
    const double o = overlap(eig.vector(l), local);
    if (o > best.overlap) {
      best.overlap = o;
      best.energy = eig.values(static_cast<Eigen::Index>(l));
      best.vector = eig.vector(l);
    }
  }
  best.vector = embed(best.vector, *sb, *full);
  return best;
}

std::string site_name(SiteLabel s) { return std::to_string(s.n) + (s.branch == Branch::lower ? "-" : "+"); }

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::paper: return "PAPER";
    case Provenance::trivial: return "TRIVIAL";
    case Provenance::derived: return "DERIVED";
  }
  return "?";
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::within: return "within";
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
  }
  return "?";
}

bool Target::passed() const {
  if (!std::isfinite(value)) return false;
  switch (comparison) {
    case Comparison::within: return std::abs(value - expected) <= tolerance;
    case Comparison::at_most: return value <= expected;
    case Comparison::at_least: return value >= expected;
  }
  return false;
}

void ScenarioReport::note(const std::string& key, double value) { diagnostics.emplace_back(key, fmt(value)); }
void ScenarioReport::note(const std::string& key, const std::string& value) { diagnostics.emplace_back(key, value); }

const Target* ScenarioReport::find_target(const std::string& key) const {
  for (const auto& t : targets)
    if (t.key == key) return &t;
  return nullptr;
}

const Target& ScenarioReport::target(const std::string& key) const {
  if (const auto* t = find_target(key)) return *t;
  throw Error(ErrorKind::invalid_argument, "report '" + scenario + "' has no target '" + key + "'");
}

bool ScenarioReport::paper_targets_pass() const {
  return std::all_of(targets.begin(), targets.end(), [](const Target& t) { return t.provenance != Provenance::paper || t.passed(); });
}

bool ScenarioReport::all_targets_pass() const {
  return std::all_of(targets.begin(), targets.end(), [](const Target& t) { return t.passed(); });
}

void ScenarioReport::write_summary(std::ostream& os) const {
  os << "scenario = " << scenario << '\n';
  os << "params.epsilon = " << fmt(params.epsilon) << '\n'
     << "params.epsilon_c = " << fmt(params.epsilon_c) << '\n'
     << "params.w = " << fmt(params.w) << '\n'
     << "params.g = " << fmt(params.g) << '\n'
     << "params.g_c = " << fmt(params.g_c) << '\n'
     << "params.kappa0 = " << fmt(params.kappa0) << '\n'
     << "params.Omega = " << fmt(params.Omega) << '\n'
     << "params.w_d = " << fmt(params.w_d) << '\n'
     << "params.n_max = " << params.n_max << '\n';
  for (const auto& t : targets) {
    const std::string k = "target." + t.key;
    os << k << ".value = " << fmt(t.value) << '\n'
       << k << ".expected = " << fmt(t.expected) << '\n'
       << k << ".tolerance = " << fmt(t.tolerance) << '\n'
       << k << ".comparison = " << to_string(t.comparison) << '\n'
       << k << ".provenance = " << to_string(t.provenance) << '\n'
       << k << ".pass = " << (t.passed() ? "true" : "false") << '\n';
  }
  for (const auto& [k, v] : diagnostics) os << "diag." << k << " = " << v << '\n';
  for (std::size_t i = 0; i < warnings.size(); ++i) os << "warning." << i << " = " << warnings[i] << '\n';
  for (std::size_t i = 0; i < files.size(); ++i) os << "file." << i << " = " << files[i].filename().string() << '\n';
  os << "paper_targets_pass = " << (paper_targets_pass() ? "true" : "false") << '\n';
  os << "all_targets_pass = " << (all_targets_pass() ? "true" : "false") << '\n';
}

void ScenarioReport::write_summary_csv(std::ostream& os) const {
  os << "key,value,expected,tolerance,comparison,provenance,pass\n";
  for (const auto& t : targets)
    os << t.key << ',' << fmt(t.value) << ',' << fmt(t.expected) << ',' << fmt(t.tolerance) << ',' << to_string(t.comparison) << ','
       << to_string(t.provenance) << ',' << (t.passed() ? "true" : "false") << '\n';
}

ScenarioResult run_knob_switch(const SystemParams& p, const ScenarioOptions& opts) {
  ScenarioReport rep = start("knob-switch", p);
  auto basis = Basis::build(p.n_max);
  const auto times = linspace(0.0, kKnobSwitchWindow, sample_count(opts));
  const Operator hf = build_H_full(p, basis);
  const Operator he = build_H_eff(p, basis);
  const std::vector<Channel> chans{Expectation{"n1", polariton_number(basis, Mode::resonator1)},
                                   Expectation{"n2", polariton_number(basis, Mode::resonator2)}};

  TimeSeries ts;
  ts.t = times;
  for (Level knob : {Level::g, Level::e}) {
    const auto psi0 = basis_state(basis, BasisState{1, 0, Level::g, Level::g, knob});
    for (const auto& [tag, h] : {std::pair<const char*, const Operator*>{"full", &hf}, {"eff", &he}}) {
      const auto obs = observe(propagate_static(*h, psi0, times), times, chans);
      const std::string prefix = std::string(tag) + "_" + to_char(knob) + "_";
      ts.add_channel(prefix + "n1", obs.channel("n1"));
      ts.add_channel(prefix + "n2", obs.channel("n2"));
    }
  }

  rep.add(at_most("eff_g_max_n2", max_of(ts.channel("eff_g_n2")), 1e-9, Provenance::trivial));
  rep.add(at_most("full_g_max_n2", max_of(ts.channel("full_g_n2")), 0.05, Provenance::derived));
  rep.add(at_least("full_e_peak_n2", max_of(ts.channel("full_e_n2")), 0.9, Provenance::derived));
  rep.add(at_least("eff_e_peak_n2", max_of(ts.channel("eff_e_n2")), 0.9, Provenance::derived));

  // Two-level reduction: polariton hopping (kappa0 + chi) sin^2(theta_1) at
  // the knob-excited w'.
  const double wprime = p.shifted_w(Level::e);
  const double s = std::sin(polariton_states(p, wprime, 1).lower.theta);
  const double rate = (p.kappa0 + p.chi()) * s * s;
  rep.note("hopping_eff_g", hopping_coefficient(he, Level::g));
  rep.note("hopping_eff_e", hopping_coefficient(he, Level::e));
  if (rate > 0.0) {
    const double t_est = std::numbers::pi / (2.0 * rate);
    rep.note("two_level_first_peak_time", t_est);
    for (const char* name : {"full_e_n2", "eff_e_n2"}) {
      const auto& n2 = ts.channel(name);
      std::size_t best = 0;
      for (std::size_t i = 0; i < times.size() && times[i] <= 1.5 * t_est; ++i)
        if (n2[i] > n2[best]) best = i;
      rep.note(std::string(name) + ".first_peak_time", times[best]);
    }
  }
  rep.note("full_g_n2_at_window_end", ts.channel("full_g_n2").back());

  emit(rep, opts, [&](const std::filesystem::path& dir) { write_series(rep, dir / "knob-switch.csv", ts); });
  return ScenarioResult{std::move(rep), std::move(ts)};
}

ScenarioResult run_spectrum(const SystemParams& p, const ScenarioOptions& opts) {
  ScenarioReport rep = start("spectrum", p);
  const auto sp = two_polariton_spectrum(p);
  const auto& eig = sp.eig;
  const double wg = p.shifted_w(Level::g);
  const double we = p.shifted_w(Level::e);

  const double ur = repulsion_energy(p, we);
  rep.add(within("u_r_closed_form", ur, 0.259, 0.005, Provenance::paper));
  rep.add(within("u_r_numeric", repulsion_energy_numeric(p, we), 0.259, 0.005, Provenance::paper));

  auto full = Basis::build(p.n_max);
  const Operator he_full = build_H_eff(p, full);
  const double j_e = hopping_coefficient(he_full, Level::e);
  rep.add(within("hopping_knob_e", j_e, 0.2, 1e-12, Provenance::paper));
  rep.add(within("hopping_knob_g", hopping_coefficient(he_full, Level::g), 0.0, 0.0, Provenance::paper));
  rep.add(at_least("J_over_u_r", j_e / ur, 0.3, Provenance::derived));

  // Manifold split: knob weight of every eigenvector decides its block.
  const Operator pe = excited_projector(sp.basis, Qubit::qc);
  double top_g = -1e300, bottom_e = 1e300, mixing = 0.0;
  for (std::size_t l = 0; l < eig.size(); ++l) {
    const Vector v = eig.vector(l);
    const double we_l = v.dot(pe.matrix() * v).real();
    mixing = std::max(mixing, std::min(we_l, 1.0 - we_l));
    const double e = eig.values(static_cast<Eigen::Index>(l));
    if (we_l > 0.5) bottom_e = std::min(bottom_e, e);
    else top_g = std::max(top_g, e);
  }
  rep.add(at_least("manifold_gap", bottom_e - top_g, 0.0, Provenance::paper));
  rep.note("block_mixing", mixing);

  const Vector ground_ref = polariton_product(sp.basis, p, wg, {1, Branch::lower}, {1, Branch::lower}, Level::g);
  rep.add(at_least("ground_product_overlap", overlap(eig.vector(0), ground_ref), 0.999, Provenance::derived));

  const auto phi = delocalized_reference_states(p, sp.basis);
  rep.add(within("overlap_psi9_phi1", overlap(eig.vector(8), phi[0]), 0.980, 0.002, Provenance::paper));
  rep.add(within("overlap_psi10_phi2", overlap(eig.vector(9), phi[1]), 0.998, 0.002, Provenance::paper));
  rep.add(within("overlap_psi11_phi3", overlap(eig.vector(10), phi[2]), 0.979, 0.002, Provenance::paper));
  rep.note("overlap_psi9_phi3", overlap(eig.vector(8), phi[2]));
  rep.note("overlap_psi11_phi1", overlap(eig.vector(10), phi[0]));

  const auto res = resonance_and_detuning(eig);
  rep.add(within("w_d", res.w_d, 50.2750, 0.001, Provenance::paper));
  rep.add(within("delta", res.delta, 0.2151, 0.001, Provenance::paper));
  if (!res.usable) rep.warnings.push_back("delta <= 0: degenerate first excitation, drive regime unusable");
  {
    const double e2_abs = eig.values(1);
    const double e10 = eig.values(9) - eig.values(0), e9 = eig.values(8) - eig.values(0);
    rep.note("delta_absolute_E2_reading", std::min(e2_abs, e10 - e9 - e2_abs));
  }
  rep.note("trace_minus_eigensum", std::abs(sp.h_eff.matrix().trace().real() - eig.values.sum()));
  rep.note("max_residual", eig.residuals.maxCoeff());

  // Drive resonance from the exact Hamiltonian's dressed versions of psi1, psi9.
  {
    const auto d1 = dressed_match(p, full, embed(eig.vector(0), *sp.basis, *full), 2);
    const auto d9 = dressed_match(p, full, embed(eig.vector(8), *sp.basis, *full), 3);
    rep.note("w_d_exact_hamiltonian", d9.energy - d1.energy);
  }

  // Labels by overlap with the product and delocalised reference states.
  std::vector<std::pair<std::string, Vector>> refs;
  const std::vector<std::pair<SiteLabel, SiteLabel>> pairs{
      {{1, Branch::lower}, {1, Branch::lower}}, {{2, Branch::lower}, {0, Branch::lower}}, {{0, Branch::lower}, {2, Branch::lower}},
      {{1, Branch::lower}, {1, Branch::upper}}, {{1, Branch::upper}, {1, Branch::lower}}, {{2, Branch::upper}, {0, Branch::lower}},
      {{0, Branch::lower}, {2, Branch::upper}}, {{1, Branch::upper}, {1, Branch::upper}}};
  for (Level knob : {Level::g, Level::e})
    for (const auto& [a, b] : pairs)
      refs.emplace_back(std::string(1, to_char(knob)) + "|" + site_name(a) + "," + site_name(b) + ">",
                        polariton_product(sp.basis, p, knob == Level::g ? wg : we, a, b, knob));
  for (int k = 0; k < 3; ++k) refs.emplace_back("e|phi" + std::to_string(k + 1) + ">", phi[static_cast<std::size_t>(k)]);
  for (std::size_t l = 0; l < eig.size(); ++l) {
    std::size_t best = 0;
    double best_o = -1.0;
    for (std::size_t r = 0; r < refs.size(); ++r) {
      const double o = overlap(eig.vector(l), refs[r].second);
      if (o > best_o) best_o = o, best = r;
    }
    rep.note("psi" + std::to_string(l + 1) + ".label", refs[best].first);
    rep.note("psi" + std::to_string(l + 1) + ".label_overlap", best_o);
  }

  emit(rep, opts, [&](const std::filesystem::path& dir) {
    const auto path = dir / "spectrum.csv";
    auto os = open_out(path);
    os << "index,eigenvalue,relative_to_E1,dominant_basis_state,dominant_amplitude\n";
    for (std::size_t l = 0; l < eig.size(); ++l) {
      const Vector v = eig.vector(l);
      Eigen::Index k = 0;
      v.cwiseAbs().maxCoeff(&k);
      const double e = eig.values(static_cast<Eigen::Index>(l));
      os << l + 1 << ',' << fmt(e) << ',' << fmt(e - eig.values(0)) << ',' << (*sp.basis)[static_cast<std::size_t>(k)].label() << ','
         << fmt(std::abs(v(k))) << '\n';
    }
    rep.files.push_back(path);
  });
  return ScenarioResult{std::move(rep), {}};
}

double refined_minimum_time(const std::vector<double>& t, const std::vector<double>& values, double t_lo, double t_hi) {
  if (t.size() != values.size() || t.size() < 3) throw Error(ErrorKind::invalid_argument, "need at least 3 paired samples");
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_lo && t[i] <= t_hi && (!best || values[i] < values[*best])) best = i;
  if (!best) throw Error(ErrorKind::invalid_argument, "no samples inside the search window");
  const std::size_t i = *best;
  if (i == 0 || i + 1 == t.size()) return t[i];
  const double x0 = t[i - 1], x1 = t[i], x2 = t[i + 1];
  const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
  const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
  if (!(a > 0.0)) return x1;
  return std::clamp(-b / (2.0 * a), x0, x2);
}

ScenarioResult run_phase_rabi(const SystemParams& p, const ScenarioOptions& opts) {
  ScenarioReport rep = start("phase-rabi", p);
  if (!(p.Omega > 0.0)) throw Error(ErrorKind::invalid_argument, "phase-rabi needs Omega > 0");
  const auto sp = two_polariton_spectrum(p);
  const auto res = resonance_and_detuning(sp.eig);
  auto full = Basis::build(p.n_max);

  const Vector psi1 = embed(sp.eig.vector(0), *sp.basis, *full);
  const Vector psi9 = embed(sp.eig.vector(8), *sp.basis, *full);
  const auto phi = to_full({delocalized_reference_states(p, sp.basis)[0], delocalized_reference_states(p, sp.basis)[2]}, *sp.basis, *full);

  const double omega_me = p.Omega * transition_elements(sp.eig, build_drive_raising(sp.basis))(8, 0);
  rep.note("omega_prime_matrix_element", omega_me);
  rep.note("w_d_spectrum", res.w_d);
  rep.note("delta_spectrum", res.delta);
  if (std::abs(p.w_d - res.w_d) > res.delta / 10.0) {
    std::ostringstream msg;
    msg << "drive frequency " << fmt(p.w_d) << " misses the psi1->psi9 resonance " << fmt(res.w_d) << " by more than delta/10";
    rep.warnings.push_back(msg.str());
  }
  {
    const auto d1 = dressed_match(p, full, psi1, 2);
    const auto d9 = dressed_match(p, full, psi9, 3);
    const Operator up = build_drive_raising(full);
    rep.note("omega_prime_exact_hamiltonian", p.Omega * std::abs(d9.vector.dot(up.matrix() * d1.vector)));
    rep.note("w_d_exact_hamiltonian", d9.energy - d1.energy);
  }

  const double t_end = 2.0 * std::numbers::pi / omega_me;
  const auto times = linspace(0.0, t_end, sample_count(opts));
  const StateVector start_state{full, psi1};
  const std::vector<Channel> chans{Overlap{"overlap_psi1", psi1}, Overlap{"overlap_phi1", phi[0]}, Overlap{"overlap_psi9", psi9},
                                   Overlap{"overlap_phi3", phi[1]}};

  auto analyse = [&](const SystemParams& q, const std::string& prefix, TimeSeries* keep) {
    const auto states = propagate_driven(q, start_state, times);
    TimeSeries ts = observe(states, times, chans);
    std::vector<double> leak;
    const auto& a1 = ts.channel("overlap_psi1");
    const auto& a9 = ts.channel("overlap_psi9");
    for (std::size_t i = 0; i < times.size(); ++i) leak.push_back(std::max(0.0, 1.0 - a1[i] * a1[i] - a9[i] * a9[i]));
    ts.add_channel("leakage", leak);

    const double t_min = refined_minimum_time(times, a1, 0.0, 0.75 * std::numbers::pi / omega_me);
    const double rate = std::numbers::pi / (2.0 * t_min);
    double dev = 0.0;
    for (std::size_t i = 0; i < times.size() && times[i] <= std::numbers::pi / rate; ++i)
      dev = std::max(dev, std::abs(a1[i] - std::abs(std::cos(rate * times[i]))));

    const double t_cat = std::numbers::pi / (4.0 * omega_me);
    const auto cat = propagate_driven(q, start_state, {t_cat})[0].amplitudes;
    struct Out {
      double rate, dev, leak, cat_psi1, cat_phi1, cat_psi9, cat_phi3, t_cat;
    } out{rate, dev, max_of(leak), overlap(psi1, cat), overlap(phi[0], cat), overlap(psi9, cat), overlap(phi[1], cat), t_cat};
    rep.note(prefix + "first_minimum_time", t_min);
    if (keep) *keep = std::move(ts);
    return out;
  };

  TimeSeries ts;
  const auto primary = analyse(p, "", &ts);
  const double half = std::numbers::sqrt2 / 2.0;
  rep.add(within("omega_prime_extracted", primary.rate, 0.0495, 0.002, Provenance::paper));
  rep.add(at_most("omega_prime_matrix_element_gap", std::abs(omega_me - primary.rate), 1e-3, Provenance::paper));
  rep.add(within("cat_overlap_psi1", primary.cat_psi1, half, 0.05, Provenance::paper));
  rep.add(within("cat_overlap_phi1", primary.cat_phi1, half, 0.05, Provenance::paper));
  rep.add(at_most("max_leakage", primary.leak, 0.05, Provenance::derived));
  rep.add(at_most("two_state_max_deviation", primary.dev, 0.05, Provenance::derived));
  rep.note("cat_time", primary.t_cat);
  rep.note("cat_overlap_psi9", primary.cat_psi9);
  rep.note("cat_overlap_phi3", primary.cat_phi3);

  {
    SystemParams q = p;
    q.w_d = res.w_d;
    const auto alt = analyse(q, "recomputed_w_d.", nullptr);
    rep.note("recomputed_w_d.omega_prime_extracted", alt.rate);
    rep.note("recomputed_w_d.cat_overlap_psi1", alt.cat_psi1);
    rep.note("recomputed_w_d.cat_overlap_phi1", alt.cat_phi1);
    rep.note("recomputed_w_d.max_leakage", alt.leak);
    rep.note("recomputed_w_d.two_state_max_deviation", alt.dev);
  }

  if (opts.cross_check) {
    IntegratorOptions io;
    io.norm_tolerance = opts.tolerance;
    const auto direct = propagate_timedep(p, start_state, times, io);
    const auto rotating = propagate_driven(p, start_state, times);
    rep.add(at_most("cross_integrator_distance", max_state_distance(direct, rotating), 1e-6, Provenance::derived));
  }

  emit(rep, opts, [&](const std::filesystem::path& dir) { write_series(rep, dir / "phase-rabi.csv", ts); });
  return ScenarioResult{std::move(rep), std::move(ts)};
}

double logical_exchange_rate(const SystemParams& p) {
  const double s = std::sin(polariton_states(p, p.shifted_w(Level::g), 1).lower.theta);
  return (p.kappa0 - p.chi()) * s * s;
}

double solve_detuning_for_exchange(const SystemParams& p, double j_prime) {
  if (!(p.kappa0 > 0.0) || !(p.g_c > 0.0)) throw Error(ErrorKind::invalid_argument, "exchange tuning needs kappa0 > 0 and g_c > 0");
  if (!(j_prime > 0.0)) throw Error(ErrorKind::invalid_argument, "target exchange rate must be positive");
  auto rate_at = [&](double dc) {
    SystemParams q = p;
    q.epsilon_c = p.w + dc;
    return logical_exchange_rate(q) - j_prime;
  };
  double lo = p.g_c * p.g_c / p.kappa0;
  double hi = 2.0 * lo;
  while (rate_at(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e8 * lo) throw Error(ErrorKind::invalid_argument, "exchange rate " + fmt(j_prime) + " is out of reach for these parameters");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate_at(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct GateRun {
  double delta_c = 0.0, j = 0.0, j_prime = 0.0, u_r = 0.0;
  double exchange_dev = 0.0, transfer_max = 0.0, deficit00 = 0.0, deficit11 = 0.0, fidelity = 0.0;
  TimeSeries series;
};

GateRun simulate_gate(const SystemParams& q, const BasisPtr& basis, double t_end, std::size_t samples, bool use_full) {
  GateRun r;
  r.delta_c = q.delta_c();
  r.j = q.kappa0 - q.chi();
  r.j_prime = logical_exchange_rate(q);
  const double wg = q.shifted_w(Level::g);
  r.u_r = repulsion_energy(q, wg);
  const Operator h = use_full ? build_H_full(q, basis) : build_H_eff(q, basis);

  const SiteLabel zero{0, Branch::lower}, one{1, Branch::lower};
  const std::array<Vector, 4> logical{polariton_product(basis, q, wg, zero, zero, Level::g), polariton_product(basis, q, wg, zero, one, Level::g),
                                      polariton_product(basis, q, wg, one, zero, Level::g), polariton_product(basis, q, wg, one, one, Level::g)};
  const auto times = linspace(0.0, t_end, samples);
  std::array<TimeSeries, 4> runs;
  for (std::size_t k = 0; k < 4; ++k)
    runs[k] = observe(propagate_static(h, StateVector{basis, logical[k]}, times), times,
                      {Overlap{"00", logical[0]}, Overlap{"01", logical[1]}, Overlap{"10", logical[2]}, Overlap{"11", logical[3]}});

  std::vector<double> p10, ideal, s00, s11;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double a = runs[1].channel("10")[i];
    const double sj = std::sin(r.j_prime * times[i]);
    p10.push_back(a * a);
    ideal.push_back(sj * sj);
    s00.push_back(runs[0].channel("00")[i]);
    s11.push_back(runs[3].channel("11")[i]);
    r.deficit00 = std::max(r.deficit00, 1.0 - s00.back());
    r.deficit11 = std::max(r.deficit11, 1.0 - s11.back());
  }
  r.exchange_dev = max_abs_diff(p10, ideal);
  r.transfer_max = max_of(p10);
  r.series.t = times;
  r.series.add_channel("p_01_to_10", p10);
  r.series.add_channel("sin2_Jprime_t", ideal);
  r.series.add_channel("overlap_00", s00);
  r.series.add_channel("overlap_11", s11);

  // Average gate fidelity of the logical block against sqrt(iSWAP) after
  // removing the single-site dynamical phases.
  if (r.j_prime > 0.0) {
    const double tg = std::numbers::pi / (4.0 * r.j_prime);
    const double e1 = polariton_states(q, wg, 1).lower.energy;
    const std::array<double, 4> e_loc{0.0, e1, e1, 2.0 * e1};
    Eigen::Matrix4cd m;
    for (std::size_t b = 0; b < 4; ++b) {
      const Vector out = propagate_static(h, StateVector{basis, logical[b]}, {tg})[0].amplitudes;
      for (std::size_t a = 0; a < 4; ++a)
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = std::exp(cplx(0.0, e_loc[a] * tg)) * logical[a].dot(out);
    }
    const double c = std::numbers::sqrt2 / 2.0;
    Eigen::Matrix4cd ideal_gate = Eigen::Matrix4cd::Identity();
    ideal_gate(1, 1) = ideal_gate(2, 2) = c;
    ideal_gate(1, 2) = ideal_gate(2, 1) = cplx(0.0, -c);
    const Eigen::Matrix4cd mm = ideal_gate.adjoint() * m;
    r.fidelity = ((mm * mm.adjoint()).trace().real() + std::norm(mm.trace())) / 20.0;
  }
  return r;
}

}  // namespace

ScenarioResult run_iswap_gate(const SystemParams& p, const ScenarioOptions& opts) {
  ScenarioReport rep = start("iswap-gate", p);
  rep.warnings.clear();  // epsilon_c is replaced below; warnings refer to the settings actually used
  auto basis = Basis::build(p.n_max);
  const std::size_t samples = sample_count(opts);
  constexpr double kPrimary = 0.02;
  rep.note("epsilon_c_input_ignored", p.epsilon_c);

  SystemParams off = p;
  off.epsilon_c = p.w + p.g_c * p.g_c / p.kappa0;
  const double t_primary = std::numbers::pi / (2.0 * kPrimary);
  const GateRun off_run = simulate_gate(off, basis, t_primary, samples, false);
  rep.add(within("off.hopping_coefficient", hopping_coefficient(build_H_eff(off, basis), Level::g), 0.0, 0.0, Provenance::trivial));
  rep.add(at_most("off.max_transfer", off_run.transfer_max, 1e-12, Provenance::trivial));
  rep.add(at_most("off.stationary_00_deficit", off_run.deficit00, 1e-6, Provenance::paper));
  rep.add(at_most("off.stationary_11_deficit", off_run.deficit11, 1e-6, Provenance::paper));
  rep.note("off.delta_c", off.delta_c());

  std::vector<GateRun> sweep;
  for (double jp : {0.01, kPrimary, 0.05}) {
    SystemParams on = p;
    on.epsilon_c = p.w + solve_detuning_for_exchange(p, jp);
    sweep.push_back(simulate_gate(on, basis, std::numbers::pi / (2.0 * jp), samples, false));
    const GateRun& r = sweep.back();
    const std::string k = "on[J'=" + fmt(jp) + "].";
    rep.note(k + "delta_c", r.delta_c);
    rep.note(k + "J", r.j);
    rep.note(k + "u_r", r.u_r);
    rep.note(k + "J_over_u_r", r.j / r.u_r);
    rep.note(k + "exchange_max_deviation", r.exchange_dev);
    rep.note(k + "stationary_11_deficit", r.deficit11);
    rep.note(k + "sqrt_iswap_fidelity", r.fidelity);
    if (r.j >= 0.3 * r.u_r)
      rep.warnings.push_back("J' = " + fmt(jp) + ": J/u_r = " + fmt(r.j / r.u_r) + " >= 0.3, outside the blockade regime");
  }
  const GateRun& on_run = sweep[1];
  rep.add(at_most("on.exchange_max_deviation", on_run.exchange_dev, 0.02, Provenance::derived));
  rep.add(at_most("on.stationary_00_deficit", on_run.deficit00, 1e-6, Provenance::paper));
  rep.add(at_most("on.stationary_11_deficit", on_run.deficit11, 1e-6, Provenance::paper));
  rep.note("on.sqrt_iswap_fidelity", on_run.fidelity);
  {
    SystemParams on = p;
    on.epsilon_c = p.w + on_run.delta_c;
    const GateRun full_run = simulate_gate(on, basis, t_primary, samples, true);
    rep.note("on.full_hamiltonian.exchange_max_deviation", full_run.exchange_dev);
    rep.note("on.full_hamiltonian.stationary_11_deficit", full_run.deficit11);
  }

  TimeSeries ts = on_run.series;
  emit(rep, opts, [&](const std::filesystem::path& dir) {
    write_series(rep, dir / "iswap-gate.csv", ts);
    const auto path = dir / "iswap-sweep.csv";
    auto os = open_out(path);
    os << "J_prime,delta_c,J,u_r,J_over_u_r,exchange_max_deviation,stationary_11_deficit,sqrt_iswap_fidelity\n";
    for (const auto& r : sweep)
      os << fmt(r.j_prime) << ',' << fmt(r.delta_c) << ',' << fmt(r.j) << ',' << fmt(r.u_r) << ',' << fmt(r.j / r.u_r) << ','
         << fmt(r.exchange_dev) << ',' << fmt(r.deficit11) << ',' << fmt(r.fidelity) << '\n';
    rep.files.push_back(path);
  });
  return ScenarioResult{std::move(rep), std::move(ts)};
}

namespace {

// Largest |<n_i>_H - <n_i>_Heff| over both resonators and the window, for the
// bare one-photon initial state with the knob in `knob`.
double curve_deviation(const SystemParams& q, Level knob, const std::vector<double>& times) {
  auto basis = Basis::build(q.n_max);
  const std::vector<Channel> chans{Expectation{"n1", polariton_number(basis, Mode::resonator1)},
                                   Expectation{"n2", polariton_number(basis, Mode::resonator2)}};
  const auto psi0 = basis_state(basis, BasisState{1, 0, Level::g, Level::g, knob});
  const auto a = observe(propagate_static(build_H_full(q, basis), psi0, times), times, chans);
  const auto b = observe(propagate_static(build_H_eff(q, basis), psi0, times), times, chans);
  return std::max(max_abs_diff(a.channel("n1"), b.channel("n1")), max_abs_diff(a.channel("n2"), b.channel("n2")));
}

}  // namespace

ScenarioResult run_dispersive_validation(const SystemParams& p, const ScenarioOptions& opts) {
  ScenarioReport rep = start("validate-dispersive", p);
  const auto times = linspace(0.0, kKnobSwitchWindow, sample_count(opts));
  rep.add(at_most("deviation_knob_g", curve_deviation(p, Level::g, times), 0.1, Provenance::derived));
  rep.add(at_most("deviation_knob_e", curve_deviation(p, Level::e, times), 0.1, Provenance::derived));

  SystemParams bare = p;
  bare.g_c = 0.0;
  bare.kappa0 = 0.0;
  rep.add(at_most("uncoupled_limit_deviation",
                  std::max(curve_deviation(bare, Level::g, times), curve_deviation(bare, Level::e, times)), 1e-9, Provenance::trivial));

  struct Row {
    double delta_c, kappa0, dev_g, dev_e;
  };
  std::vector<Row> rows;
  for (double dc : {10.0, 8.0, 6.0, 4.0, 2.0}) {
    SystemParams q = p;
    q.epsilon_c = p.w + dc;
    q.kappa0 = q.g_c * q.g_c / dc;
    rows.push_back(Row{dc, q.kappa0, curve_deviation(q, Level::g, times), curve_deviation(q, Level::e, times)});
  }
  int violations = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::max(rows[i].dev_g, rows[i].dev_e) <= std::max(rows[i - 1].dev_g, rows[i - 1].dev_e)) ++violations;
  rep.add(at_most("sweep_monotonicity_violations", violations, 0.0, Provenance::derived));
  for (const auto& r : rows) rep.note("sweep[delta_c=" + fmt(r.delta_c) + "].deviation", std::max(r.dev_g, r.dev_e));

  emit(rep, opts, [&](const std::filesystem::path& dir) {
    const auto path = dir / "validate-dispersive.csv";
    auto os = open_out(path);
    os << "delta_c,kappa0,deviation_knob_g,deviation_knob_e\n";
    for (const auto& r : rows) os << fmt(r.delta_c) << ',' << fmt(r.kappa0) << ',' << fmt(r.dev_g) << ',' << fmt(r.dev_e) << '\n';
    rep.files.push_back(path);
  });
  return ScenarioResult{std::move(rep), {}};
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"knob-switch", "spectrum", "phase-rabi", "iswap-gate", "validate-dispersive"};
  return names;
}

SystemParams scenario_defaults(const std::string& scenario) {
  if (scenario == "knob-switch" || scenario == "validate-dispersive") return SystemParams::knob_switch_defaults();
  if (scenario == "spectrum" || scenario == "iswap-gate") return SystemParams::spectrum_defaults();
  if (scenario == "phase-rabi") return SystemParams::phase_rabi_defaults();
  throw Error(ErrorKind::invalid_argument, "unknown scenario '" + scenario + "'");
}

ScenarioResult run_scenario(const std::string& scenario, const SystemParams& p, const ScenarioOptions& opts) {
  if (scenario == "knob-switch") return run_knob_switch(p, opts);
  if (scenario == "spectrum") return run_spectrum(p, opts);
  if (scenario == "phase-rabi") return run_phase_rabi(p, opts);
  if (scenario == "iswap-gate") return run_iswap_gate(p, opts);
  if (scenario == "validate-dispersive") return run_dispersive_validation(p, opts);
  throw Error(ErrorKind::invalid_argument, "unknown scenario '" + scenario + "'");
}

}  // namespace jch
