#include "core/hamiltonian.hpp"

#include <cmath>

#include "core/linalg.hpp"

namespace jch {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, std::string("parameter ") + name + " must be finite");
}

BasisPtr full_basis_for(const SystemParams& p, const BasisPtr& basis) {
  if (!basis) throw Error(ErrorKind::invalid_argument, "null basis");
  if (basis->n_max() != p.n_max)
    throw Error(ErrorKind::dimension_mismatch, "basis cutoff n_max=" + std::to_string(basis->n_max()) +
                                                   " does not match parameter n_max=" + std::to_string(p.n_max));
  if (!basis->sector() && basis->size() == static_cast<std::size_t>((p.n_max + 1) * (p.n_max + 1) * 8)) return basis;
  return Basis::build(p.n_max);
}

Operator finish(const Operator& on_full, const BasisPtr& basis) {
  if (on_full.domain() == basis) return on_full;
  return restrict_to(on_full, basis);
}

// Operators shared by the builders, all on the unconstrained basis.
struct Elementary {
  explicit Elementary(const BasisPtr& f)
      : a1(annihilator(f, Mode::resonator1)),
        a2(annihilator(f, Mode::resonator2)),
        s1(qubit_lowering(f, Qubit::q1)),
        s2(qubit_lowering(f, Qubit::q2)),
        sc(qubit_lowering(f, Qubit::qc)) {}

  Operator a1, a2, s1, s2, sc;
};

Operator jc_sites(const SystemParams& p, const Elementary& op, double resonator_w) {
  auto site = [&](const Operator& a, const Operator& s) {
    return p.epsilon * (s.adjoint() * s) + resonator_w * (a.adjoint() * a) + p.g * (s.adjoint() * a + s * a.adjoint());
  };
  return site(op.a1, op.s1) + site(op.a2, op.s2);
}

Operator hopping(const Elementary& op) { return op.a1.adjoint() * op.a2 + op.a1 * op.a2.adjoint(); }

}  // namespace

double SystemParams::chi() const {
  if (delta_c() == 0.0) throw Error(ErrorKind::invalid_argument, "knob detuning Delta_c = epsilon_c - w is zero");
  return g_c * g_c / delta_c();
}

double SystemParams::shifted_w(Level knob) const { return knob == Level::g ? w - chi() : w + chi(); }

void SystemParams::validate() const {
  require_finite(epsilon, "epsilon");
  require_finite(epsilon_c, "epsilon_c");
  require_finite(w, "w");
  require_finite(g, "g");
  require_finite(g_c, "g_c");
  require_finite(kappa0, "kappa0");
  require_finite(Omega, "Omega");
  require_finite(w_d, "w_d");
  if (!(g > 0.0)) throw Error(ErrorKind::invalid_argument, "g must be positive");
  if (g_c < 0.0) throw Error(ErrorKind::invalid_argument, "g_c must be non-negative");
  if (kappa0 < 0.0) throw Error(ErrorKind::invalid_argument, "kappa0 must be non-negative");
  if (Omega < 0.0) throw Error(ErrorKind::invalid_argument, "Omega must be non-negative");
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be at least 1");
}

std::optional<std::string> SystemParams::dispersive_warning() const {
  if (delta_c() == 0.0) return "knob is resonant with the resonators (Delta_c = 0); dispersive treatment invalid";
  double ratio = std::abs(g_c / delta_c());
  if (ratio >= 0.5) return "knob outside the dispersive regime: |g_c/Delta_c| = " + std::to_string(ratio) + " >= 0.5";
  return std::nullopt;
}

SystemParams SystemParams::knob_switch_defaults() {
  SystemParams p;
  p.epsilon = 45.0;
  return p;
}

SystemParams SystemParams::spectrum_defaults() { return SystemParams{}; }

SystemParams SystemParams::phase_rabi_defaults() {
  SystemParams p;
  p.Omega = 0.07;
  p.w_d = 50.2750;
  return p;
}

Operator build_H_full(const SystemParams& p, const BasisPtr& basis) {
  p.validate();
  auto f = full_basis_for(p, basis);
  Elementary op(f);
  Operator h = jc_sites(p, op, p.w);
  h = h + p.epsilon_c * (op.sc.adjoint() * op.sc);
  h = h + p.g_c * (op.sc.adjoint() * op.a1 + op.sc.adjoint() * op.a2 + op.a1.adjoint() * op.sc + op.a2.adjoint() * op.sc);
  h = h + p.kappa0 * hopping(op);
  return finish(h, basis);
}

Operator build_H_eff(const SystemParams& p, const BasisPtr& basis) {
  p.validate();
  if (p.delta_c() == 0.0) throw Error(ErrorKind::invalid_argument, "effective Hamiltonian needs Delta_c != 0");
  auto f = full_basis_for(p, basis);
  Elementary op(f);
  const double chi = p.chi();
  const Operator pe = excited_projector(f, Qubit::qc);
  const Operator pg = identity(f) - pe;
  const Operator photons = number(f, Mode::resonator1) + number(f, Mode::resonator2);

  Operator h = jc_sites(p, op, p.w);
  h = h - chi * (photons * pg);
  h = h + (p.epsilon_c + 2.0 * chi) * pe + chi * (photons * pe);
  h = h + (p.kappa0 * identity(f) + chi * sigma_z(f, Qubit::qc)) * hopping(op);
  return finish(h, basis);
}

Operator build_dispersive_unitary(const SystemParams& p, const BasisPtr& basis) {
  p.validate();
  if (p.delta_c() == 0.0) throw Error(ErrorKind::invalid_argument, "dispersive transformation needs Delta_c != 0");
  auto f = full_basis_for(p, basis);
  Elementary op(f);
  const Operator scp = op.sc.adjoint();
  const Operator gen = (p.g_c / p.delta_c()) * (op.a1 * scp - op.a1.adjoint() * op.sc + op.a2 * scp - op.a2.adjoint() * op.sc);
  // gen is anti-Hermitian: exp(gen) = exp(-i K) with K = i gen Hermitian.
  const Matrix k = cplx(0.0, 1.0) * gen.matrix();
  return finish(Operator(f, linalg::exp_minus_i(k, 1.0)), basis);
}

Operator build_qubit_knob_exchange(const SystemParams& p, const BasisPtr& basis) {
  p.validate();
  auto f = full_basis_for(p, basis);
  Elementary op(f);
  const double c = p.g * p.g_c / p.delta_c();
  Operator x = op.s1.adjoint() * op.sc + op.sc.adjoint() * op.s1 + op.s2.adjoint() * op.sc + op.sc.adjoint() * op.s2;
  return finish(c * x, basis);
}

Operator build_H_driven_rotating(const SystemParams& p, const BasisPtr& basis) {
  p.validate();
  if (!(p.w_d > 0.0) && p.Omega > 0.0) throw Error(ErrorKind::invalid_argument, "drive frequency w_d must be positive");
  auto f = full_basis_for(p, basis);
  Operator sc = qubit_lowering(f, Qubit::qc);
  Operator h = build_H_full(p, f) - p.w_d * total_excitation(f) + p.Omega * (sc + sc.adjoint());
  return finish(h, basis);
}

Operator build_drive_raising(const BasisPtr& basis) {
  auto f = basis->sector() ? Basis::build(basis->n_max()) : basis;
  Operator raise = qubit_raising(f, Qubit::qc);
  if (raise.domain() == basis) return raise;
  return restrict_to(raise, basis);
}

double hopping_coefficient(const Operator& h, Level knob) {
  const Basis& b = h.basis();
  auto from = b.index_of(BasisState{1, 0, Level::g, Level::g, knob});
  auto to = b.index_of(BasisState{0, 1, Level::g, Level::g, knob});
  if (!from || !to) throw Error(ErrorKind::invalid_argument, "basis lacks the single-photon states needed to read the hopping");
  return h.matrix()(static_cast<Eigen::Index>(*to), static_cast<Eigen::Index>(*from)).real();
}

}  // namespace jch
