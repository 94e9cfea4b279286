#pragma once

// Hamiltonians of the knob-coupled two-site Jaynes-Cummings-Hubbard system.
// All energies are in units of the resonator-qubit coupling g, times in 1/g,
// hbar = 1.

#include <optional>
#include <string>

#include "core/hilbert.hpp"

namespace jch {

struct SystemParams {
  double epsilon = 41.0;    // resonator-qubit transition frequency
  double epsilon_c = 50.0;  // knob-qubit transition frequency
  double w = 40.0;          // bare resonator frequency
  double g = 1.0;           // resonator-qubit coupling (energy unit)
  double g_c = 1.0;         // knob-resonator coupling
  double kappa0 = 0.1;      // capacitive photon hopping
  double Omega = 0.0;       // knob drive strength, 0 when undriven
  double w_d = 0.0;         // knob drive frequency
  int n_max = 4;            // photon cutoff per resonator

  double delta_c() const { return epsilon_c - w; }
  // Dispersive shift g_c^2 / Delta_c.
  double chi() const;
  // Stark-shifted resonator frequency seen with the knob in `knob`.
  double shifted_w(Level knob) const;

  // Throws jch::Error on invalid values (non-finite, g <= 0, negative g_c,
  // kappa0 or Omega, n_max < 1).
  void validate() const;
  // Set when |g_c / Delta_c| >= 0.5.
  std::optional<std::string> dispersive_warning() const;

  static SystemParams knob_switch_defaults();  // eps = 45
  static SystemParams spectrum_defaults();     // eps = 41
  static SystemParams phase_rabi_defaults();   // eps = 41, Omega = 0.07, w_d = 50.2750
};

// Sum over both sites of eps|e><e| + w a^dag a + g(sigma+ a + sigma- a^dag),
// the knob term eps_c|e><e| + g_c(sigma_c+ (a1 + a2) + h.c.) and the
// capacitive hopping kappa0 (a1^dag a2 + a1 a2^dag).
Operator build_H_full(const SystemParams& p, const BasisPtr& basis);

// Second-order dispersive Hamiltonian; block diagonal in the knob state with
// hopping kappa0 + chi * sigma_c^z.
Operator build_H_eff(const SystemParams& p, const BasisPtr& basis);

// exp[(g_c/Delta_c)(a1 sigma_c+ - a1^dag sigma_c- + a2 sigma_c+ - a2^dag sigma_c-)].
Operator build_dispersive_unitary(const SystemParams& p, const BasisPtr& basis);

// First-order qubit-knob exchange (g g_c / Delta_c) sum_i (sigma_i+ sigma_c- + h.c.)
// that U H U^dag generates but the effective Hamiltonian drops.
Operator build_qubit_knob_exchange(const SystemParams& p, const BasisPtr& basis);

// H - w_d N_tot + Omega (sigma_c+ + sigma_c-): the driven Hamiltonian in the
// frame rotating at w_d. Exact because H conserves N_tot.
Operator build_H_driven_rotating(const SystemParams& p, const BasisPtr& basis);

// sigma_c+ on `basis` (square); the lab-frame drive is
// Omega (e^{-i w_d t} D + e^{i w_d t} D^dag).
Operator build_drive_raising(const BasisPtr& basis);

// Coefficient of a1^dag a2 read from a Hamiltonian's matrix element
// <0 1 g g knob| H |1 0 g g knob>.
double hopping_coefficient(const Operator& h, Level knob);

}  // namespace jch
