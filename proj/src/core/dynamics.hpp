#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "core/hamiltonian.hpp"
#include "core/hilbert.hpp"

namespace jch {

struct StateVector {
  BasisPtr basis;
  Vector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

StateVector basis_state(const BasisPtr& basis, const BasisState& s);

// psi(t) = V exp(-i Lambda t) V^dag psi0 for every requested time.
std::vector<StateVector> propagate_static(const Operator& h, const StateVector& psi0, const std::vector<double>& times);

struct IntegratorOptions {
  double max_step = 2.5e-4;      // 1/g
  double norm_tolerance = 1e-7;  // allowed | ||psi|| - 1 | at any sample
};

// Fixed-step RK4 integration of i d/dt psi = H_tot(t) psi with
// H_tot(t) = H + Omega (sigma_c+ e^{-i w_d t} + sigma_c- e^{i w_d t}) in the
// lab frame. The step is the largest value <= max_step that divides every
// sampling interval evenly. Throws Error(numerical) when the norm drifts past
// the tolerance.
std::vector<StateVector> propagate_timedep(const SystemParams& p, const StateVector& psi0, const std::vector<double>& times,
                                           const IntegratorOptions& opts = {});

// Rotating-frame propagation under build_H_driven_rotating followed by the
// lab-frame map exp(-i w_d t N_tot).
std::vector<StateVector> propagate_driven(const SystemParams& p, const StateVector& psi0, const std::vector<double>& times);

// Applies exp(-i w_d t N_tot) to rotating-frame states.
std::vector<StateVector> to_lab_frame(const std::vector<StateVector>& rotating, double w_d, const std::vector<double>& times);

struct TimeSeries {
  std::vector<double> t;
  std::vector<std::pair<std::string, std::vector<double>>> channels;

  const std::vector<double>& channel(const std::string& name) const;
  void add_channel(std::string name, std::vector<double> values);
  // Header `t,<channels...>`, 12 significant digits.
  void write_csv(std::ostream& os) const;
};

// <psi|O|psi> for a Hermitian O.
struct Expectation {
  std::string name;
  Operator op;
};

// |<ref|psi>|.
struct Overlap {
  std::string name;
  Vector ref;
};

using Channel = std::variant<Expectation, Overlap>;

TimeSeries observe(const std::vector<StateVector>& states, const std::vector<double>& times, const std::vector<Channel>& channels);

std::vector<double> linspace(double start, double stop, std::size_t count);

// Largest ||a - b|| over paired trajectories.
double max_state_distance(const std::vector<StateVector>& a, const std::vector<StateVector>& b);

}  // namespace jch
