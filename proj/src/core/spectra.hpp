#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "core/hamiltonian.hpp"
#include "core/hilbert.hpp"

namespace jch {

struct EigenDecomposition {
  BasisPtr basis;
  Eigen::VectorXd values;     // ascending
  Matrix vectors;             // column l is |psi^l>
  Eigen::VectorXd residuals;  // ||H v_l - E_l v_l||

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  Vector vector(std::size_t l) const { return vectors.col(static_cast<Eigen::Index>(l)); }
};

// Eigenvalue groups closer than this are treated as degenerate.
inline constexpr double kDegeneracyGap = 1e-8;

// Ascending eigenvalues with orthonormal eigenvectors. Degenerate subspaces
// are rotated onto the basis coordinate vectors (greedy, lowest index first)
// and every eigenvector is phase-fixed so that its largest-magnitude
// component is real and positive, ties going to the lowest basis index.
// Rejects input whose Hermiticity defect exceeds 1e-12.
EigenDecomposition eig_hermitian(const Operator& op);

// Re-chooses the eigenvectors inside each degenerate group so they align with
// `references` (taken in order of largest projection) and re-applies the
// phase convention. Used when a physically meaningful labelling exists.
void align_degenerate(EigenDecomposition& eig, const std::vector<Vector>& references);

enum class Branch { lower, upper };

struct PolaritonState {
  int n = 0;
  Branch branch = Branch::lower;
  double theta = 0.0;   // mixing angle, tan(theta) = (D/2 + sqrt(D^2/4 + n g^2)) / (sqrt(n) g)
  double energy = 0.0;  // n w' + D/2 -/+ sqrt(D^2/4 + n g^2)
  int resonator = 1;

  // Amplitudes on |n-1, e> and |n, g> of the resonator.
  double amp_excited() const;
  double amp_ground() const;
};

struct PolaritonPair {
  PolaritonState lower;
  std::optional<PolaritonState> upper;  // absent for n = 0
};

// Single-site dressed states with resonator frequency `wprime`
// (D = epsilon - wprime). For n = 0 only the zero-polariton |0, g> exists.
PolaritonPair polariton_states(const SystemParams& p, double wprime, int n, int resonator = 1);

// A site label |n+> / |n-> (|0-> is the empty site).
struct SiteLabel {
  int n = 0;
  Branch branch = Branch::lower;
};

// |s1>_1 |s2>_2 |knob> over `basis` built from analytic polaritons at `wprime`.
Vector polariton_product(const BasisPtr& basis, const SystemParams& p, double wprime, SiteLabel s1, SiteLabel s2, Level knob);

// u_r = E(|2-,0->) - E(|1-,1->) = -D/2 + 2 sqrt(D^2/4 + g^2) - sqrt(D^2/4 + 2 g^2).
double repulsion_energy(const SystemParams& p, double wprime);

// The same splitting from diagonalising two uncoupled JC sites at `wprime`
// in the two-excitation sector.
double repulsion_energy_numeric(const SystemParams& p, double wprime);

struct TwoPolaritonSpectrum {
  BasisPtr basis;  // 16 states: two resonator excitations, knob g or e
  EigenDecomposition eig;
  Operator h_eff;
};

// Spectrum of the effective Hamiltonian with two polaritons in the
// resonators. Degenerate levels are aligned with the polariton product states.
TwoPolaritonSpectrum two_polariton_spectrum(const SystemParams& p);

// phi_e^1 = 1/2|2-,0-> + 1/2|0-,2-> - (sqrt2/2)|1-,1->,
// phi_e^2 = (sqrt2/2)(|2-,0-> - |0-,2->),
// phi_e^3 = 1/2|2-,0-> + 1/2|0-,2-> + (sqrt2/2)|1-,1->,
// all with the knob excited and polaritons at the e^c-branch w' = w + chi.
std::array<Vector, 3> delocalized_reference_states(const SystemParams& p, const BasisPtr& basis);

// T(k, j) = |<psi^k| raise |psi^j>|.
Eigen::MatrixXd transition_elements(const EigenDecomposition& eig, const Operator& raise);

struct DriveResonance {
  double w_d = 0.0;    // E_9 - E_1
  double delta = 0.0;  // min(E_2, E_10 - E_9 - E_2), energies measured from E_1
  bool usable = false; // delta > 0
};

DriveResonance resonance_and_detuning(const EigenDecomposition& eig);

}  // namespace jch
