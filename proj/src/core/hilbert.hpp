#pragma once

// Truncated joint Hilbert space of two resonators (photon cutoff n_max each)
// and three two-level systems: the resonator qubits q1, q2 and the knob qc.
//
// Basis ordering is lexicographic in (n1, n2, q1, q2, qc) with g < e, so the
// position of a state in the unconstrained basis is
//   (((n1 * (n_max + 1) + n2) * 2 + q1) * 2 + q2) * 2 + qc.
// Sector-restricted and selected bases keep the same relative order.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jch {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Error categories mirror the status codes of the C API.
enum class ErrorKind { invalid_argument, dimension_mismatch, numerical, io, unknown_key, bad_value };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class Level : unsigned char { g = 0, e = 1 };

char to_char(Level l);

enum class Mode { resonator1 = 1, resonator2 = 2 };
enum class Qubit { q1, q2, qc };

struct BasisState {
  int n1 = 0;
  int n2 = 0;
  Level q1 = Level::g;
  Level q2 = Level::g;
  Level qc = Level::g;

  int excitation_total() const;
  // Photons plus resonator-qubit excitations, i.e. everything but the knob.
  int resonator_excitations() const;
  // "|n1 n2 q1 q2 qc>", e.g. "|1 0 g g e>".
  std::string label() const;

  auto operator<=>(const BasisState&) const = default;
};

class Basis {
 public:
  // Unconstrained when sector is empty; otherwise only states with
  // excitation_total() == *sector.
  static std::shared_ptr<const Basis> build(int n_max, std::optional<int> sector = std::nullopt);

  // Subset of the unconstrained basis kept by `keep`, in canonical order.
  static std::shared_ptr<const Basis> select(int n_max, const std::function<bool(const BasisState&)>& keep);

  std::size_t size() const { return states_.size(); }
  int n_max() const { return n_max_; }
  std::optional<int> sector() const { return sector_; }
  const BasisState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<BasisState>& states() const { return states_; }

  std::optional<std::size_t> index_of(const BasisState& s) const;
  // Position of a state in the unconstrained basis with this cutoff.
  std::size_t full_index(const BasisState& s) const;
  bool contains(const BasisState& s) const { return index_of(s).has_value(); }

  // Unit vector on `s`; throws if `s` is not in this basis.
  Vector ket(const BasisState& s) const;

  bool same_as(const Basis& other) const;

 private:
  Basis(int n_max, std::optional<int> sector, std::vector<BasisState> states);

  int n_max_;
  std::optional<int> sector_;
  std::vector<BasisState> states_;
  std::vector<long> lookup_;  // full index -> position, -1 if absent
};

using BasisPtr = std::shared_ptr<const Basis>;

// Dense complex matrix mapping amplitudes over `domain` to amplitudes over
// `codomain`. Square operators have domain == codomain.
class Operator {
 public:
  Operator(BasisPtr basis, Matrix m);
  Operator(BasisPtr codomain, BasisPtr domain, Matrix m);

  const Matrix& matrix() const { return m_; }
  const BasisPtr& domain() const { return domain_; }
  const BasisPtr& codomain() const { return codomain_; }
  const Basis& basis() const { return *domain_; }
  bool is_square() const { return domain_ == codomain_ || domain_->same_as(*codomain_); }

  double hermiticity_defect() const;  // max |M - M^dagger|
  bool is_hermitian(double tol = 1e-12) const;

  Operator adjoint() const;

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, const Operator& a);
  friend Operator operator*(double s, const Operator& a);

 private:
  BasisPtr codomain_;
  BasisPtr domain_;
  Matrix m_;
};

Operator identity(const BasisPtr& basis);
Operator zero(const BasisPtr& basis);

// Commutator [a, b] of two square operators on the same basis.
Operator commutator(const Operator& a, const Operator& b);

// Block of `full` between two bases that share its cutoff. Used to restrict
// operators built on the unconstrained basis to invariant subspaces and to
// produce rectangular sector-to-sector maps.
Operator restrict_to(const Operator& full, const BasisPtr& codomain, const BasisPtr& domain);
inline Operator restrict_to(const Operator& full, const BasisPtr& sub) { return restrict_to(full, sub, sub); }

// Embeds a vector over `sub` into `target` (zero-padded); both must share the
// cutoff and every state of `sub` must appear in `target`.
Vector embed(const Vector& v, const Basis& sub, const Basis& target);

// Elementary operators. On an unconstrained basis they are square. On a
// sector-N basis the lowering maps return the rectangular map into sector
// N-1 (empty codomain when N == 0).
Operator annihilator(const BasisPtr& basis, Mode mode);
Operator creator(const BasisPtr& basis, Mode mode);
Operator qubit_lowering(const BasisPtr& basis, Qubit which);
Operator qubit_raising(const BasisPtr& basis, Qubit which);

// Diagonal operators (square on any basis).
Operator number(const BasisPtr& basis, Mode mode);
Operator excited_projector(const BasisPtr& basis, Qubit which);
Operator sigma_z(const BasisPtr& basis, Qubit which);
Operator polariton_number(const BasisPtr& basis, Mode resonator);
Operator total_excitation(const BasisPtr& basis);

Mode mode_from_index(int i);
Qubit qubit_from_name(const std::string& name);

}  // namespace jch
