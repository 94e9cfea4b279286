#include "core/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace jch {

char to_char(Level l) { return l == Level::g ? 'g' : 'e'; }

namespace {

int bit(Level l) { return l == Level::e ? 1 : 0; }

Level& qubit_ref(BasisState& s, Qubit which) {
  switch (which) {
    case Qubit::q1: return s.q1;
    case Qubit::q2: return s.q2;
    case Qubit::qc: return s.qc;
  }
  throw Error(ErrorKind::invalid_argument, "unknown qubit");
}

Level qubit_of(const BasisState& s, Qubit which) {
  BasisState copy = s;
  return qubit_ref(copy, which);
}

int photons(const BasisState& s, Mode mode) { return mode == Mode::resonator1 ? s.n1 : s.n2; }

void check_mode(Mode mode) {
  if (mode != Mode::resonator1 && mode != Mode::resonator2)
    throw Error(ErrorKind::invalid_argument, "unknown resonator mode index " + std::to_string(static_cast<int>(mode)));
}

using StateMap = std::function<std::optional<std::pair<double, BasisState>>(const BasisState&)>;

// Matrix of a single-valued map between basis states; images that fall
// outside the codomain are dropped (truncation).
Operator from_map(const BasisPtr& codomain, const BasisPtr& domain, const StateMap& f) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(codomain->size()), static_cast<Eigen::Index>(domain->size()));
  for (std::size_t j = 0; j < domain->size(); ++j) {
    auto image = f((*domain)[j]);
    if (!image) continue;
    auto i = codomain->index_of(image->second);
    if (i) m(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) += image->first;
  }
  return Operator(codomain, domain, std::move(m));
}

Operator diagonal(const BasisPtr& basis, const std::function<double(const BasisState&)>& f) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(basis->size()), static_cast<Eigen::Index>(basis->size()));
  for (std::size_t i = 0; i < basis->size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = f((*basis)[i]);
  return Operator(basis, std::move(m));
}

// Codomain of a map that lowers the excitation number by one.
BasisPtr lowered_codomain(const BasisPtr& basis) {
  if (!basis->sector()) return basis;
  int target = *basis->sector() - 1;
  if (target < 0) return Basis::select(basis->n_max(), [](const BasisState&) { return false; });
  return Basis::build(basis->n_max(), target);
}

}  // namespace

int BasisState::excitation_total() const { return n1 + n2 + bit(q1) + bit(q2) + bit(qc); }

int BasisState::resonator_excitations() const { return n1 + n2 + bit(q1) + bit(q2); }

std::string BasisState::label() const {
  std::ostringstream os;
  os << '|' << n1 << ' ' << n2 << ' ' << to_char(q1) << ' ' << to_char(q2) << ' ' << to_char(qc) << '>';
  return os.str();
}

Basis::Basis(int n_max, std::optional<int> sector, std::vector<BasisState> states)
    : n_max_(n_max), sector_(sector), states_(std::move(states)) {
  const std::size_t full = static_cast<std::size_t>((n_max_ + 1) * (n_max_ + 1) * 8);
  lookup_.assign(full, -1);
  for (std::size_t i = 0; i < states_.size(); ++i) lookup_[full_index(states_[i])] = static_cast<long>(i);
}

std::shared_ptr<const Basis> Basis::build(int n_max, std::optional<int> sector) {
  if (n_max < 0)
    throw Error(ErrorKind::invalid_argument, "photon cutoff n_max must be non-negative, got " + std::to_string(n_max));
  if (sector && (*sector < 0 || *sector > 2 * n_max + 3))
    throw Error(ErrorKind::invalid_argument, "excitation sector " + std::to_string(*sector) +
                                                 " is unreachable with n_max=" + std::to_string(n_max) +
                                                 " (valid range 0.." + std::to_string(2 * n_max + 3) + ")");
  std::vector<BasisState> states;
  for (int n1 = 0; n1 <= n_max; ++n1)
    for (int n2 = 0; n2 <= n_max; ++n2)
      for (Level q1 : {Level::g, Level::e})
        for (Level q2 : {Level::g, Level::e})
          for (Level qc : {Level::g, Level::e}) {
            BasisState s{n1, n2, q1, q2, qc};
            if (!sector || s.excitation_total() == *sector) states.push_back(s);
          }
  return std::shared_ptr<const Basis>(new Basis(n_max, sector, std::move(states)));
}

std::shared_ptr<const Basis> Basis::select(int n_max, const std::function<bool(const BasisState&)>& keep) {
  auto full = build(n_max);
  std::vector<BasisState> states;
  for (const auto& s : full->states())
    if (keep(s)) states.push_back(s);
  return std::shared_ptr<const Basis>(new Basis(n_max, std::nullopt, std::move(states)));
}

std::size_t Basis::full_index(const BasisState& s) const {
  const auto d = static_cast<std::size_t>(n_max_ + 1);
  return (((static_cast<std::size_t>(s.n1) * d + static_cast<std::size_t>(s.n2)) * 2 + static_cast<std::size_t>(bit(s.q1))) * 2 +
          static_cast<std::size_t>(bit(s.q2))) * 2 +
         static_cast<std::size_t>(bit(s.qc));
}

std::optional<std::size_t> Basis::index_of(const BasisState& s) const {
  if (s.n1 < 0 || s.n2 < 0 || s.n1 > n_max_ || s.n2 > n_max_) return std::nullopt;
  long pos = lookup_[full_index(s)];
  if (pos < 0) return std::nullopt;
  return static_cast<std::size_t>(pos);
}

Vector Basis::ket(const BasisState& s) const {
  auto i = index_of(s);
  if (!i) throw Error(ErrorKind::invalid_argument, "state " + s.label() + " is not in the basis");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(size()));
  v(static_cast<Eigen::Index>(*i)) = 1.0;
  return v;
}

bool Basis::same_as(const Basis& other) const {
  return this == &other || (n_max_ == other.n_max_ && sector_ == other.sector_ && states_ == other.states_);
}

Operator::Operator(BasisPtr basis, Matrix m) : Operator(basis, basis, std::move(m)) {}

Operator::Operator(BasisPtr codomain, BasisPtr domain, Matrix m)
    : codomain_(std::move(codomain)), domain_(std::move(domain)), m_(std::move(m)) {
  if (!codomain_ || !domain_) throw Error(ErrorKind::invalid_argument, "operator needs a basis");
  if (static_cast<std::size_t>(m_.rows()) != codomain_->size() || static_cast<std::size_t>(m_.cols()) != domain_->size())
    throw Error(ErrorKind::dimension_mismatch, "matrix shape does not match the basis dimensions");
}

double Operator::hermiticity_defect() const {
  if (m_.rows() != m_.cols()) return std::numeric_limits<double>::infinity();
  if (m_.size() == 0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double tol) const { return is_square() && hermiticity_defect() < tol; }

Operator Operator::adjoint() const { return Operator(domain_, codomain_, m_.adjoint()); }

Operator operator*(const Operator& a, const Operator& b) {
  if (!a.domain_->same_as(*b.codomain_)) throw Error(ErrorKind::dimension_mismatch, "operator product between incompatible bases");
  return Operator(a.codomain_, b.domain_, a.m_ * b.m_);
}

Operator operator+(const Operator& a, const Operator& b) {
  if (!a.domain_->same_as(*b.domain_) || !a.codomain_->same_as(*b.codomain_))
    throw Error(ErrorKind::dimension_mismatch, "operator sum between incompatible bases");
  return Operator(a.codomain_, a.domain_, a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) { return a + (-1.0) * b; }

Operator operator*(cplx s, const Operator& a) { return Operator(a.codomain_, a.domain_, s * a.m_); }

Operator operator*(double s, const Operator& a) { return Operator(a.codomain_, a.domain_, s * a.m_); }

Operator identity(const BasisPtr& basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  return Operator(basis, Matrix::Identity(n, n));
}

Operator zero(const BasisPtr& basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  return Operator(basis, Matrix::Zero(n, n));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator restrict_to(const Operator& full, const BasisPtr& codomain, const BasisPtr& domain) {
  const Basis& fc = *full.codomain();
  const Basis& fd = *full.domain();
  if (fc.n_max() != codomain->n_max() || fd.n_max() != domain->n_max())
    throw Error(ErrorKind::dimension_mismatch, "restriction between bases with different cutoffs");
  Matrix m(static_cast<Eigen::Index>(codomain->size()), static_cast<Eigen::Index>(domain->size()));
  for (std::size_t i = 0; i < codomain->size(); ++i) {
    auto fi = fc.index_of((*codomain)[i]);
    if (!fi) throw Error(ErrorKind::dimension_mismatch, "restriction codomain is not contained in the operator codomain");
    for (std::size_t j = 0; j < domain->size(); ++j) {
      auto fj = fd.index_of((*domain)[j]);
      if (!fj) throw Error(ErrorKind::dimension_mismatch, "restriction domain is not contained in the operator domain");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          full.matrix()(static_cast<Eigen::Index>(*fi), static_cast<Eigen::Index>(*fj));
    }
  }
  return Operator(codomain, domain, std::move(m));
}

Vector embed(const Vector& v, const Basis& sub, const Basis& target) {
  if (static_cast<std::size_t>(v.size()) != sub.size()) throw Error(ErrorKind::dimension_mismatch, "vector length does not match basis");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(target.size()));
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto t = target.index_of(sub[i]);
    if (!t) throw Error(ErrorKind::dimension_mismatch, "state " + sub[i].label() + " missing from target basis");
    out(static_cast<Eigen::Index>(*t)) = v(static_cast<Eigen::Index>(i));
  }
  return out;
}

Operator annihilator(const BasisPtr& basis, Mode mode) {
  check_mode(mode);
  return from_map(lowered_codomain(basis), basis, [mode](const BasisState& s) -> std::optional<std::pair<double, BasisState>> {
    int n = photons(s, mode);
    if (n == 0) return std::nullopt;
    BasisState t = s;
    (mode == Mode::resonator1 ? t.n1 : t.n2) -= 1;
    return std::make_pair(std::sqrt(static_cast<double>(n)), t);
  });
}

Operator creator(const BasisPtr& basis, Mode mode) {
  if (basis->sector()) {
    // a^dagger maps sector N to N + 1; build it as the adjoint of the lowering map out of N + 1.
    int up = *basis->sector() + 1;
    if (up > 2 * basis->n_max() + 3) {
      check_mode(mode);
      auto empty = Basis::select(basis->n_max(), [](const BasisState&) { return false; });
      return Operator(empty, basis, Matrix::Zero(0, static_cast<Eigen::Index>(basis->size())));
    }
    return annihilator(Basis::build(basis->n_max(), up), mode).adjoint();
  }
  return annihilator(basis, mode).adjoint();
}

Operator qubit_lowering(const BasisPtr& basis, Qubit which) {
  return from_map(lowered_codomain(basis), basis, [which](const BasisState& s) -> std::optional<std::pair<double, BasisState>> {
    if (qubit_of(s, which) == Level::g) return std::nullopt;
    BasisState t = s;
    qubit_ref(t, which) = Level::g;
    return std::make_pair(1.0, t);
  });
}

Operator qubit_raising(const BasisPtr& basis, Qubit which) {
  if (basis->sector()) {
    int up = *basis->sector() + 1;
    if (up > 2 * basis->n_max() + 3) {
      auto empty = Basis::select(basis->n_max(), [](const BasisState&) { return false; });
      return Operator(empty, basis, Matrix::Zero(0, static_cast<Eigen::Index>(basis->size())));
    }
    return qubit_lowering(Basis::build(basis->n_max(), up), which).adjoint();
  }
  return qubit_lowering(basis, which).adjoint();
}

Operator number(const BasisPtr& basis, Mode mode) {
  check_mode(mode);
  return diagonal(basis, [mode](const BasisState& s) { return static_cast<double>(photons(s, mode)); });
}

Operator excited_projector(const BasisPtr& basis, Qubit which) {
  return diagonal(basis, [which](const BasisState& s) { return qubit_of(s, which) == Level::e ? 1.0 : 0.0; });
}

Operator sigma_z(const BasisPtr& basis, Qubit which) {
  return diagonal(basis, [which](const BasisState& s) { return qubit_of(s, which) == Level::e ? 1.0 : -1.0; });
}

Operator polariton_number(const BasisPtr& basis, Mode resonator) {
  check_mode(resonator);
  Qubit local = resonator == Mode::resonator1 ? Qubit::q1 : Qubit::q2;
  return diagonal(basis, [resonator, local](const BasisState& s) {
    return static_cast<double>(photons(s, resonator)) + (qubit_of(s, local) == Level::e ? 1.0 : 0.0);
  });
}

Operator total_excitation(const BasisPtr& basis) {
  return diagonal(basis, [](const BasisState& s) { return static_cast<double>(s.excitation_total()); });
}

Mode mode_from_index(int i) {
  if (i == 1) return Mode::resonator1;
  if (i == 2) return Mode::resonator2;
  throw Error(ErrorKind::invalid_argument, "unknown resonator mode index " + std::to_string(i) + " (expected 1 or 2)");
}

Qubit qubit_from_name(const std::string& name) {
  if (name == "q1") return Qubit::q1;
  if (name == "q2") return Qubit::q2;
  if (name == "qc") return Qubit::qc;
  throw Error(ErrorKind::invalid_argument, "unknown qubit label '" + name + "' (expected q1, q2 or qc)");
}

}  // namespace jch
