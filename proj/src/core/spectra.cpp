#include "core/spectra.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace jch {

namespace {

constexpr double kTieTolerance = 1e-10;

void fix_phase(Eigen::Ref<Vector> v) {
  const Eigen::Index n = v.size();
  if (n == 0) return;
  double best = v.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) >= best - kTieTolerance) {
      pick = i;
      break;
    }
  }
  const cplx c = v(pick);
  v *= std::conj(c) / std::abs(c);
  v(pick) = std::abs(v(pick));
}

// Greedy re-choice of an orthonormal basis of span(cols) so that each new
// vector is the normalised remaining projection of the reference with the
// largest such projection.
Matrix align_group(const Matrix& cols, const std::vector<Vector>& refs) {
  const Eigen::Index d = cols.cols();
  Matrix chosen(cols.rows(), 0);
  std::vector<bool> used(refs.size(), false);

  auto remaining = [&](const Vector& r) -> Vector {
    Vector p = cols * (cols.adjoint() * r);
    if (chosen.cols() > 0) p -= chosen * (chosen.adjoint() * p);
    return p;
  };

  while (chosen.cols() < d) {
    double best = 1e-8;
    std::optional<std::size_t> pick;
    Vector pick_vec;
    for (std::size_t k = 0; k < refs.size(); ++k) {
      if (used[k]) continue;
      Vector p = remaining(refs[k]);
      double nrm = p.norm();
      if (nrm > best + kTieTolerance) {
        best = nrm;
        pick = k;
        pick_vec = p;
      }
    }
    if (!pick) break;
    used[*pick] = true;
    chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
    chosen.col(chosen.cols() - 1) = pick_vec / pick_vec.norm();
  }
  // References exhausted: complete from the solver's own columns.
  for (Eigen::Index j = 0; j < d && chosen.cols() < d; ++j) {
    Vector p = cols.col(j);
    if (chosen.cols() > 0) p -= chosen * (chosen.adjoint() * p);
    if (p.norm() < 1e-8) continue;
    chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
    chosen.col(chosen.cols() - 1) = p / p.norm();
  }
  return chosen;
}

template <class F>
void for_each_degenerate_group(const Eigen::VectorXd& values, F&& f) {
  const Eigen::Index n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(end) - values(end - 1) < kDegeneracyGap) ++end;
    if (end - start > 1) f(start, end - start);
    start = end;
  }
}

void compute_residuals(EigenDecomposition& eig, const Matrix& h) {
  eig.residuals.resize(eig.values.size());
  for (Eigen::Index l = 0; l < eig.values.size(); ++l)
    eig.residuals(l) = (h * eig.vectors.col(l) - eig.values(l) * eig.vectors.col(l)).norm();
}

double jc_root(const SystemParams& p, double detuning, int n) {
  return std::sqrt(detuning * detuning / 4.0 + n * p.g * p.g);
}

}  // namespace

EigenDecomposition eig_hermitian(const Operator& op) {
  if (!op.is_square()) throw Error(ErrorKind::dimension_mismatch, "eigendecomposition needs a square operator");
  const double defect = op.hermiticity_defect();
  if (!(defect < 1e-12))
    throw Error(ErrorKind::invalid_argument, "operator is not Hermitian (max |M - M^dag| = " + std::to_string(defect) + ")");

  EigenDecomposition eig;
  eig.basis = op.domain();
  const Eigen::Index n = op.matrix().rows();
  if (n == 0) {
    eig.values.resize(0);
    eig.vectors.resize(0, 0);
    eig.residuals.resize(0);
    return eig;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numerical, "Hermitian eigensolver did not converge");
  eig.values = es.eigenvalues();
  eig.vectors = es.eigenvectors();

  std::vector<Vector> coords;
  coords.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) coords.push_back(Vector::Unit(n, i));
  align_degenerate(eig, coords);
  compute_residuals(eig, op.matrix());
  return eig;
}

void align_degenerate(EigenDecomposition& eig, const std::vector<Vector>& references) {
  for_each_degenerate_group(eig.values, [&](Eigen::Index start, Eigen::Index count) {
    Matrix cols = eig.vectors.middleCols(start, count);
    Matrix aligned = align_group(cols, references);
    if (aligned.cols() == count) eig.vectors.middleCols(start, count) = aligned;
  });
  for (Eigen::Index l = 0; l < eig.vectors.cols(); ++l) fix_phase(eig.vectors.col(l));
}

double PolaritonState::amp_excited() const {
  if (n == 0) return 0.0;
  return branch == Branch::lower ? std::cos(theta) : std::sin(theta);
}

double PolaritonState::amp_ground() const {
  if (n == 0) return 1.0;
  return branch == Branch::lower ? -std::sin(theta) : std::cos(theta);
}

PolaritonPair polariton_states(const SystemParams& p, double wprime, int n, int resonator) {
  if (n < 0) throw Error(ErrorKind::invalid_argument, "polariton number must be non-negative");
  if (resonator != 1 && resonator != 2) throw Error(ErrorKind::invalid_argument, "resonator index must be 1 or 2");
  PolaritonPair out;
  if (n == 0) {
    out.lower = PolaritonState{0, Branch::lower, 0.0, 0.0, resonator};
    return out;
  }
  const double detuning = p.epsilon - wprime;
  const double root = jc_root(p, detuning, n);
  const double theta = std::atan2(detuning / 2.0 + root, std::sqrt(static_cast<double>(n)) * p.g);
  const double center = n * wprime + detuning / 2.0;
  out.lower = PolaritonState{n, Branch::lower, theta, center - root, resonator};
  out.upper = PolaritonState{n, Branch::upper, theta, center + root, resonator};
  return out;
}

Vector polariton_product(const BasisPtr& basis, const SystemParams& p, double wprime, SiteLabel s1, SiteLabel s2, Level knob) {
  auto site = [&](SiteLabel s, int resonator) {
    auto pair = polariton_states(p, wprime, s.n, resonator);
    if (s.n == 0 && s.branch == Branch::upper) throw Error(ErrorKind::invalid_argument, "no upper zero-polariton state");
    return s.branch == Branch::lower ? pair.lower : *pair.upper;
  };
  const PolaritonState a = site(s1, 1);
  const PolaritonState b = site(s2, 2);

  struct Component {
    int photons;
    Level qubit;
    double amp;
  };
  auto components = [](const PolaritonState& s) {
    std::vector<Component> c;
    if (s.n == 0) return std::vector<Component>{{0, Level::g, 1.0}};
    c.push_back({s.n - 1, Level::e, s.amp_excited()});
    c.push_back({s.n, Level::g, s.amp_ground()});
    return c;
  };

  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
  for (const auto& ca : components(a))
    for (const auto& cb : components(b)) {
      BasisState st{ca.photons, cb.photons, ca.qubit, cb.qubit, knob};
      auto i = basis->index_of(st);
      if (!i) {
        if (ca.amp * cb.amp == 0.0) continue;
        throw Error(ErrorKind::dimension_mismatch, "basis lacks product-state component " + st.label());
      }
      v(static_cast<Eigen::Index>(*i)) += ca.amp * cb.amp;
    }
  return v;
}

double repulsion_energy(const SystemParams& p, double wprime) {
  const double detuning = p.epsilon - wprime;
  return -detuning / 2.0 + 2.0 * jc_root(p, detuning, 1) - jc_root(p, detuning, 2);
}

double repulsion_energy_numeric(const SystemParams& p, double wprime) {
  SystemParams sites = p;
  sites.w = wprime;
  sites.g_c = 0.0;
  sites.kappa0 = 0.0;
  sites.epsilon_c = wprime + 1.0;  // knob is decoupled; any nonzero detuning
  sites.n_max = std::max(p.n_max, 2);
  auto basis = Basis::select(sites.n_max, [](const BasisState& s) { return s.qc == Level::g && s.resonator_excitations() == 2; });
  auto eig = eig_hermitian(build_H_full(sites, basis));

  auto energy_of = [&](const Vector& ref) {
    Eigen::Index best = 0;
    double overlap = -1.0;
    for (Eigen::Index l = 0; l < eig.vectors.cols(); ++l) {
      double o = std::abs(eig.vectors.col(l).dot(ref));
      if (o > overlap) {
        overlap = o;
        best = l;
      }
    }
    return eig.values(best);
  };
  const Vector ll = polariton_product(basis, sites, wprime, {1, Branch::lower}, {1, Branch::lower}, Level::g);
  const Vector l0 = polariton_product(basis, sites, wprime, {2, Branch::lower}, {0, Branch::lower}, Level::g);
  return energy_of(l0) - energy_of(ll);
}

namespace {

std::vector<SiteLabel> two_polariton_site_pairs_flat() {
  // Lower-branch manifold first, in order of increasing energy for the
  // uncoupled sites, then the mixed and upper-branch states.
  return {{1, Branch::lower}, {1, Branch::lower}, {2, Branch::lower}, {0, Branch::lower}, {0, Branch::lower}, {2, Branch::lower},
          {1, Branch::lower}, {1, Branch::upper}, {1, Branch::upper}, {1, Branch::lower}, {2, Branch::upper}, {0, Branch::lower},
          {0, Branch::lower}, {2, Branch::upper}, {1, Branch::upper}, {1, Branch::upper}};
}

}  // namespace

TwoPolaritonSpectrum two_polariton_spectrum(const SystemParams& p) {
  if (p.n_max < 2) throw Error(ErrorKind::invalid_argument, "two-polariton spectrum needs n_max >= 2");
  auto basis = Basis::select(p.n_max, [](const BasisState& s) { return s.resonator_excitations() == 2; });
  Operator h = build_H_eff(p, basis);
  EigenDecomposition eig = eig_hermitian(h);

  std::vector<Vector> refs;
  const auto pairs = two_polariton_site_pairs_flat();
  for (Level knob : {Level::g, Level::e}) {
    const double wprime = p.shifted_w(knob);
    for (std::size_t k = 0; k + 1 < pairs.size(); k += 2)
      refs.push_back(polariton_product(basis, p, wprime, pairs[k], pairs[k + 1], knob));
  }
  align_degenerate(eig, refs);
  compute_residuals(eig, h.matrix());
  return TwoPolaritonSpectrum{basis, std::move(eig), std::move(h)};
}

std::array<Vector, 3> delocalized_reference_states(const SystemParams& p, const BasisPtr& basis) {
  const double wprime = p.shifted_w(Level::e);
  const Vector s20 = polariton_product(basis, p, wprime, {2, Branch::lower}, {0, Branch::lower}, Level::e);
  const Vector s02 = polariton_product(basis, p, wprime, {0, Branch::lower}, {2, Branch::lower}, Level::e);
  const Vector s11 = polariton_product(basis, p, wprime, {1, Branch::lower}, {1, Branch::lower}, Level::e);
  const double h = std::numbers::sqrt2 / 2.0;
  return {0.5 * s20 + 0.5 * s02 - h * s11, h * (s20 - s02), 0.5 * s20 + 0.5 * s02 + h * s11};
}

Eigen::MatrixXd transition_elements(const EigenDecomposition& eig, const Operator& raise) {
  if (!raise.is_square() || !raise.domain()->same_as(*eig.basis))
    throw Error(ErrorKind::dimension_mismatch, "transition operator basis does not match the eigendecomposition");
  return (eig.vectors.adjoint() * raise.matrix() * eig.vectors).cwiseAbs();
}

DriveResonance resonance_and_detuning(const EigenDecomposition& eig) {
  if (eig.size() < 10) throw Error(ErrorKind::invalid_argument, "resonance analysis needs at least 10 levels");
  const auto& e = eig.values;
  DriveResonance r;
  const double e2 = e(1) - e(0);
  const double e9 = e(8) - e(0);
  const double e10 = e(9) - e(0);
  r.w_d = e9;
  r.delta = std::min(e2, e10 - e9 - e2);
  r.usable = r.delta > 1e-12;
  return r;
}

}  // namespace jch
