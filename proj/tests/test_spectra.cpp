#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "core/spectra.hpp"

using namespace jch;

namespace {

// Single JC site with n excitations: {|n-1, e>, |n, g>} at resonator 1,
// resonator frequency `wprime`.
struct SiteBlock {
  BasisPtr basis;
  Operator h;
};

SiteBlock jc_block(double epsilon, double wprime, int n) {
  SystemParams q;
  q.epsilon = epsilon;
  q.w = wprime;
  q.g_c = 0.0;
  q.kappa0 = 0.0;
  auto b = Basis::select(q.n_max, [n](const BasisState& s) {
    return s.n2 == 0 && s.q2 == Level::g && s.qc == Level::g && s.resonator_excitations() == n;
  });
  return SiteBlock{b, build_H_full(q, b)};
}

SystemParams fig3() { return SystemParams::spectrum_defaults(); }

double overlap(const Vector& a, const Vector& b) { return std::abs(a.dot(b)); }

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("diagonal input") {
  auto b = Basis::build(0);
  Matrix m = Matrix::Zero(8, 8);
  const double d[8] = {3, -1, 2, 2, 7, 0, -4, 5};
  for (int i = 0; i < 8; ++i) m(i, i) = d[i];
  const auto eig = eig_hermitian(Operator(b, m));
  const double sorted[8] = {-4, -1, 0, 2, 2, 3, 5, 7};
  for (int i = 0; i < 8; ++i) CHECK(eig.values(i) == sorted[i]);
  CHECK(eig.vector(0).isApprox(b->ket((*b)[6])));
  // the degenerate pair is aligned to coordinate vectors, lowest index first
  CHECK(eig.vector(3).isApprox(b->ket((*b)[2])));
  CHECK(eig.vector(4).isApprox(b->ket((*b)[3])));
}

TEST_CASE("resonant JC doublet") {
  const auto blk = jc_block(40.0, 40.0, 1);
  const auto eig = eig_hermitian(blk.h);
  CHECK(eig.values(0) == doctest::Approx(39.0));
  CHECK(eig.values(1) == doctest::Approx(41.0));
}

TEST_CASE("random Hermitian reconstruction") {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  int kept = 0;
  auto b = Basis::select(4, [&kept](const BasisState&) { return kept++ < 50; });
  REQUIRE(b->size() == 50);
  Matrix a(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  const Matrix h = 0.5 * (a + a.adjoint());
  const auto eig = eig_hermitian(Operator(b, h));
  const Matrix rebuilt = eig.vectors * eig.values.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((eig.vectors.adjoint() * eig.vectors - Matrix::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(eig.residuals.maxCoeff() < 1e-10);
  CHECK(std::abs(h.trace().real() - eig.values.sum()) < 1e-9);
  for (Eigen::Index l = 1; l < 50; ++l) CHECK(eig.values(l) >= eig.values(l - 1));
  for (std::size_t l = 0; l < eig.size(); ++l) {
    const Vector v = eig.vector(l);
    Eigen::Index k = 0;
    const double top = v.cwiseAbs().maxCoeff(&k);
    CHECK(std::abs(v(k).imag()) < 1e-14);
    CHECK(v(k).real() == doctest::Approx(top));
    for (Eigen::Index i = 0; i < k; ++i) CHECK(std::abs(v(i)) < top);
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  auto b = Basis::build(0);
  Matrix m = Matrix::Zero(8, 8);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(Operator(b, m)), Error);
}

TEST_CASE("decomposition is bitwise reproducible") {
  const Operator h = build_H_full(fig3(), Basis::build(4, 2));
  const auto a = eig_hermitian(h);
  const auto b = eig_hermitian(h);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("resonant polaritons mix equally") {
  SystemParams p;
  p.epsilon = 40.0;
  const auto pair = polariton_states(p, 40.0, 1);
  CHECK(pair.lower.theta == doctest::Approx(std::numbers::pi / 4));
  CHECK(std::abs(pair.lower.amp_excited()) == doctest::Approx(std::abs(pair.lower.amp_ground())));
  const auto zero = polariton_states(p, 40.0, 0);
  CHECK_FALSE(zero.upper);
  CHECK(zero.lower.energy == 0.0);
}

TEST_CASE("lower one-polariton energy on the knob-ground branch") {
  const SystemParams p = fig3();
  CHECK(polariton_states(p, 39.9, 1).lower.energy == doctest::Approx(40.45 - std::sqrt(1.3025)).epsilon(1e-14));
  CHECK(polariton_states(p, 39.9, 1).lower.energy == doctest::Approx(39.30873).epsilon(1e-7));
}

TEST_CASE("analytic polaritons match numerical single-site blocks") {
  const SystemParams p = fig3();
  for (double wprime : {p.shifted_w(Level::g), p.shifted_w(Level::e)})
    for (int n : {1, 2}) {
      CAPTURE(wprime);
      CAPTURE(n);
      const auto blk = jc_block(p.epsilon, wprime, n);
      const auto eig = eig_hermitian(blk.h);
      const auto pair = polariton_states(p, wprime, n);
      CHECK(std::abs(eig.values(0) - pair.lower.energy) < 1e-10);
      CHECK(std::abs(eig.values(1) - pair.upper->energy) < 1e-10);
      Vector lower(2);
      lower << pair.lower.amp_excited(), pair.lower.amp_ground();  // |n-1,e> precedes |n,g>
      CHECK(overlap(lower, eig.vector(0)) > 1.0 - 1e-10);
      Vector upper(2);
      upper << pair.upper->amp_excited(), pair.upper->amp_ground();
      CHECK(std::abs(lower.dot(upper)) < 1e-15);
    }
}

TEST_CASE("repulsion energy") {
  const SystemParams p = fig3();
  CHECK(repulsion_energy(p, 40.1) == doctest::Approx(0.2590890).epsilon(1e-6));
  CHECK(std::abs(repulsion_energy_numeric(p, 40.1) - repulsion_energy(p, 40.1)) < 1e-10);
  CHECK(std::abs(repulsion_energy_numeric(p, 39.9) - repulsion_energy(p, 39.9)) < 1e-10);
  CHECK(repulsion_energy(p, 39.9) == doctest::Approx(0.2151434).epsilon(1e-6));
  SystemParams resonant = p;
  resonant.epsilon = 40.1;
  CHECK(repulsion_energy(resonant, 40.1) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
  SystemParams far = p;
  far.epsilon = 40.1 + 1e4;
  CHECK(repulsion_energy(far, 40.1) < 1e-6);
}

TEST_CASE("two-polariton spectrum structure") {
  const auto sp = two_polariton_spectrum(fig3());
  REQUIRE(sp.eig.size() == 16);
  const Operator pe = excited_projector(sp.basis, Qubit::qc);
  for (std::size_t l = 0; l < 16; ++l) {
    const Vector v = sp.eig.vector(l);
    const double knob = v.dot(pe.matrix() * v).real();
    CHECK(knob == doctest::Approx(l < 8 ? 0.0 : 1.0).epsilon(1e-12));
  }
  CHECK(sp.eig.values(7) < sp.eig.values(8));
  CHECK(sp.eig.residuals.maxCoeff() < 1e-10);
  const double reference[16] = {78.61745756, 78.83260091, 78.83260091, 80.9,        80.9,         81.86739909,
                                81.86739909, 83.18254244, 128.90172718, 129.35870672, 129.55635823, 131.268179,
                                131.28248564, 132.35449509, 132.35880765, 133.5192405};
  for (int l = 0; l < 16; ++l) CHECK(sp.eig.values(l) == doctest::Approx(reference[l]).epsilon(1e-9));
  SystemParams small = fig3();
  small.n_max = 1;
  CHECK_THROWS_AS(two_polariton_spectrum(small), Error);
}

TEST_CASE("ground state is the localised product") {
  const SystemParams p = fig3();
  const auto sp = two_polariton_spectrum(p);
  const Vector ref = polariton_product(sp.basis, p, p.shifted_w(Level::g), {1, Branch::lower}, {1, Branch::lower}, Level::g);
  CHECK(overlap(sp.eig.vector(0), ref) > 0.999);
}

TEST_CASE("delocalised reference states") {
  const SystemParams p = fig3();
  const auto sp = two_polariton_spectrum(p);
  const auto phi = delocalized_reference_states(p, sp.basis);
  for (int i = 0; i < 3; ++i) {
    CHECK(phi[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = i + 1; j < 3; ++j) CHECK(std::abs(phi[i].dot(phi[j])) < 1e-14);
  }
  const Vector product = polariton_product(sp.basis, p, p.shifted_w(Level::e), {1, Branch::lower}, {1, Branch::lower}, Level::e);
  const Matrix n1 = number(sp.basis, Mode::resonator1).matrix();
  auto variance = [&](const Vector& v) {
    const double m = v.dot(n1 * v).real();
    return v.dot(n1 * (n1 * v)).real() - m * m;
  };
  CHECK(variance(phi[0]) > variance(product));
  CHECK(overlap(sp.eig.vector(9), phi[1]) == doctest::Approx(0.998).epsilon(0.002));
  // psi9 and psi11 pair with phi3 and phi1 respectively (independently computed)
  CHECK(overlap(sp.eig.vector(8), phi[2]) == doctest::Approx(0.9802).epsilon(1e-4));
  CHECK(overlap(sp.eig.vector(10), phi[0]) == doctest::Approx(0.9789).epsilon(1e-4));
}

TEST_CASE("transition elements") {
  const auto sp = two_polariton_spectrum(SystemParams::phase_rabi_defaults());
  const auto t = transition_elements(sp.eig, build_drive_raising(sp.basis));
  CHECK(t.topLeftCorner(8, 8).maxCoeff() < 1e-12);
  CHECK(t.bottomRightCorner(8, 8).maxCoeff() < 1e-12);
  CHECK(0.07 * t(8, 0) == doctest::Approx(0.0581426).epsilon(1e-6));
  CHECK_THROWS_AS(transition_elements(sp.eig, build_drive_raising(Basis::build(4))), Error);
}

TEST_CASE("drive resonance and detuning") {
  const auto sp = two_polariton_spectrum(SystemParams::phase_rabi_defaults());
  const auto r = resonance_and_detuning(sp.eig);
  CHECK(r.w_d == doctest::Approx(50.28426963).epsilon(1e-9));
  CHECK(r.delta == doctest::Approx(0.2151434).epsilon(1e-6));
  CHECK(r.usable);

  EigenDecomposition degenerate;
  degenerate.values = Eigen::VectorXd::LinSpaced(10, 0.0, 9.0);
  degenerate.values(1) = 0.0;
  CHECK_FALSE(resonance_and_detuning(degenerate).usable);
  EigenDecomposition short_one;
  short_one.values = Eigen::VectorXd::LinSpaced(9, 0.0, 8.0);
  CHECK_THROWS_AS(resonance_and_detuning(short_one), Error);
}

}  // TEST_SUITE
