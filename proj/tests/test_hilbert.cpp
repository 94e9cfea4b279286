#include <doctest.h>

#include <cmath>

#include "core/hilbert.hpp"

using namespace jch;

namespace {

Vector act(const Operator& op, const Vector& v) { return op.matrix() * v; }

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("unconstrained dimensions") {
  CHECK(Basis::build(1)->size() == 32);
  CHECK(Basis::build(4)->size() == 200);
}

TEST_CASE("vacuum-only basis") {
  auto b = Basis::build(0, 0);
  REQUIRE(b->size() == 1);
  CHECK((*b)[0] == BasisState{});
}

TEST_CASE("sector size matches brute-force enumeration") {
  int count = 0;
  for (int n1 = 0; n1 <= 4; ++n1)
    for (int n2 = 0; n2 <= 4; ++n2)
      for (int q1 = 0; q1 < 2; ++q1)
        for (int q2 = 0; q2 < 2; ++q2)
          for (int qc = 0; qc < 2; ++qc)
            if (n1 + n2 + q1 + q2 + qc == 2) ++count;
  auto b = Basis::build(4, 2);
  CHECK(b->size() == static_cast<std::size_t>(count));
  for (const auto& s : b->states()) CHECK(s.excitation_total() == 2);
}

TEST_CASE("ordering and full index") {
  auto b = Basis::build(2);
  for (std::size_t i = 0; i < b->size(); ++i) CHECK(b->full_index((*b)[i]) == i);
  for (std::size_t i = 1; i < b->size(); ++i) CHECK((*b)[i - 1] < (*b)[i]);
  const BasisState s{1, 2, Level::e, Level::g, Level::e};
  CHECK(b->full_index(s) == static_cast<std::size_t>((((1 * 3 + 2) * 2 + 1) * 2 + 0) * 2 + 1));
  CHECK(s.label() == "|1 2 e g e>");
  CHECK(b->same_as(*Basis::build(2)));
}

TEST_CASE("invalid cutoff and unreachable sector") {
  CHECK_THROWS_AS(Basis::build(-1), Error);
  CHECK_THROWS_AS(Basis::build(1, 6), Error);
  CHECK_THROWS_AS(Basis::build(1, -1), Error);
  CHECK_NOTHROW(Basis::build(1, 5));
}

TEST_CASE("annihilator matrix elements") {
  auto b = Basis::build(3);
  const Operator a1 = annihilator(b, Mode::resonator1);
  Vector out = act(a1, b->ket({1, 0, Level::g, Level::g, Level::g}));
  CHECK(std::abs(out(static_cast<Eigen::Index>(*b->index_of(BasisState{}))) - 1.0) < 1e-15);
  CHECK(out.norm() == doctest::Approx(1.0));
  CHECK(act(a1, b->ket(BasisState{})).norm() == 0.0);
  Vector three = act(a1, b->ket({3, 1, Level::e, Level::g, Level::g}));
  CHECK(std::abs(three(static_cast<Eigen::Index>(*b->index_of({2, 1, Level::e, Level::g, Level::g}))) - std::sqrt(3.0)) < 1e-15);
  CHECK_THROWS_AS(mode_from_index(3), Error);
}

TEST_CASE("canonical commutator away from the cutoff") {
  auto b = Basis::build(3);
  for (Mode m : {Mode::resonator1, Mode::resonator2}) {
    const Operator a = annihilator(b, m);
    const Matrix c = commutator(a, a.adjoint()).matrix();
    for (std::size_t i = 0; i < b->size(); ++i) {
      const int n = m == Mode::resonator1 ? (*b)[i].n1 : (*b)[i].n2;
      const auto k = static_cast<Eigen::Index>(i);
      if (n < 3) CHECK(std::abs(c(k, k) - 1.0) < 1e-14);
    }
    Matrix off = c;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK(commutator(annihilator(b, Mode::resonator1), creator(b, Mode::resonator2)).matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("qubit ladder operators") {
  auto b = Basis::build(1);
  const Operator sm = qubit_lowering(b, Qubit::qc);
  Vector out = act(sm, b->ket({0, 0, Level::g, Level::g, Level::e}));
  CHECK(out.isApprox(b->ket(BasisState{})));
  CHECK((sm * sm).matrix().cwiseAbs().maxCoeff() == 0.0);
  const Matrix anti = (sm * sm.adjoint() + sm.adjoint() * sm).matrix();
  CHECK(anti.isApprox(Matrix::Identity(32, 32)));
  const Matrix z = (excited_projector(b, Qubit::qc) - (identity(b) - excited_projector(b, Qubit::qc))).matrix();
  CHECK(z.isApprox(sigma_z(b, Qubit::qc).matrix()));
  CHECK(qubit_raising(b, Qubit::q1).matrix().isApprox(qubit_lowering(b, Qubit::q1).matrix().adjoint()));
}

TEST_CASE("elementary operators are real") {
  auto b = Basis::build(2);
  for (const Operator& op : {annihilator(b, Mode::resonator1), creator(b, Mode::resonator2), qubit_lowering(b, Qubit::q2),
                             qubit_raising(b, Qubit::qc), number(b, Mode::resonator1)})
    CHECK(op.matrix().imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("polariton number counts photons and the local qubit") {
  auto b = Basis::build(2);
  const Operator n1 = polariton_number(b, Mode::resonator1);
  auto expect = [&](const BasisState& s) {
    const Vector k = b->ket(s);
    return k.dot(n1.matrix() * k).real();
  };
  CHECK(expect({1, 0, Level::g, Level::g, Level::g}) == 1.0);
  CHECK(expect({0, 0, Level::e, Level::g, Level::g}) == 1.0);
  CHECK(expect({0, 2, Level::g, Level::e, Level::e}) == 0.0);
}

TEST_CASE("sector maps are rectangular") {
  auto s2 = Basis::build(3, 2);
  const Operator a = annihilator(s2, Mode::resonator1);
  CHECK(a.codomain()->sector() == 1);
  CHECK(a.matrix().rows() == static_cast<Eigen::Index>(Basis::build(3, 1)->size()));
  CHECK(a.matrix().cols() == static_cast<Eigen::Index>(s2->size()));
  const Operator ad = creator(s2, Mode::resonator1);
  CHECK(ad.codomain()->sector() == 3);
  CHECK(annihilator(Basis::build(3, 0), Mode::resonator1).matrix().rows() == 0);
  // restriction of the unconstrained operator reproduces the sector map
  auto full = Basis::build(3);
  const Operator r = restrict_to(annihilator(full, Mode::resonator1), Basis::build(3, 1), s2);
  CHECK(r.matrix().isApprox(a.matrix()));
}

TEST_CASE("embedding and basis mismatch") {
  auto full = Basis::build(2);
  auto s1 = Basis::build(2, 1);
  Vector v = Vector::Ones(static_cast<Eigen::Index>(s1->size()));
  Vector e = embed(v, *s1, *full);
  CHECK(e.norm() == doctest::Approx(v.norm()));
  CHECK_THROWS_AS(embed(v, *s1, *Basis::build(2, 2)), Error);
  CHECK_THROWS_AS(identity(full) * identity(s1), Error);
  CHECK_THROWS_AS(full->ket({3, 0, Level::g, Level::g, Level::g}), Error);
  CHECK(qubit_from_name("qc") == Qubit::qc);
  CHECK_THROWS_AS(qubit_from_name("q3"), Error);
}

}  // TEST_SUITE
