#pragma once

#include <Eigen/Eigenvalues>

#include "core/hilbert.hpp"

namespace jch::linalg {

// exp(-i K t) for Hermitian K.
inline Matrix exp_minus_i(const Matrix& hermitian, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numerical, "Hermitian eigensolver did not converge");
  const Vector phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace jch::linalg
