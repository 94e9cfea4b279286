#include "core/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace jch {

namespace {

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error(ErrorKind::invalid_argument, "sample times must be strictly increasing");
  if (!times.empty() && times.front() < 0.0) throw Error(ErrorKind::invalid_argument, "sample times must be non-negative");
}

void check_state(const Operator& h, const StateVector& psi0) {
  if (!psi0.basis || !h.domain()->same_as(*psi0.basis)) throw Error(ErrorKind::dimension_mismatch, "state and Hamiltonian bases differ");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error(ErrorKind::invalid_argument, "initial state is not normalised");
}

using Sparse = Eigen::SparseMatrix<cplx>;

}  // namespace

StateVector basis_state(const BasisPtr& basis, const BasisState& s) { return StateVector{basis, basis->ket(s)}; }

std::vector<StateVector> propagate_static(const Operator& h, const StateVector& psi0, const std::vector<double>& times) {
  if (!h.is_hermitian(1e-12)) throw Error(ErrorKind::invalid_argument, "propagation needs a Hermitian Hamiltonian");
  check_state(h, psi0);
  check_times(times);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numerical, "Hermitian eigensolver did not converge");
  const Matrix& v = es.eigenvectors();
  const Vector c0 = v.adjoint() * psi0.amplitudes;
  std::vector<StateVector> out;
  out.reserve(times.size());
  for (double t : times) {
    Vector phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
    out.push_back(StateVector{psi0.basis, v * phases.cwiseProduct(c0)});
  }
  return out;
}

std::vector<StateVector> propagate_timedep(const SystemParams& p, const StateVector& psi0, const std::vector<double>& times,
                                           const IntegratorOptions& opts) {
  if (!psi0.basis) throw Error(ErrorKind::invalid_argument, "state without basis");
  check_times(times);
  if (!(opts.max_step > 0.0)) throw Error(ErrorKind::invalid_argument, "integrator step must be positive");
  const Operator h0 = build_H_full(p, psi0.basis);
  check_state(h0, psi0);
  const Operator raise = build_drive_raising(psi0.basis);

  // The energy offset only contributes a global phase, restored exactly at
  // each sample; it keeps |E - offset| * step small for the states that carry
  // the population.
  const double offset = psi0.amplitudes.dot(h0.matrix() * psi0.amplitudes).real() + 0.5 * p.w_d;
  const auto n = static_cast<Eigen::Index>(psi0.basis->size());
  Matrix shifted = h0.matrix() - offset * Matrix::Identity(n, n);
  const Sparse hs = shifted.sparseView(1.0, 1e-300);
  const Sparse up = (p.Omega * raise.matrix()).sparseView(1.0, 1e-300);
  const Sparse down = Sparse(up.adjoint());
  const cplx minus_i(0.0, -1.0);

  auto rhs = [&](double t, const Vector& y) -> Vector {
    const cplx ph = std::exp(cplx(0.0, -p.w_d * t));
    Vector out = hs * y;
    if (p.Omega != 0.0) out += ph * (up * y) + std::conj(ph) * (down * y);
    return minus_i * out;
  };

  std::vector<StateVector> out;
  out.reserve(times.size());
  Vector y = psi0.amplitudes;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / opts.max_step - 1e-9));
      const double hstep = span / static_cast<double>(steps);
      for (long k = 0; k < steps; ++k) {
        const double tk = t + static_cast<double>(k) * hstep;
        const Vector k1 = rhs(tk, y);
        const Vector k2 = rhs(tk + 0.5 * hstep, y + 0.5 * hstep * k1);
        const Vector k3 = rhs(tk + 0.5 * hstep, y + 0.5 * hstep * k2);
        const Vector k4 = rhs(tk + hstep, y + hstep * k3);
        y += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = target;
    }
    const double drift = std::abs(y.norm() - 1.0);
    if (!(drift <= opts.norm_tolerance)) {
      std::ostringstream msg;
      msg << "RK4 norm drift " << drift << " at t=" << target << " exceeds " << opts.norm_tolerance
          << "; reduce the step (max_step=" << opts.max_step << ")";
      throw Error(ErrorKind::numerical, msg.str());
    }
    out.push_back(StateVector{psi0.basis, std::exp(cplx(0.0, -offset * target)) * y});
  }
  return out;
}

std::vector<StateVector> to_lab_frame(const std::vector<StateVector>& rotating, double w_d, const std::vector<double>& times) {
  if (rotating.size() != times.size()) throw Error(ErrorKind::dimension_mismatch, "one time per state required");
  std::vector<StateVector> out;
  out.reserve(rotating.size());
  for (std::size_t k = 0; k < rotating.size(); ++k) {
    const Basis& b = *rotating[k].basis;
    Vector v = rotating[k].amplitudes;
    for (std::size_t i = 0; i < b.size(); ++i)
      v(static_cast<Eigen::Index>(i)) *= std::exp(cplx(0.0, -w_d * times[k] * b[i].excitation_total()));
    out.push_back(StateVector{rotating[k].basis, std::move(v)});
  }
  return out;
}

std::vector<StateVector> propagate_driven(const SystemParams& p, const StateVector& psi0, const std::vector<double>& times) {
  const Operator hrot = build_H_driven_rotating(p, psi0.basis);
  return to_lab_frame(propagate_static(hrot, psi0, times), p.w_d, times);
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  for (const auto& [n, values] : channels)
    if (n == name) return values;
  throw Error(ErrorKind::invalid_argument, "no channel named '" + name + "'");
}

void TimeSeries::add_channel(std::string name, std::vector<double> values) {
  if (values.size() != t.size()) throw Error(ErrorKind::dimension_mismatch, "channel '" + name + "' length differs from the time grid");
  channels.emplace_back(std::move(name), std::move(values));
}

void TimeSeries::write_csv(std::ostream& os) const {
  os << "t";
  for (const auto& c : channels) os << ',' << c.first;
  os << '\n';
  std::ostringstream line;
  line << std::setprecision(12);
  for (std::size_t i = 0; i < t.size(); ++i) {
    line.str("");
    line << t[i];
    for (const auto& c : channels) line << ',' << c.second[i];
    os << line.str() << '\n';
  }
}

TimeSeries observe(const std::vector<StateVector>& states, const std::vector<double>& times, const std::vector<Channel>& channels) {
  if (states.size() != times.size()) throw Error(ErrorKind::dimension_mismatch, "one time per state required");
  check_times(times);
  TimeSeries ts;
  ts.t = times;
  for (const auto& ch : channels) {
    std::vector<double> values;
    values.reserve(states.size());
    if (const auto* ex = std::get_if<Expectation>(&ch)) {
      if (!ex->op.is_hermitian(1e-12))
        throw Error(ErrorKind::invalid_argument, "observable '" + ex->name + "' is not Hermitian; expectation undefined");
      for (const auto& s : states) {
        if (!ex->op.domain()->same_as(*s.basis)) throw Error(ErrorKind::dimension_mismatch, "observable basis differs from state basis");
        values.push_back(s.amplitudes.dot(ex->op.matrix() * s.amplitudes).real());
      }
      ts.add_channel(ex->name, std::move(values));
    } else {
      const auto& ov = std::get<Overlap>(ch);
      for (const auto& s : states) {
        if (ov.ref.size() != s.amplitudes.size()) throw Error(ErrorKind::dimension_mismatch, "reference state length differs from state");
        values.push_back(std::abs(ov.ref.dot(s.amplitudes)));
      }
      ts.add_channel(ov.name, std::move(values));
    }
  }
  return ts;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {start};
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

double max_state_distance(const std::vector<StateVector>& a, const std::vector<StateVector>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension_mismatch, "trajectories differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i].amplitudes - b[i].amplitudes).norm());
  return worst;
}

}  // namespace jch
