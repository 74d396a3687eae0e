/*
 Copyright 2026 The qent Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "qent/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qent {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr double kRepairDrift = 1e-10;
constexpr int kRepairInterval = 100;

double step_drift(const ComplexMatrix& m) {
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return std::max(herm, std::abs(m.trace().real() - 1.0));
}

}  // namespace

HamiltonianSet::HamiltonianSet(ComplexMatrix h0, std::vector<ComplexMatrix> controls,
                               std::vector<double> u_max)
    : h0_(std::move(h0)), controls_(std::move(controls)), u_max_(std::move(u_max)) {
  if (h0_.rows() == 0 || h0_.rows() != h0_.cols()) {
    throw DimensionError("HamiltonianSet: drift must be a non-empty square matrix");
  }
  if (!h0_.allFinite()) throw std::invalid_argument("HamiltonianSet: H0 has non-finite entries");
  if (!is_hermitian(h0_, kHermitianTol)) throw NotHermitianError("HamiltonianSet: H0 is not Hermitian");
  if (u_max_.size() != controls_.size()) {
    throw DimensionError("HamiltonianSet: need one bound per control channel");
  }
  for (size_t k = 0; k < controls_.size(); ++k) {
    if (controls_[k].rows() != h0_.rows() || controls_[k].cols() != h0_.cols()) {
      throw DimensionError("HamiltonianSet: H" + std::to_string(k + 1) + " size differs from H0");
    }
    if (!controls_[k].allFinite() || !is_hermitian(controls_[k], kHermitianTol)) {
      throw NotHermitianError("HamiltonianSet: H" + std::to_string(k + 1) + " is not Hermitian");
    }
    if (!(u_max_[k] > 0.0) || !std::isfinite(u_max_[k])) {
      throw std::invalid_argument("HamiltonianSet: u_max must be positive and finite");
    }
  }
}

HamiltonianSet::HamiltonianSet(ComplexMatrix h0, std::vector<ComplexMatrix> controls, double u_max)
    : HamiltonianSet(std::move(h0), controls, std::vector<double>(controls.size(), u_max)) {}

ControlSchedule::ControlSchedule(double t0, double tf, Eigen::MatrixXd values)
    : t0_(t0), tf_(tf), values_(std::move(values)) {
  if (!std::isfinite(t0_) || !std::isfinite(tf_)) {
    throw std::invalid_argument("ControlSchedule: times must be finite");
  }
  if (values_.cols() == 0) {
    if (tf_ != t0_) throw std::invalid_argument("ControlSchedule: empty schedule needs tf == t0");
  } else if (!(tf_ > t0_)) {
    throw std::invalid_argument("ControlSchedule: tf must exceed t0");
  }
  if (!values_.allFinite()) throw std::invalid_argument("ControlSchedule: non-finite control value");
}

ControlSchedule ControlSchedule::constant(double t0, double tf, int n_steps,
                                          std::span<const double> value) {
  if (n_steps < 0) throw std::invalid_argument("ControlSchedule: n_steps must be non-negative");
  Eigen::MatrixXd v(static_cast<Eigen::Index>(value.size()), n_steps);
  for (size_t k = 0; k < value.size(); ++k) v.row(static_cast<Eigen::Index>(k)).setConstant(value[k]);
  return ControlSchedule(t0, tf, std::move(v));
}

ControlSchedule ControlSchedule::constant(double t0, double tf, int n_steps, int channels,
                                          double value) {
  const std::vector<double> v(static_cast<size_t>(channels), value);
  return constant(t0, tf, n_steps, v);
}

std::vector<double> ControlSchedule::cell(int j) const {
  std::vector<double> u(static_cast<size_t>(channels()));
  for (int k = 0; k < channels(); ++k) u[static_cast<size_t>(k)] = values_(k, j);
  return u;
}

void check_schedule(const ControlSchedule& sched, const HamiltonianSet& hs) {
  if (sched.channels() != hs.channels()) {
    std::ostringstream os;
    os << "schedule has " << sched.channels() << " channels, Hamiltonian set has " << hs.channels();
    throw std::invalid_argument(os.str());
  }
  for (int k = 0; k < sched.channels(); ++k) {
    const double bound = hs.u_max()[static_cast<size_t>(k)];
    for (int j = 0; j < sched.n_steps(); ++j) {
      if (std::abs(sched.value(k, j)) > bound + kBoundSlack) {
        std::ostringstream os;
        os << "control u_" << k + 1 << " = " << sched.value(k, j) << " in cell " << j
           << " exceeds bound " << bound;
        throw std::invalid_argument(os.str());
      }
    }
  }
}

ComplexMatrix assemble_hamiltonian(const HamiltonianSet& hs, std::span<const double> u) {
  if (static_cast<int>(u.size()) != hs.channels()) {
    throw DimensionError("assemble_hamiltonian: control vector length differs from channel count");
  }
  ComplexMatrix h = hs.h0();
  for (int k = 0; k < hs.channels(); ++k) h += u[static_cast<size_t>(k)] * hs.control(k);
  return h;
}

DensityMatrix step_state(const DensityMatrix& rho, const ComplexMatrix& h, double dt) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim()) {
    throw DimensionError("step_state: Hamiltonian size does not match state");
  }
  const ComplexMatrix u = propagator(h, dt);
  return DensityMatrix::repaired(u * rho.matrix() * u.adjoint(), rho.dim_a(), rho.dim_b());
}

const ComplexMatrix& PropagatorCache::get(std::span<const double> u, double dt) {
  auto key = std::make_pair(std::vector<double>(u.begin(), u.end()), dt);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(std::move(key), propagator(assemble_hamiltonian(*hs_, u), dt)).first;
  }
  return it->second;
}

std::vector<ComplexMatrix> PropagatorCache::cells(const ControlSchedule& sched) {
  check_schedule(sched, *hs_);
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<size_t>(sched.n_steps()));
  for (int j = 0; j < sched.n_steps(); ++j) out.push_back(get(sched.cell(j), sched.dt()));
  return out;
}

Trajectory propagate_forward(const DensityMatrix& rho0, const ControlSchedule& sched,
                             std::span<const ComplexMatrix> cell_propagators) {
  if (static_cast<int>(cell_propagators.size()) != sched.n_steps()) {
    throw DimensionError("propagate_forward: one propagator per cell required");
  }
  Trajectory traj;
  traj.times.reserve(cell_propagators.size() + 1);
  traj.states.reserve(cell_propagators.size() + 1);
  traj.times.push_back(sched.t0());
  traj.states.push_back(rho0);
  for (int j = 0; j < sched.n_steps(); ++j) {
    DensityMatrix next = unitary_conjugate(traj.states.back(), cell_propagators[static_cast<size_t>(j)]);
    if ((j + 1) % kRepairInterval == 0 || step_drift(next.matrix()) > kRepairDrift) {
      next = DensityMatrix::repaired(next.matrix(), next.dim_a(), next.dim_b());
    }
    traj.states.push_back(std::move(next));
    traj.times.push_back(j + 1 == sched.n_steps() ? sched.tf() : sched.node_time(j + 1));
  }
  return traj;
}

Trajectory propagate_forward(const DensityMatrix& rho0, const HamiltonianSet& hs,
                             const ControlSchedule& sched) {
  if (rho0.dim() != hs.dim()) throw DimensionError("propagate_forward: state size differs from H0");
  PropagatorCache cache(hs);
  const auto props = cache.cells(sched);
  return propagate_forward(rho0, sched, props);
}

CostateTrajectory propagate_costate_backward(const ComplexMatrix& pi_tf,
                                             const ControlSchedule& sched,
                                             std::span<const ComplexMatrix> cell_propagators) {
  if (static_cast<int>(cell_propagators.size()) != sched.n_steps()) {
    throw DimensionError("propagate_costate_backward: one propagator per cell required");
  }
  const size_t n = cell_propagators.size();
  if (n > 0 && (pi_tf.rows() != cell_propagators[0].rows() || pi_tf.cols() != pi_tf.rows())) {
    throw DimensionError("propagate_costate_backward: costate size differs from propagators");
  }
  CostateTrajectory out;
  out.times.resize(n + 1);
  out.costates.resize(n + 1);
  out.costates[n] = pi_tf;
  out.times[n] = sched.tf();
  for (size_t j = n; j-- > 0;) {
    const ComplexMatrix& u = cell_propagators[j];
    ComplexMatrix c = u.adjoint() * out.costates[j + 1] * u;
    out.costates[j] = 0.5 * (c + c.adjoint());
    out.times[j] = sched.node_time(static_cast<int>(j));
  }
  return out;
}

CostateTrajectory propagate_costate_backward(const ComplexMatrix& pi_tf, const HamiltonianSet& hs,
                                             const ControlSchedule& sched) {
  if (pi_tf.rows() != hs.dim() || pi_tf.cols() != hs.dim()) {
    throw DimensionError("propagate_costate_backward: costate size differs from H0");
  }
  if (!is_hermitian(pi_tf, kEigenTol)) {
    throw NotHermitianError("propagate_costate_backward: terminal costate is not Hermitian");
  }
  PropagatorCache cache(hs);
  const auto props = cache.cells(sched);
  return propagate_costate_backward(pi_tf, sched, props);
}

}  // namespace qent
