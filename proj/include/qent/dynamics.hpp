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

#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qent/linalg.hpp"
#include "qent/state.hpp"

namespace qent {

/// Drift H0 plus control Hamiltonians H_k with per-channel amplitude bounds.
/// hbar = 1.
class HamiltonianSet {
 public:
  static constexpr double kHermitianTol = 1e-12;

  HamiltonianSet(ComplexMatrix h0, std::vector<ComplexMatrix> controls, std::vector<double> u_max);
  HamiltonianSet(ComplexMatrix h0, std::vector<ComplexMatrix> controls, double u_max);

  const ComplexMatrix& h0() const { return h0_; }
  const std::vector<ComplexMatrix>& controls() const { return controls_; }
  const ComplexMatrix& control(int k) const { return controls_.at(static_cast<size_t>(k)); }
  const std::vector<double>& u_max() const { return u_max_; }
  int channels() const { return static_cast<int>(controls_.size()); }
  Eigen::Index dim() const { return h0_.rows(); }

 private:
  ComplexMatrix h0_;
  std::vector<ComplexMatrix> controls_;
  std::vector<double> u_max_;
};

/// Piecewise-constant controls on a uniform grid. values(k, j) holds channel
/// k on the half-open cell [t_j, t_{j+1}). A schedule with zero cells and
/// t0 == tf is the empty horizon.
class ControlSchedule {
 public:
  ControlSchedule() : t0_(0.0), tf_(0.0) {}
  ControlSchedule(double t0, double tf, Eigen::MatrixXd values);

  /// Every cell of every channel set to `value`.
  static ControlSchedule constant(double t0, double tf, int n_steps, std::span<const double> value);
  static ControlSchedule constant(double t0, double tf, int n_steps, int channels, double value);

  double t0() const { return t0_; }
  double tf() const { return tf_; }
  int n_steps() const { return static_cast<int>(values_.cols()); }
  int channels() const { return static_cast<int>(values_.rows()); }
  double dt() const { return n_steps() == 0 ? 0.0 : (tf_ - t0_) / n_steps(); }
  double node_time(int j) const { return t0_ + j * dt(); }

  const Eigen::MatrixXd& values() const { return values_; }
  double value(int k, int j) const { return values_(k, j); }
  void set_value(int k, int j, double v) { values_(k, j) = v; }
  std::vector<double> cell(int j) const;

 private:
  double t0_;
  double tf_;
  Eigen::MatrixXd values_;
};

/// Throws std::invalid_argument when the schedule does not fit `hs` or any
/// value exceeds its channel bound by more than 1e-12.
void check_schedule(const ControlSchedule& sched, const HamiltonianSet& hs);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

struct CostateTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> costates;
};

/// H0 + sum_k u_k H_k
ComplexMatrix assemble_hamiltonian(const HamiltonianSet& hs, std::span<const double> u);

/// U rho U^dagger with U = exp(-i h dt), followed by Hermitize/renormalize.
DensityMatrix step_state(const DensityMatrix& rho, const ComplexMatrix& h, double dt);

/// Memoizes exp(-i H(u) dt) by exact control vector and step. Bang-bang
/// schedules only ever visit 2^m distinct cells.
class PropagatorCache {
 public:
  explicit PropagatorCache(const HamiltonianSet& hs) : hs_(&hs) {}

  const ComplexMatrix& get(std::span<const double> u, double dt);

  /// One propagator per cell of `sched`.
  std::vector<ComplexMatrix> cells(const ControlSchedule& sched);

  size_t size() const { return cache_.size(); }

 private:
  const HamiltonianSet* hs_;
  std::map<std::pair<std::vector<double>, double>, ComplexMatrix> cache_;
};

/// Nodes t_0..t_n. Roundoff repair runs every 100 steps or when the
/// Hermiticity/trace drift of a step exceeds 1e-10.
Trajectory propagate_forward(const DensityMatrix& rho0, const HamiltonianSet& hs,
                             const ControlSchedule& sched);
Trajectory propagate_forward(const DensityMatrix& rho0, const ControlSchedule& sched,
                             std::span<const ComplexMatrix> cell_propagators);

/// Full-space adjoint: costate j = U_j^dagger costate_{j+1} U_j, ending at pi_tf.
CostateTrajectory propagate_costate_backward(const ComplexMatrix& pi_tf, const HamiltonianSet& hs,
                                             const ControlSchedule& sched);
CostateTrajectory propagate_costate_backward(const ComplexMatrix& pi_tf,
                                             const ControlSchedule& sched,
                                             std::span<const ComplexMatrix> cell_propagators);

}  // namespace qent
