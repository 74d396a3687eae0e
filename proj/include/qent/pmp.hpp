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

#include <optional>
#include <string_view>
#include <vector>

#include "qent/dynamics.hpp"
#include "qent/linalg.hpp"
#include "qent/state.hpp"

namespace qent {

/// |phi| at or below this counts as a tie in the bang-bang law.
inline constexpr double kTieTol = 1e-12;

struct TfSearch {
  double t_min = 0.2;
  double t_max = 2.0;
  double tolerance = 1e-3;
};

struct SolverConfig {
  double gamma = 0.1;
  int max_sweeps = 200;
  double flip_fraction = 0.2;
  double convergence_tol = 1e-10;
  double denominator_floor = 1e-9;
  std::optional<TfSearch> tf_search;

  // Used when the solver builds its own starting schedule (free final time).
  int n_steps = 1000;
  /// Starting value of every channel as a multiple of its bound.
  double initial_control = -1.0;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

enum class Termination {
  NoFlips,             // bang-bang law already satisfied everywhere
  ObjectiveTolerance,  // accepted sweep improved J by less than convergence_tol
  NoImprovingFlip,     // even the single strongest flip would raise J
  MaxSweeps,
};

std::string_view to_string(Termination t);

struct SwitchTime {
  int channel = 0;  // 1-based
  double time = 0.0;

  bool operator==(const SwitchTime&) const = default;
};

struct TfEvaluation {
  double tf = 0.0;
  double objective = 0.0;
};

struct OptimalSolution {
  ControlSchedule schedule;
  Trajectory trajectory;
  CostateTrajectory costates;
  Eigen::MatrixXd switching;  // channels x cells, per-cell switching value
  double objective = 0.0;
  double concurrence_final = 0.0;
  double tf = 0.0;
  std::vector<SwitchTime> switch_times;
  int sweeps_used = 0;
  double transversality_residual = 0.0;
  bool converged = false;
  Termination termination = Termination::MaxSweeps;
  bool floor_active = false;             // terminal-condition floor engaged on the final sweep
  bool floor_ever_active = false;        // ... on any sweep
  double max_switching_imag = 0.0;
  std::vector<double> objective_history;  // J of every accepted schedule, starting point first
  std::vector<TfEvaluation> tf_evaluations;  // outer search only, in evaluation order
};

/// -C(Tr_B rho_final) + gamma * tf
double objective(const DensityMatrix& rho_final, double tf, double gamma);

struct TerminalCostate {
  ComplexMatrix reduced;  // sqrt(2) rho_a / D
  ComplexMatrix lifted;   // reduced (x) I_B
  double denominator = 0.0;
  bool floor_active = false;
};

/// D = sqrt(max(1 - Tr(rho_a^2), floor)).
TerminalCostate terminal_costate(const ComplexMatrix& rho_a_tf, double floor, int dim_b = 2);

/// -i Tr(pi^dagger [h_k, rho]) before the imaginary part is discarded.
Complex switching_value(const ComplexMatrix& pi_full, const ComplexMatrix& rho,
                        const ComplexMatrix& h_k);

/// Real switching value; throws std::runtime_error if the imaginary residue
/// exceeds 1e-8 (scaled by the costate magnitude when that exceeds 1).
double switching_function(const ComplexMatrix& pi_full, const DensityMatrix& rho,
                          const ComplexMatrix& h_k);

/// +u_max for phi < -tie, -u_max for phi > tie, else u_prev.
double bang_bang_update(double phi, double u_prev, double u_max);

/// Per-cell switching values: trapezoid average of the node values at both
/// ends of each cell. dJ/du_k on cell j is approximately dt * result(k, j).
Eigen::MatrixXd cell_switching(const HamiltonianSet& hs, const Trajectory& traj,
                               const CostateTrajectory& costates, double* max_imag = nullptr);

/// Times at which each channel changes value, in channel-then-time order.
std::vector<SwitchTime> switch_times(const ControlSchedule& sched);

/// Damped forward-backward sweep at fixed final time. `tf` must match the
/// schedule's horizon. Initial cells strictly inside the bounds are snapped
/// to the nearer bound (ties go to -u_max) before the first sweep.
OptimalSolution forward_backward_sweep(const DensityMatrix& rho0, const HamiltonianSet& hs,
                                       double tf, const SolverConfig& cfg,
                                       const ControlSchedule& initial_schedule);

/// |Tr(Pi(tf) rho_dot) - (Tr(G rho_dot_A) - gamma)| with
/// G = sqrt(2) rho_A / (2 sqrt(1 - Tr rho_A^2)), evaluated with the
/// final-cell Hamiltonian. Diagnostic only.
double transversality_residual(const OptimalSolution& sol, const HamiltonianSet& hs, double gamma,
                               double floor = 1e-9);

/// Golden-section search for tf on the swept objective J*(tf). Both
/// endpoints and the two opening interior points are evaluated concurrently.
OptimalSolution optimize_final_time(const DensityMatrix& rho0, const HamiltonianSet& hs,
                                    const SolverConfig& cfg);

/// Fixed-tf solve from the configured constant starting schedule.
OptimalSolution solve_fixed_tf(const DensityMatrix& rho0, const HamiltonianSet& hs, double tf,
                               const SolverConfig& cfg);

}  // namespace qent
