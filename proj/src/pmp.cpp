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

#include "qent/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qent/entanglement.hpp"

namespace qent {

namespace {

constexpr double kImagTol = 1e-8;

struct Evaluation {
  std::vector<ComplexMatrix> props;
  Trajectory traj;
  double objective = 0.0;
};

Evaluation evaluate(const DensityMatrix& rho0, PropagatorCache& cache, const ControlSchedule& sched,
                    double gamma) {
  Evaluation e;
  e.props = cache.cells(sched);
  e.traj = propagate_forward(rho0, sched, e.props);
  e.objective = objective(e.traj.states.back(), sched.tf(), gamma);
  if (!std::isfinite(e.objective)) {
    throw std::runtime_error("forward_backward_sweep: objective is not finite");
  }
  return e;
}

ControlSchedule snap_to_bounds(const ControlSchedule& sched, const HamiltonianSet& hs) {
  ControlSchedule out = sched;
  for (int k = 0; k < sched.channels(); ++k) {
    const double bound = hs.u_max()[static_cast<size_t>(k)];
    for (int j = 0; j < sched.n_steps(); ++j) {
      out.set_value(k, j, sched.value(k, j) > 0.0 ? bound : -bound);
    }
  }
  return out;
}

struct Flip {
  int channel;
  int cell;
  double magnitude;
  double target;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("SolverConfig: gamma must be positive");
  }
  if (max_sweeps <= 0) throw std::invalid_argument("SolverConfig: max_sweeps must be positive");
  if (!(flip_fraction > 0.0 && flip_fraction <= 1.0)) {
    throw std::invalid_argument("SolverConfig: flip_fraction must lie in (0, 1]");
  }
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("SolverConfig: convergence_tol must be positive");
  if (!(denominator_floor > 0.0)) {
    throw std::invalid_argument("SolverConfig: denominator_floor must be positive");
  }
  if (n_steps <= 0) throw std::invalid_argument("SolverConfig: n_steps must be positive");
  if (!(initial_control >= -1.0 && initial_control <= 1.0)) {
    throw std::invalid_argument("SolverConfig: initial_control must lie in [-1, 1]");
  }
  if (tf_search) {
    if (!(tf_search->t_min > 0.0 && tf_search->t_min < tf_search->t_max)) {
      throw std::invalid_argument("SolverConfig: tf search needs 0 < t_min < t_max");
    }
    if (!(tf_search->tolerance > 0.0)) {
      throw std::invalid_argument("SolverConfig: tf search tolerance must be positive");
    }
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::NoFlips: return "no_flips";
    case Termination::ObjectiveTolerance: return "objective_tolerance";
    case Termination::NoImprovingFlip: return "no_improving_flip";
    case Termination::MaxSweeps: return "max_sweeps";
  }
  return "?";
}

double objective(const DensityMatrix& rho_final, double tf, double gamma) {
  return -concurrence_of(rho_final) + gamma * tf;
}

TerminalCostate terminal_costate(const ComplexMatrix& rho_a_tf, double floor, int dim_b) {
  if (rho_a_tf.rows() != rho_a_tf.cols()) throw DimensionError("terminal_costate: not square");
  const double mixedness = 1.0 - purity(rho_a_tf);
  TerminalCostate out;
  out.floor_active = !(mixedness > floor);
  out.denominator = std::sqrt(std::max(mixedness, floor));
  out.reduced = (std::sqrt(2.0) / out.denominator) * rho_a_tf;
  out.reduced = 0.5 * (out.reduced + out.reduced.adjoint());
  out.lifted = kron(out.reduced, ComplexMatrix::Identity(dim_b, dim_b));
  return out;
}

Complex switching_value(const ComplexMatrix& pi_full, const ComplexMatrix& rho,
                        const ComplexMatrix& h_k) {
  const Complex minus_i(0.0, -1.0);
  return minus_i * (pi_full.adjoint() * commutator(h_k, rho)).trace();
}

double switching_function(const ComplexMatrix& pi_full, const DensityMatrix& rho,
                          const ComplexMatrix& h_k) {
  const Complex v = switching_value(pi_full, rho.matrix(), h_k);
  const double scale = std::max(1.0, pi_full.cwiseAbs().maxCoeff());
  if (std::abs(v.imag()) > kImagTol * scale) {
    std::ostringstream os;
    os << "switching_function: imaginary residue " << v.imag() << " (costate or state not Hermitian?)";
    throw std::runtime_error(os.str());
  }
  return v.real();
}

double bang_bang_update(double phi, double u_prev, double u_max) {
  if (phi < -kTieTol) return u_max;
  if (phi > kTieTol) return -u_max;
  return u_prev;
}

Eigen::MatrixXd cell_switching(const HamiltonianSet& hs, const Trajectory& traj,
                               const CostateTrajectory& costates, double* max_imag) {
  const size_t nodes = traj.states.size();
  if (costates.costates.size() != nodes || nodes == 0) {
    throw DimensionError("cell_switching: state and costate trajectories differ in length");
  }
  const int m = hs.channels();
  const int cells = static_cast<int>(nodes) - 1;
  Eigen::MatrixXd node_phi(m, static_cast<Eigen::Index>(nodes));
  for (size_t j = 0; j < nodes; ++j) {
    for (int k = 0; k < m; ++k) {
      node_phi(k, static_cast<Eigen::Index>(j)) =
          switching_function(costates.costates[j], traj.states[j], hs.control(k));
      if (max_imag != nullptr) {
        const Complex v = switching_value(costates.costates[j], traj.states[j].matrix(), hs.control(k));
        *max_imag = std::max(*max_imag, std::abs(v.imag()));
      }
    }
  }
  Eigen::MatrixXd out(m, cells);
  for (int j = 0; j < cells; ++j) out.col(j) = 0.5 * (node_phi.col(j) + node_phi.col(j + 1));
  return out;
}

std::vector<SwitchTime> switch_times(const ControlSchedule& sched) {
  std::vector<SwitchTime> out;
  for (int k = 0; k < sched.channels(); ++k) {
    for (int j = 1; j < sched.n_steps(); ++j) {
      if (sched.value(k, j) != sched.value(k, j - 1)) out.push_back({k + 1, sched.node_time(j)});
    }
  }
  return out;
}

OptimalSolution forward_backward_sweep(const DensityMatrix& rho0, const HamiltonianSet& hs,
                                       double tf, const SolverConfig& cfg,
                                       const ControlSchedule& initial_schedule) {
  cfg.validate();
  if (rho0.dim() != hs.dim()) throw DimensionError("forward_backward_sweep: state size differs from H0");
  check_schedule(initial_schedule, hs);
  if (initial_schedule.n_steps() == 0) {
    throw std::invalid_argument("forward_backward_sweep: schedule has no cells");
  }
  if (std::abs(initial_schedule.tf() - tf) > 1e-12 * std::max(1.0, std::abs(tf))) {
    throw std::invalid_argument("forward_backward_sweep: tf does not match the schedule horizon");
  }

  PropagatorCache cache(hs);
  ControlSchedule sched = snap_to_bounds(initial_schedule, hs);
  Evaluation current = evaluate(rho0, cache, sched, cfg.gamma);

  OptimalSolution sol;
  sol.objective_history.push_back(current.objective);

  const int m = hs.channels();
  const int n = sched.n_steps();
  Termination why = Termination::MaxSweeps;
  CostateTrajectory costates;
  Eigen::MatrixXd phi;
  double max_imag = 0.0;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    sol.sweeps_used = sweep;
    const TerminalCostate term =
        terminal_costate(current.traj.states.back().reduced_a(), cfg.denominator_floor, rho0.dim_b());
    sol.floor_active = term.floor_active;
    sol.floor_ever_active = sol.floor_ever_active || term.floor_active;
    costates = propagate_costate_backward(term.lifted, sched, current.props);
    max_imag = 0.0;
    phi = cell_switching(hs, current.traj, costates, &max_imag);

    std::vector<Flip> flips;
    for (int k = 0; k < m; ++k) {
      const double bound = hs.u_max()[static_cast<size_t>(k)];
      for (int j = 0; j < n; ++j) {
        const double target = bang_bang_update(phi(k, j), sched.value(k, j), bound);
        if (target != sched.value(k, j)) flips.push_back({k, j, std::abs(phi(k, j)), target});
      }
    }
    if (flips.empty()) {
      why = Termination::NoFlips;
      break;
    }
    std::stable_sort(flips.begin(), flips.end(),
                     [](const Flip& a, const Flip& b) { return a.magnitude > b.magnitude; });

    double fraction = cfg.flip_fraction;
    std::optional<std::pair<ControlSchedule, Evaluation>> accepted;
    while (true) {
      const auto count = std::max<size_t>(
          1, static_cast<size_t>(std::ceil(fraction * static_cast<double>(flips.size()))));
      ControlSchedule trial = sched;
      for (size_t i = 0; i < count; ++i) trial.set_value(flips[i].channel, flips[i].cell, flips[i].target);
      Evaluation e = evaluate(rho0, cache, trial, cfg.gamma);
      if (e.objective <= current.objective) {
        accepted.emplace(std::move(trial), std::move(e));
        break;
      }
      if (count == 1) break;
      fraction *= 0.5;
    }
    if (!accepted) {
      why = Termination::NoImprovingFlip;
      break;
    }
    const double improvement = current.objective - accepted->second.objective;
    sched = std::move(accepted->first);
    current = std::move(accepted->second);
    sol.objective_history.push_back(current.objective);
    if (improvement < cfg.convergence_tol) {
      why = Termination::ObjectiveTolerance;
      break;
    }
  }

  // Costates and switching values must describe the schedule being returned.
  if (why == Termination::ObjectiveTolerance || why == Termination::MaxSweeps) {
    const TerminalCostate term =
        terminal_costate(current.traj.states.back().reduced_a(), cfg.denominator_floor, rho0.dim_b());
    sol.floor_active = term.floor_active;
    sol.floor_ever_active = sol.floor_ever_active || term.floor_active;
    costates = propagate_costate_backward(term.lifted, sched, current.props);
    max_imag = 0.0;
    phi = cell_switching(hs, current.traj, costates, &max_imag);
  }

  sol.termination = why;
  sol.converged = why != Termination::MaxSweeps;
  sol.tf = tf;
  sol.objective = current.objective;
  sol.concurrence_final = concurrence_of(current.traj.states.back());
  sol.switch_times = switch_times(sched);
  sol.schedule = std::move(sched);
  sol.trajectory = std::move(current.traj);
  sol.costates = std::move(costates);
  sol.switching = std::move(phi);
  sol.max_switching_imag = max_imag;
  sol.transversality_residual = transversality_residual(sol, hs, cfg.gamma, cfg.denominator_floor);
  return sol;
}

double transversality_residual(const OptimalSolution& sol, const HamiltonianSet& hs, double gamma,
                               double floor) {
  if (sol.trajectory.states.empty() || sol.costates.costates.empty()) {
    throw std::invalid_argument("transversality_residual: solution has no final node");
  }
  const DensityMatrix& rho = sol.trajectory.states.back();
  const ComplexMatrix& pi = sol.costates.costates.back();
  const int n = sol.schedule.n_steps();
  const ComplexMatrix h = n > 0 ? assemble_hamiltonian(hs, sol.schedule.cell(n - 1)) : hs.h0();

  const Complex minus_i(0.0, -1.0);
  const ComplexMatrix rho_dot = minus_i * commutator(h, rho.matrix());
  const ComplexMatrix rho_dot_a = partial_trace_b(rho_dot, rho.dim_a(), rho.dim_b());
  const ComplexMatrix rho_a = rho.reduced_a();

  const double denom = std::sqrt(std::max(1.0 - purity(rho_a), floor));
  const ComplexMatrix g = (std::sqrt(2.0) / (2.0 * denom)) * rho_a;
  const double pontryagin = (pi.adjoint() * rho_dot).trace().real();
  const double boundary = (g * rho_dot_a).trace().real() - gamma;
  return std::abs(pontryagin - boundary);
}

OptimalSolution solve_fixed_tf(const DensityMatrix& rho0, const HamiltonianSet& hs, double tf,
                               const SolverConfig& cfg) {
  cfg.validate();
  std::vector<double> start(hs.u_max().size());
  for (size_t k = 0; k < start.size(); ++k) start[k] = cfg.initial_control * hs.u_max()[k];
  return forward_backward_sweep(rho0, hs, tf, cfg,
                                ControlSchedule::constant(0.0, tf, cfg.n_steps, start));
}

OptimalSolution optimize_final_time(const DensityMatrix& rho0, const HamiltonianSet& hs,
                                    const SolverConfig& cfg) {
  cfg.validate();
  if (!cfg.tf_search) throw std::invalid_argument("optimize_final_time: no tf search range configured");
  const TfSearch range = *cfg.tf_search;

  std::vector<TfEvaluation> trace;
  std::optional<OptimalSolution> best;
  auto keep = [&](OptimalSolution s) {
    trace.push_back({s.tf, s.objective});
    if (!best || s.objective < best->objective) best = std::move(s);
    return trace.back().objective;
  };
  auto solve = [&](double tf) { return solve_fixed_tf(rho0, hs, tf, cfg); };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = range.t_min;
  double b = range.t_max;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);

  auto fa = std::async(std::launch::async, solve, a);
  auto fc = std::async(std::launch::async, solve, c);
  auto fd = std::async(std::launch::async, solve, d);
  auto fb = std::async(std::launch::async, solve, b);
  keep(fa.get());
  double jc = keep(fc.get());
  double jd = keep(fd.get());
  keep(fb.get());

  while (b - a > range.tolerance) {
    if (jc <= jd) {
      b = d;
      d = c;
      jd = jc;
      c = b - ratio * (b - a);
      jc = keep(solve(c));
    } else {
      a = c;
      c = d;
      jc = jd;
      d = a + ratio * (b - a);
      jd = keep(solve(d));
    }
  }

  OptimalSolution out = std::move(*best);
  out.tf_evaluations = std::move(trace);
  return out;
}

}  // namespace qent
