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

// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fd_oracle.hpp"
#include "oracles.hpp"
#include "qent/entanglement.hpp"
#include "qent/experiment.hpp"
#include "qent/pmp.hpp"
#include "scenario_fixture.hpp"

using namespace qent;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %d %s: %s [%.3f s%s]\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              in_time ? "" : ", over time limit");
  std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool all_finite(const OptimalSolution& s) {
  if (!std::isfinite(s.objective) || !std::isfinite(s.concurrence_final) ||
      !std::isfinite(s.transversality_residual) || !s.switching.allFinite()) {
    return false;
  }
  for (const auto& r : s.trajectory.states) {
    if (!r.matrix().allFinite()) return false;
  }
  for (const auto& p : s.costates.costates) {
    if (!p.allFinite()) return false;
  }
  return std::all_of(s.objective_history.begin(), s.objective_history.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

int main() {
  const auto out_root = fs::current_path() / "acceptance_out";
  fs::remove_all(out_root);

  report(1, "concurrence exactness", 1e-3, [] {
    double worst = 0.0;
    for (auto k : {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus}) {
      const auto psi = bell_state(k);
      worst = std::max(worst, std::abs(concurrence_of(density_from_pure(psi)) - 1.0));
      worst = std::max(worst, std::abs(concurrence_pure(psi) - 1.0));
    }
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const auto psi = PureState::basis(i, j);
        worst = std::max(worst, std::abs(concurrence_of(density_from_pure(psi))));
        worst = std::max(worst, std::abs(concurrence_pure(psi)));
      }
    }
    return Outcome{worst < 1e-12, fmt("max deviation %.3e", worst)};
  });

  report(2, "oracle equivalence", 1.0, [] {
    std::mt19937 rng(20260101);
    double reduced_gap = 0.0;
    double wootters_gap = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const PureState psi(oracle::random_state(rng, 4), 2, 2);
      const auto rho = density_from_pure(psi);
      const double c = concurrence_pure(psi);
      reduced_gap = std::max(reduced_gap, std::abs(concurrence_of(rho) - c));
      wootters_gap = std::max(wootters_gap, std::abs(wootters_concurrence(rho) - c));
    }
    return Outcome{reduced_gap < 1e-10 && wootters_gap < 1e-9,
                   fmt("reduced gap %.3e, wootters gap %.3e", reduced_gap, wootters_gap)};
  });

  report(3, "dynamics fidelity", 5.0, [] {
    const auto hs = fixture::reference_hamiltonians();
    const auto rho0 = fixture::reference_initial_state();
    const auto coarse = propagate_forward(rho0, hs, ControlSchedule::constant(0.0, 1.0, 1000, 3, -1.0));
    const auto fine = propagate_forward(rho0, hs, ControlSchedule::constant(0.0, 1.0, 100000, 3, -1.0));
    const double gap = max_abs_diff(coarse.states.back().matrix(), fine.states.back().matrix());
    const double p0 = purity(rho0);
    double drift = 0.0;
    for (const auto* traj : {&coarse, &fine}) {
      for (const auto& r : traj->states) drift = std::max(drift, std::abs(purity(r) - p0));
    }
    return Outcome{gap < 1e-6 && drift < 1e-8, fmt("final-state gap %.3e, purity drift %.3e", gap, drift)};
  });

  report(4, "gradient consistency", 10.0, [] {
    const auto hs = fixture::reference_hamiltonians();
    const auto rho0 = fixture::reference_initial_state();
    const int n = 200;
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(3, n, -1.0);
    for (int j = n / 2; j < n; ++j) v(0, j) = 1.0;
    const ControlSchedule sched(0.0, 1.0, v);
    const auto traj = propagate_forward(rho0, hs, sched);
    const auto term = terminal_costate(traj.states.back().reduced_a(), 1e-9);
    const auto costates = propagate_costate_backward(term.lifted, hs, sched);
    const Eigen::MatrixXd phi = cell_switching(hs, traj, costates);
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> cell(0, n - 1);
    std::uniform_int_distribution<int> chan(0, 2);
    int probes = 0;
    int agree = 0;
    while (probes < 20) {
      const int j = cell(rng);
      const int k = chan(rng);
      if (std::abs(phi(k, j)) <= 1e-6) continue;
      const double fd = oracle::central_difference(hs, rho0.matrix(), v, 1.0, 0.1, k, j);
      agree += (fd > 0) == (phi(k, j) > 0) ? 1 : 0;
      ++probes;
    }
    return Outcome{agree == probes, std::to_string(agree) + "/" + std::to_string(probes) + " signs agree"};
  });

  const auto cfg = preset_scenario("paper-sec4");
  OptimalSolution reference;
  bool have_reference = false;

  report(5, "bang-bang optimum on paper-sec4", 60.0, [&] {
    const auto res = run_optimize(cfg, RunOptions{(out_root / "run1").string()});
    reference = res.solution;
    have_reference = true;
    const auto& s = res.solution;
    bool monotone = true;
    for (size_t i = 1; i < s.objective_history.size(); ++i) {
      monotone = monotone && s.objective_history[i] <= s.objective_history[i - 1];
    }
    const bool bang = (s.schedule.values().array().abs() == 1.0).all();
    const bool switched = !s.switch_times.empty();
    const bool ok = monotone && bang && switched && s.concurrence_final >= 0.99 && s.tf <= 1.5;
    return Outcome{ok, fmt("tf %.4f, C %.6f, ", s.tf, s.concurrence_final) + std::to_string(s.switch_times.size()) +
                           " switches, monotone " + (monotone ? "yes" : "no") + ", bang-bang " +
                           (bang ? "yes" : "no")};
  });

  report(6, "transversality residual at the searched tf", 120.0, [&] {
    if (!have_reference) return Outcome{false, "no optimize result"};
    const auto hs = make_hamiltonians(cfg);
    const auto rho0 = make_initial_state(cfg);
    const auto solver = make_solver_config(cfg);
    const double r0 = reference.transversality_residual;
    const double lo = solve_fixed_tf(rho0, hs, reference.tf - 0.2, solver).transversality_residual;
    const double hi = solve_fixed_tf(rho0, hs, reference.tf + 0.2, solver).transversality_residual;
    return Outcome{r0 <= lo && r0 <= hi, fmt("residual %.4e, at tf-0.2 %.4e, at tf+0.2 %.4e", r0, lo, hi)};
  });

  report(7, "determinism", 0.0, [&] {
    run_optimize(cfg, RunOptions{(out_root / "run2").string()});
    const auto a = slurp(out_root / "run1" / "summary.json");
    const auto b = slurp(out_root / "run2" / "summary.json");
    return Outcome{!a.empty() && a == b, a == b ? "summary files byte-identical" : "summary files differ"};
  });

  report(8, "separable start", 0.0, [] {
    const auto sep_cfg = preset_scenario("paper-sec4-separable");
    const auto hs = make_hamiltonians(sep_cfg);
    const auto rho0 = make_initial_state(sep_cfg);
    const auto solver = make_solver_config(sep_cfg);
    const bool start_floor = terminal_costate(rho0.reduced_a(), solver.denominator_floor).floor_active;
    // A horizon short enough that the final state is still separable to roundoff.
    auto short_cfg = solver;
    short_cfg.n_steps = 10;
    const auto shortrun = solve_fixed_tf(rho0, hs, 1e-6, short_cfg);
    const auto full = run_optimize(sep_cfg, RunOptions{(fs::current_path() / "acceptance_out" / "separable").string()});
    const bool finite = all_finite(shortrun) && all_finite(full.solution);
    const bool ok = start_floor && shortrun.floor_active && shortrun.floor_ever_active && finite;
    return Outcome{ok, std::string("floor at start ") + (start_floor ? "yes" : "no") + ", short-horizon flag " +
                           (shortrun.floor_active ? "set" : "unset") + ", full run C " +
                           fmt("%.6f", full.solution.concurrence_final) + ", all finite " +
                           (finite ? "yes" : "no")};
  });

  std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME FAILED");
  return failures == 0 ? 0 : 1;
}
