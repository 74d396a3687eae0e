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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qent/dynamics.hpp"
#include "qent/pmp.hpp"
#include "qent/state.hpp"

namespace qent {

/// Parse or validation failure in a scenario or schedule document. The
/// message names the file position or the offending field.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density-matrix source: a named preset ("00", "phi+", ...) or an explicit matrix.
struct StateSpec {
  std::string name;  // empty when explicit
  ComplexMatrix matrix;

  bool operator==(const StateSpec& o) const;
};

struct SolverOverrides {
  std::optional<int> max_sweeps;
  std::optional<double> flip_fraction;
  std::optional<double> convergence_tol;
  std::optional<double> denominator_floor;
  std::optional<double> initial_control;

  bool operator==(const SolverOverrides&) const = default;
};

struct OutputPaths {
  std::string dir = "out";
  std::string time_series = "timeseries.csv";
  std::string summary = "summary.json";

  bool operator==(const OutputPaths&) const = default;
};

struct ScenarioConfig {
  std::string preset;              // scenario preset this was built from, if any
  std::string hamiltonian_preset;  // empty when matrices were given explicitly
  ComplexMatrix h0;
  std::vector<ComplexMatrix> controls;
  std::string initial_preset;  // empty when the mixture was given explicitly
  StateSpec rho_sep;
  StateSpec delta_rho;
  double epsilon = 0.01;
  double u_max = 1.0;
  double gamma = 0.1;
  int n_steps = 1000;
  std::optional<double> tf;
  std::optional<TfSearch> tf_search;
  SolverOverrides solver;
  OutputPaths output;

  bool operator==(const ScenarioConfig& o) const;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();

/// Scenario preset by name; throws ScenarioError for unknown names.
ScenarioConfig preset_scenario(const std::string& name);

ScenarioConfig load_scenario(const std::filesystem::path& path);
/// `source` labels error messages.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<config>");
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& cfg);

HamiltonianSet make_hamiltonians(const ScenarioConfig& cfg);
DensityMatrix make_initial_state(const ScenarioConfig& cfg);
SolverConfig make_solver_config(const ScenarioConfig& cfg);

ControlSchedule load_schedule(const std::filesystem::path& path);
ControlSchedule parse_schedule(const std::string& text, const std::string& source = "<schedule>");
nlohmann::ordered_json schedule_to_json(const ControlSchedule& sched);

/// Every double rendered as %.11e; containers keep insertion order.
std::string dump_scientific(const nlohmann::ordered_json& j, int indent = 2);

/// One row per node: t, u_1..u_m, concurrence_eq3, wootters_concurrence,
/// purity_reduced and, when `switching` is given, phi_1..phi_m. Node j shows
/// the controls and switching values of cell j; the last node repeats the
/// last cell.
void write_time_series(const std::filesystem::path& path, const Trajectory& traj,
                       const ControlSchedule& sched, const Eigen::MatrixXd* switching = nullptr);

struct RunOptions {
  std::optional<std::string> out_dir;  // wins over the environment and the config
};

/// Output directory: flag, then $QENT_OUT_DIR, then the config.
std::filesystem::path resolve_out_dir(const ScenarioConfig& cfg, const RunOptions& opts);

inline constexpr const char* kOutDirEnv = "QENT_OUT_DIR";

struct SimulateResult {
  Trajectory trajectory;
  double concurrence_final = 0.0;
  double wootters_final = 0.0;
  double objective = 0.0;
  std::filesystem::path time_series;
  std::filesystem::path summary;
};

/// Replays `schedule` from the configured initial state. The schedule is
/// checked against the bounds before anything is propagated.
SimulateResult run_simulate(const ScenarioConfig& cfg, const ControlSchedule& schedule,
                            const RunOptions& opts = {});

struct OptimizeResult {
  OptimalSolution solution;
  std::filesystem::path time_series;
  std::filesystem::path summary;
};

/// Fixed-tf sweep when cfg.tf is set, otherwise the tf search.
OptimizeResult run_optimize(const ScenarioConfig& cfg, const RunOptions& opts = {});

}  // namespace qent
