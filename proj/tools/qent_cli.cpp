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

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qent/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string preset;
  std::optional<std::string> out_dir;
  std::optional<int> n_steps;
  std::optional<double> tf;
  std::optional<double> gamma;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  auto* cfg = cmd->add_option("--config", f.config, "scenario file (JSON)");
  auto* pre = cmd->add_option("--preset", f.preset, "start from a named preset instead of a file");
  cfg->excludes(pre);
  cmd->add_option("--out-dir", f.out_dir, "output directory (overrides $QENT_OUT_DIR and the config)");
  cmd->add_option("--n-steps", f.n_steps, "number of time cells")->check(CLI::PositiveNumber);
  cmd->add_option("--tf", f.tf, "fixed final time (disables the tf search)")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", f.gamma, "time-penalty weight")->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", f.quiet, "suppress the result line on stdout");
}

qent::ScenarioConfig build_config(const CommonFlags& f) {
  if (f.config.empty() && f.preset.empty()) throw qent::ScenarioError("one of --config or --preset is required");
  qent::ScenarioConfig cfg = f.config.empty() ? qent::preset_scenario(f.preset) : qent::load_scenario(f.config);
  if (f.n_steps) cfg.n_steps = *f.n_steps;
  if (f.gamma) cfg.gamma = *f.gamma;
  if (f.tf) {
    cfg.tf = *f.tf;
    cfg.tf_search.reset();
  }
  return cfg;
}

qent::RunOptions run_options(const CommonFlags& f) {
  qent::RunOptions opts;
  opts.out_dir = f.out_dir;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal bang-bang entanglement control for two-qubit systems"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  std::string schedule_path;
  auto* simulate = app.add_subcommand("simulate", "replay a fixed control schedule");
  add_common(simulate, sim_flags);
  simulate->add_option("--schedule", schedule_path, "schedule file (JSON)")->required();

  CommonFlags opt_flags;
  auto* optimize = app.add_subcommand("optimize", "run the forward-backward sweep (and tf search)");
  add_common(optimize, opt_flags);

  auto* presets = app.add_subcommand("presets", "preset scenarios");
  presets->require_subcommand(1);
  auto* presets_list = presets->add_subcommand("list", "list preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto cfg = build_config(sim_flags);
      const auto schedule = qent::load_schedule(schedule_path);
      const auto res = qent::run_simulate(cfg, schedule, run_options(sim_flags));
      if (!sim_flags.quiet) {
        std::printf("concurrence_final=%.11e wootters_final=%.11e summary=%s\n", res.concurrence_final,
                    res.wootters_final, res.summary.string().c_str());
      }
    } else if (*optimize) {
      const auto cfg = build_config(opt_flags);
      const auto res = qent::run_optimize(cfg, run_options(opt_flags));
      const auto& sol = res.solution;
      if (!opt_flags.quiet) {
        std::printf("objective=%.11e tf=%.11e concurrence_final=%.11e sweeps=%d converged=%s summary=%s\n",
                    sol.objective, sol.tf, sol.concurrence_final, sol.sweeps_used,
                    sol.converged ? "true" : "false", res.summary.string().c_str());
      }
    } else if (*presets_list) {
      for (const auto& p : qent::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
    }
  } catch (const qent::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
