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

#include "qent/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qent/entanglement.hpp"

namespace qent {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kReferencePreset = "paper-sec4";
constexpr const char* kSeparablePreset = "paper-sec4-separable";

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError("field '" + field + "': " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

json parse_document(const std::string& body, const std::string& source) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    const size_t upto = std::min(e.byte, body.size());
    const auto line = 1 + std::count(body.begin(), body.begin() + static_cast<long>(upto), '\n');
    std::ostringstream os;
    os << source << ":" << line << ": parse error: " << e.what();
    throw ScenarioError(os.str());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  ComplexMatrix m;
  for (size_t i = 0; i < rows; ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].empty()) fail(rf, "expected a non-empty row");
    if (i == 0) {
      cols = j[i].size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (j[i].size() != cols) {
      fail(rf, "row length differs from row 0");
    }
    for (size_t c = 0; c < cols; ++c) {
      const std::string ef = rf + "[" + std::to_string(c) + "]";
      const json& e = j[i][c];
      if (!e.is_array() || e.size() != 2) fail(ef, "expected a [real, imaginary] pair");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          Complex(number(e[0], ef + "[0]"), number(e[1], ef + "[1]"));
    }
  }
  return m;
}

StateSpec named_state(const std::string& name, const std::string& field) {
  static const char* kBasis[] = {"00", "01", "10", "11"};
  for (int b = 0; b < 4; ++b) {
    if (name == kBasis[b]) return {name, density_from_pure(PureState::basis(b / 2, b % 2)).matrix()};
  }
  try {
    return {name, density_from_pure(bell_state(parse_bell_kind(name))).matrix()};
  } catch (const std::invalid_argument&) {
    fail(field, "unknown state '" + name + "' (expected 00, 01, 10, 11, phi+, phi-, psi+ or psi-)");
  }
}

StateSpec state_from_json(const json& j, const std::string& field) {
  if (j.is_string()) return named_state(j.get<std::string>(), field);
  return {"", matrix_from_json(j, field)};
}

json state_to_json(const StateSpec& s) {
  if (!s.name.empty()) return s.name;
  return matrix_to_json(s.matrix);
}

void apply_reference_hamiltonians(ScenarioConfig& cfg) {
  using namespace pauli;
  cfg.hamiltonian_preset = kReferencePreset;
  cfg.h0 = kron(z(), z());
  cfg.controls = {kron(x(), y()) + kron(z(), z()), kron(x(), z()) + kron(z(), x()),
                  kron(y(), z()) + kron(z(), y())};
}

void apply_reference_initial_state(ScenarioConfig& cfg) {
  cfg.initial_preset = kReferencePreset;
  cfg.rho_sep = named_state("00", "initial_state");
  cfg.delta_rho = named_state("phi+", "initial_state");
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

void dump_into(std::string& out, const json& j, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + json(key).dump() + (indent > 0 ? ": " : ":");
        dump_into(out, value, indent, depth + 1);
      }
      out += nl + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (size_t i = 0; i < j.size(); ++i) {
        if (i > 0) {
          out += ",";
          out += nl;
        }
        out += pad;
        dump_into(out, j[i], indent, depth + 1);
      }
      out += nl + close + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

json solver_to_json(const SolverConfig& s) {
  json j;
  j["gamma"] = s.gamma;
  j["max_sweeps"] = s.max_sweeps;
  j["flip_fraction"] = s.flip_fraction;
  j["convergence_tol"] = s.convergence_tol;
  j["denominator_floor"] = s.denominator_floor;
  j["n_steps"] = s.n_steps;
  j["initial_control"] = s.initial_control;
  if (s.tf_search) {
    j["tf_search"] = {{"t_min", s.tf_search->t_min},
                      {"t_max", s.tf_search->t_max},
                      {"tolerance", s.tf_search->tolerance}};
  }
  return j;
}

json config_echo(const ScenarioConfig& cfg) {
  json echo = scenario_to_json(cfg);
  echo["solver_effective"] = solver_to_json(make_solver_config(cfg));
  return echo;
}

json switch_times_to_json(const std::vector<SwitchTime>& st) {
  json arr = json::array();
  for (const auto& s : st) arr.push_back({{"channel", s.channel}, {"time", s.time}});
  return arr;
}

}  // namespace

bool StateSpec::operator==(const StateSpec& o) const {
  return name == o.name && matrix.rows() == o.matrix.rows() && matrix.cols() == o.matrix.cols() &&
         matrix == o.matrix;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  auto same = [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  if (controls.size() != o.controls.size()) return false;
  for (size_t k = 0; k < controls.size(); ++k) {
    if (!same(controls[k], o.controls[k])) return false;
  }
  const bool search_equal =
      tf_search.has_value() == o.tf_search.has_value() &&
      (!tf_search || (tf_search->t_min == o.tf_search->t_min && tf_search->t_max == o.tf_search->t_max &&
                      tf_search->tolerance == o.tf_search->tolerance));
  return preset == o.preset && hamiltonian_preset == o.hamiltonian_preset && same(h0, o.h0) &&
         initial_preset == o.initial_preset && rho_sep == o.rho_sep && delta_rho == o.delta_rho &&
         epsilon == o.epsilon && u_max == o.u_max && gamma == o.gamma && n_steps == o.n_steps &&
         tf == o.tf && search_equal && solver == o.solver && output == o.output;
}

std::vector<PresetInfo> list_presets() {
  return {
      {kReferencePreset,
       "two qubits, H0 = sz sz, three coupling Hamiltonians, rho0 = 0.99 |00><00| + 0.01 |phi+><phi+|, "
       "u_max = 1, gamma = 0.1, 1000 steps, tf searched on [0.2, 2.0]"},
      {kSeparablePreset, "same system started from the exactly separable |00><00| (epsilon = 0)"},
  };
}

ScenarioConfig preset_scenario(const std::string& name) {
  if (name != kReferencePreset && name != kSeparablePreset) {
    throw ScenarioError("unknown preset '" + name + "'");
  }
  ScenarioConfig cfg;
  cfg.preset = name;
  apply_reference_hamiltonians(cfg);
  apply_reference_initial_state(cfg);
  cfg.epsilon = name == kSeparablePreset ? 0.0 : 0.01;
  cfg.u_max = 1.0;
  cfg.gamma = 0.1;
  cfg.n_steps = 1000;
  cfg.tf_search = TfSearch{0.2, 2.0, 1e-3};
  return cfg;
}

ScenarioConfig parse_scenario(const std::string& body, const std::string& source) {
  const json doc = parse_document(body, source);
  if (!doc.is_object()) throw ScenarioError(source + ": top level must be an object");

  try {
    reject_unknown_keys(doc,
                        {"preset", "hamiltonians", "initial_state", "epsilon", "u_max", "gamma",
                         "n_steps", "tf", "tf_search", "solver", "output"},
                        "");

    ScenarioConfig cfg;
    if (doc.contains("preset")) cfg = preset_scenario(text(doc["preset"], "preset"));

    if (doc.contains("hamiltonians")) {
      const json& h = doc["hamiltonians"];
      if (h.is_string()) {
        if (h.get<std::string>() != kReferencePreset) fail("hamiltonians", "unknown preset '" + h.get<std::string>() + "'");
        apply_reference_hamiltonians(cfg);
      } else if (h.is_object()) {
        reject_unknown_keys(h, {"h0", "controls"}, "hamiltonians");
        if (!h.contains("h0")) fail("hamiltonians.h0", "missing");
        if (!h.contains("controls") || !h["controls"].is_array()) {
          fail("hamiltonians.controls", "expected an array of matrices");
        }
        cfg.hamiltonian_preset.clear();
        cfg.h0 = matrix_from_json(h["h0"], "hamiltonians.h0");
        cfg.controls.clear();
        for (size_t k = 0; k < h["controls"].size(); ++k) {
          cfg.controls.push_back(
              matrix_from_json(h["controls"][k], "hamiltonians.controls[" + std::to_string(k) + "]"));
        }
      } else {
        fail("hamiltonians", "expected a preset name or an object with h0 and controls");
      }
    }

    std::optional<double> eps_inline;
    if (doc.contains("initial_state")) {
      const json& s = doc["initial_state"];
      if (s.is_string()) {
        const std::string name = s.get<std::string>();
        if (name != kReferencePreset) fail("initial_state", "unknown preset '" + name + "'");
        apply_reference_initial_state(cfg);
      } else if (s.is_object()) {
        reject_unknown_keys(s, {"rho_sep", "delta_rho", "epsilon"}, "initial_state");
        if (!s.contains("rho_sep")) fail("initial_state.rho_sep", "missing");
        if (!s.contains("delta_rho")) fail("initial_state.delta_rho", "missing");
        cfg.initial_preset.clear();
        cfg.rho_sep = state_from_json(s["rho_sep"], "initial_state.rho_sep");
        cfg.delta_rho = state_from_json(s["delta_rho"], "initial_state.delta_rho");
        if (s.contains("epsilon")) eps_inline = number(s["epsilon"], "initial_state.epsilon");
      } else {
        fail("initial_state", "expected a preset name or an object");
      }
    }
    if (doc.contains("epsilon")) {
      if (eps_inline) fail("epsilon", "given both at top level and inside initial_state");
      cfg.epsilon = number(doc["epsilon"], "epsilon");
    } else if (eps_inline) {
      cfg.epsilon = *eps_inline;
    }

    if (doc.contains("u_max")) cfg.u_max = number(doc["u_max"], "u_max");
    if (doc.contains("gamma")) cfg.gamma = number(doc["gamma"], "gamma");
    if (doc.contains("n_steps")) cfg.n_steps = integer(doc["n_steps"], "n_steps");

    if (doc.contains("tf") && doc.contains("tf_search")) {
      fail("tf", "exactly one of 'tf' and 'tf_search' may be given");
    }
    if (doc.contains("tf")) {
      cfg.tf = number(doc["tf"], "tf");
      cfg.tf_search.reset();
    }
    if (doc.contains("tf_search")) {
      const json& r = doc["tf_search"];
      if (!r.is_object()) fail("tf_search", "expected an object");
      reject_unknown_keys(r, {"t_min", "t_max", "tolerance"}, "tf_search");
      if (!r.contains("t_min") || !r.contains("t_max")) fail("tf_search", "needs t_min and t_max");
      TfSearch search;
      search.t_min = number(r["t_min"], "tf_search.t_min");
      search.t_max = number(r["t_max"], "tf_search.t_max");
      if (r.contains("tolerance")) search.tolerance = number(r["tolerance"], "tf_search.tolerance");
      cfg.tf_search = search;
      cfg.tf.reset();
    }

    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      if (!s.is_object()) fail("solver", "expected an object");
      reject_unknown_keys(s,
                          {"max_sweeps", "flip_fraction", "convergence_tol", "denominator_floor",
                           "initial_control"},
                          "solver");
      if (s.contains("max_sweeps")) cfg.solver.max_sweeps = integer(s["max_sweeps"], "solver.max_sweeps");
      if (s.contains("flip_fraction")) cfg.solver.flip_fraction = number(s["flip_fraction"], "solver.flip_fraction");
      if (s.contains("convergence_tol")) {
        cfg.solver.convergence_tol = number(s["convergence_tol"], "solver.convergence_tol");
      }
      if (s.contains("denominator_floor")) {
        cfg.solver.denominator_floor = number(s["denominator_floor"], "solver.denominator_floor");
      }
      if (s.contains("initial_control")) {
        cfg.solver.initial_control = number(s["initial_control"], "solver.initial_control");
      }
    }

    if (doc.contains("output")) {
      const json& o = doc["output"];
      if (!o.is_object()) fail("output", "expected an object");
      reject_unknown_keys(o, {"dir", "time_series", "summary"}, "output");
      if (o.contains("dir")) cfg.output.dir = text(o["dir"], "output.dir");
      if (o.contains("time_series")) cfg.output.time_series = text(o["time_series"], "output.time_series");
      if (o.contains("summary")) cfg.output.summary = text(o["summary"], "output.summary");
    }

    // Cross-field validation.
    if (cfg.h0.size() == 0) fail("hamiltonians", "missing (give a preset name or explicit matrices)");
    if (cfg.rho_sep.matrix.size() == 0) fail("initial_state", "missing");
    if (cfg.tf.has_value() == cfg.tf_search.has_value()) {
      fail("tf", "exactly one of 'tf' and 'tf_search' must be given");
    }
    if (cfg.tf && !(*cfg.tf > 0.0)) fail("tf", "must be positive");
    if (!(cfg.u_max > 0.0)) fail("u_max", "must be positive");
    if (!(cfg.gamma > 0.0)) fail("gamma", "must be positive");
    if (cfg.n_steps <= 0) fail("n_steps", "must be positive");
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) fail("epsilon", "must lie in [0, 1]");
    try {
      (void)make_hamiltonians(cfg);
    } catch (const std::invalid_argument& e) {
      fail("hamiltonians", e.what());
    }
    try {
      (void)make_initial_state(cfg);
    } catch (const std::invalid_argument& e) {
      fail("initial_state", e.what());
    }
    try {
      make_solver_config(cfg).validate();
    } catch (const std::invalid_argument& e) {
      fail("solver", e.what());
    }
    return cfg;
  } catch (const ScenarioError& e) {
    throw ScenarioError(source + ": " + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.string());
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  if (!cfg.hamiltonian_preset.empty()) {
    j["hamiltonians"] = cfg.hamiltonian_preset;
  } else {
    json controls = json::array();
    for (const auto& c : cfg.controls) controls.push_back(matrix_to_json(c));
    j["hamiltonians"] = {{"h0", matrix_to_json(cfg.h0)}, {"controls", std::move(controls)}};
  }
  if (!cfg.initial_preset.empty()) {
    j["initial_state"] = cfg.initial_preset;
  } else {
    j["initial_state"] = {{"rho_sep", state_to_json(cfg.rho_sep)},
                          {"delta_rho", state_to_json(cfg.delta_rho)}};
  }
  j["epsilon"] = cfg.epsilon;
  j["u_max"] = cfg.u_max;
  j["gamma"] = cfg.gamma;
  j["n_steps"] = cfg.n_steps;
  if (cfg.tf) j["tf"] = *cfg.tf;
  if (cfg.tf_search) {
    j["tf_search"] = {{"t_min", cfg.tf_search->t_min},
                      {"t_max", cfg.tf_search->t_max},
                      {"tolerance", cfg.tf_search->tolerance}};
  }
  json solver = json::object();
  if (cfg.solver.max_sweeps) solver["max_sweeps"] = *cfg.solver.max_sweeps;
  if (cfg.solver.flip_fraction) solver["flip_fraction"] = *cfg.solver.flip_fraction;
  if (cfg.solver.convergence_tol) solver["convergence_tol"] = *cfg.solver.convergence_tol;
  if (cfg.solver.denominator_floor) solver["denominator_floor"] = *cfg.solver.denominator_floor;
  if (cfg.solver.initial_control) solver["initial_control"] = *cfg.solver.initial_control;
  if (!solver.empty()) j["solver"] = std::move(solver);
  j["output"] = {{"dir", cfg.output.dir},
                 {"time_series", cfg.output.time_series},
                 {"summary", cfg.output.summary}};
  return j;
}

HamiltonianSet make_hamiltonians(const ScenarioConfig& cfg) {
  return HamiltonianSet(cfg.h0, cfg.controls, cfg.u_max);
}

DensityMatrix make_initial_state(const ScenarioConfig& cfg) {
  const auto dim = cfg.rho_sep.matrix.rows();
  if (dim != cfg.h0.rows()) {
    throw DimensionError("initial state is " + std::to_string(dim) + "-dimensional, H0 is " +
                         std::to_string(cfg.h0.rows()));
  }
  // Only qubit pairs ship; other sizes need the split spelled out.
  if (dim != 4) throw DimensionError("initial state must be a two-qubit (4x4) density matrix");
  const DensityMatrix sep(cfg.rho_sep.matrix, 2, 2);
  const DensityMatrix delta(cfg.delta_rho.matrix, 2, 2);
  return perturbed_separable(sep, delta, cfg.epsilon);
}

SolverConfig make_solver_config(const ScenarioConfig& cfg) {
  SolverConfig s;
  s.gamma = cfg.gamma;
  s.n_steps = cfg.n_steps;
  s.tf_search = cfg.tf_search;
  if (cfg.solver.max_sweeps) s.max_sweeps = *cfg.solver.max_sweeps;
  if (cfg.solver.flip_fraction) s.flip_fraction = *cfg.solver.flip_fraction;
  if (cfg.solver.convergence_tol) s.convergence_tol = *cfg.solver.convergence_tol;
  if (cfg.solver.denominator_floor) s.denominator_floor = *cfg.solver.denominator_floor;
  if (cfg.solver.initial_control) s.initial_control = *cfg.solver.initial_control;
  return s;
}

ControlSchedule parse_schedule(const std::string& body, const std::string& source) {
  const json doc = parse_document(body, source);
  try {
    if (!doc.is_object()) throw ScenarioError("top level must be an object");
    reject_unknown_keys(doc, {"t0", "tf", "n_steps", "values"}, "");
    for (const char* key : {"t0", "tf", "n_steps", "values"}) {
      if (!doc.contains(key)) fail(key, "missing");
    }
    const double t0 = number(doc["t0"], "t0");
    const double tf = number(doc["tf"], "tf");
    const int n = integer(doc["n_steps"], "n_steps");
    if (n < 0) fail("n_steps", "must be non-negative");
    const json& rows = doc["values"];
    if (!rows.is_array()) fail("values", "expected an array of channel rows");
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), n);
    for (size_t k = 0; k < rows.size(); ++k) {
      const std::string rf = "values[" + std::to_string(k) + "]";
      if (!rows[k].is_array() || rows[k].size() != static_cast<size_t>(n)) {
        fail(rf, "expected " + std::to_string(n) + " values");
      }
      for (int j = 0; j < n; ++j) {
        values(static_cast<Eigen::Index>(k), j) =
            number(rows[k][static_cast<size_t>(j)], rf + "[" + std::to_string(j) + "]");
      }
    }
    try {
      return ControlSchedule(t0, tf, std::move(values));
    } catch (const std::invalid_argument& e) {
      fail("tf", e.what());
    }
  } catch (const ScenarioError& e) {
    throw ScenarioError(source + ": " + e.what());
  }
}

ControlSchedule load_schedule(const std::filesystem::path& path) {
  return parse_schedule(read_file(path), path.string());
}

json schedule_to_json(const ControlSchedule& sched) {
  json rows = json::array();
  for (int k = 0; k < sched.channels(); ++k) {
    json row = json::array();
    for (int j = 0; j < sched.n_steps(); ++j) row.push_back(sched.value(k, j));
    rows.push_back(std::move(row));
  }
  return {{"t0", sched.t0()}, {"tf", sched.tf()}, {"n_steps", sched.n_steps()}, {"values", rows}};
}

std::string dump_scientific(const json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  out += "\n";
  return out;
}

void write_time_series(const std::filesystem::path& path, const Trajectory& traj,
                       const ControlSchedule& sched, const Eigen::MatrixXd* switching) {
  const int m = sched.channels();
  const int n = sched.n_steps();
  if (traj.states.size() != static_cast<size_t>(n) + 1) {
    throw DimensionError("write_time_series: trajectory length does not match schedule");
  }
  if (switching != nullptr && (switching->rows() != m || switching->cols() != n)) {
    throw DimensionError("write_time_series: switching matrix does not match schedule");
  }
  std::string out = "t";
  for (int k = 1; k <= m; ++k) out += ",u_" + std::to_string(k);
  out += ",concurrence_eq3,wootters_concurrence,purity_reduced";
  if (switching != nullptr) {
    for (int k = 1; k <= m; ++k) out += ",phi_" + std::to_string(k);
  }
  out += "\n";
  for (int j = 0; j <= n; ++j) {
    const int cell = std::min(j, n - 1);
    const DensityMatrix& rho = traj.states[static_cast<size_t>(j)];
    out += format_double(traj.times[static_cast<size_t>(j)]);
    for (int k = 0; k < m; ++k) out += "," + format_double(n > 0 ? sched.value(k, cell) : 0.0);
    out += "," + format_double(concurrence_of(rho));
    out += "," + format_double(rho.dim() == 4 ? wootters_concurrence(rho) : 0.0);
    out += "," + format_double(purity(rho.reduced_a()));
    if (switching != nullptr) {
      for (int k = 0; k < m; ++k) out += "," + format_double((*switching)(k, cell));
    }
    out += "\n";
  }
  write_text(path, out);
}

std::filesystem::path resolve_out_dir(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (opts.out_dir) return *opts.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return cfg.output.dir;
}

SimulateResult run_simulate(const ScenarioConfig& cfg, const ControlSchedule& schedule,
                            const RunOptions& opts) {
  const HamiltonianSet hs = make_hamiltonians(cfg);
  check_schedule(schedule, hs);
  const DensityMatrix rho0 = make_initial_state(cfg);

  SimulateResult res;
  res.trajectory = propagate_forward(rho0, hs, schedule);
  const DensityMatrix& last = res.trajectory.states.back();
  res.concurrence_final = concurrence_of(last);
  res.wootters_final = wootters_concurrence(last);
  const double horizon = schedule.tf() - schedule.t0();
  res.objective = -res.concurrence_final + cfg.gamma * horizon;

  const auto dir = resolve_out_dir(cfg, opts);
  res.time_series = dir / cfg.output.time_series;
  res.summary = dir / cfg.output.summary;
  write_time_series(res.time_series, res.trajectory, schedule);

  json summary;
  summary["mode"] = "simulate";
  summary["objective"] = res.objective;
  summary["tf"] = schedule.tf();
  summary["concurrence_final"] = res.concurrence_final;
  summary["wootters_final"] = res.wootters_final;
  summary["switch_times"] = switch_times_to_json(switch_times(schedule));
  summary["n_steps"] = schedule.n_steps();
  summary["config_echo"] = config_echo(cfg);
  write_text(res.summary, dump_scientific(summary));
  return res;
}

OptimizeResult run_optimize(const ScenarioConfig& cfg, const RunOptions& opts) {
  const HamiltonianSet hs = make_hamiltonians(cfg);
  const DensityMatrix rho0 = make_initial_state(cfg);
  const SolverConfig solver = make_solver_config(cfg);

  OptimizeResult res;
  const auto dir = resolve_out_dir(cfg, opts);
  res.time_series = dir / cfg.output.time_series;
  res.summary = dir / cfg.output.summary;

  try {
    res.solution = cfg.tf ? solve_fixed_tf(rho0, hs, *cfg.tf, solver)
                          : optimize_final_time(rho0, hs, solver);
  } catch (const std::runtime_error& e) {
    json failed;
    failed["mode"] = "optimize";
    failed["status"] = "failed";
    failed["partial"] = true;
    failed["error"] = e.what();
    failed["config_echo"] = config_echo(cfg);
    write_text(res.summary, dump_scientific(failed));
    throw;
  }
  const OptimalSolution& sol = res.solution;
  write_time_series(res.time_series, sol.trajectory, sol.schedule, &sol.switching);

  json summary;
  summary["mode"] = "optimize";
  summary["objective"] = sol.objective;
  summary["tf"] = sol.tf;
  summary["concurrence_final"] = sol.concurrence_final;
  summary["switch_times"] = switch_times_to_json(sol.switch_times);
  summary["sweeps_used"] = sol.sweeps_used;
  summary["transversality_residual"] = sol.transversality_residual;
  summary["converged"] = sol.converged;
  summary["termination"] = std::string(to_string(sol.termination));
  summary["floor_active"] = sol.floor_active;
  summary["floor_ever_active"] = sol.floor_ever_active;
  summary["wootters_final"] = wootters_concurrence(sol.trajectory.states.back());
  summary["max_switching_imag"] = sol.max_switching_imag;
  summary["objective_history"] = sol.objective_history;
  json evals = json::array();
  for (const auto& e : sol.tf_evaluations) evals.push_back({{"tf", e.tf}, {"objective", e.objective}});
  summary["tf_evaluations"] = std::move(evals);
  summary["config_echo"] = config_echo(cfg);
  write_text(res.summary, dump_scientific(summary));
  return res;
}

}  // namespace qent
