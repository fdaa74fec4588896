// Copyright 2026 The qadder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   qadder simulate   --input1 H --input2 D
//   qadder table1     [--mode tomographic] [--seed 7]
//   qadder sweep      --param phase --grid 0.775pi,0.633pi
//   qadder tomography --counts counts.json --target D
//   qadder run        --config configs/table1.json
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error (including a
// run in which every pair failed).

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qadder/qadder.hpp"

namespace {

using namespace qadder;
using experiment::ConfigError;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("cannot parse " + what + " '" + s + "'");
  return v;
}

// "0.5", "0.775pi", "pi"
double parse_grid_value(std::string s) {
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    s.resize(s.size() - 2);
    if (s.empty()) return scale;
  }
  return scale * parse_double(s, "grid value");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& item : split(text, ',')) grid.push_back(parse_grid_value(item));
  if (grid.empty()) throw ConfigError("--grid must list at least one value");
  return grid;
}

// Named state (H V D A R L + -), "bloch:theta,phi" in degrees, or
// "re,im;re,im".
Qubit parse_state(const std::string& text) {
  if (text == "H") return Qubit::H();
  if (text == "V") return Qubit::V();
  if (text == "D" || text == "+") return Qubit::D();
  if (text == "A" || text == "-") return Qubit::A();
  if (text == "R") return Qubit::R();
  if (text == "L") return Qubit::L();
  if (text.rfind("bloch:", 0) == 0) {
    const auto parts = split(text.substr(6), ',');
    if (parts.size() != 2) throw ConfigError("bloch state must be bloch:theta,phi");
    return Qubit::from_bloch(optics::degrees(parse_double(parts[0], "bloch theta")),
                             optics::degrees(parse_double(parts[1], "bloch phi")));
  }
  const auto amps = split(text, ';');
  if (amps.size() != 2) throw ConfigError("cannot parse state '" + text + "'");
  Complex a[2];
  for (int i = 0; i < 2; ++i) {
    const auto ri = split(amps[i], ',');
    if (ri.size() != 2) throw ConfigError("amplitude must be re,im in '" + text + "'");
    a[i] = {parse_double(ri[0], "amplitude"), parse_double(ri[1], "amplitude")};
  }
  const double norm = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  if (!(std::abs(norm - 1.0) < 1e-3)) throw ConfigError("state '" + text + "' is not normalized");
  if (std::abs(norm - 1.0) > Qubit::kNormTolerance) {
    std::cerr << "warning: renormalized state '" << text << "'\n";
  }
  return Qubit::normalized(a[0], a[1]);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
  std::optional<double> theta;
  std::optional<double> visibility;
  std::optional<std::string> mode;
  std::string format = "csv";
  std::string out;
  std::string config;
  bool lenient = false;
};

experiment::ExperimentSpec load_config(const GlobalOptions& g) {
  std::vector<std::string> warnings;
  auto spec = experiment::parse_spec(read_file(g.config), {.strict = !g.lenient}, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return spec;
}

void apply_overrides(experiment::ExperimentSpec& spec, const GlobalOptions& g) {
  if (g.seed) spec.seeds = {*g.seed};
  if (g.shots) {
    spec.shots = *g.shots;
    spec.noise.total_counts = *g.shots;
  }
  if (g.theta) spec.theta_degrees = *g.theta;
  if (g.visibility) {
    spec.noise.control_visibility = *g.visibility;
    spec.noise.calibration = noise::Calibration::kControlOnly;
  }
  if (g.mode) spec.mode = experiment::parse_mode(*g.mode);
  spec.validate();
}

int finish(const experiment::ResultTable& table, const GlobalOptions& g) {
  const auto format = experiment::parse_format(g.format);
  if (g.out.empty() || g.out == "-") {
    experiment::emit(table, format, std::cout);
  } else {
    experiment::emit_to_file(table, format, g.out);
  }
  for (const auto& row : table.rows) {
    if (!row.ok()) std::cerr << "pair " << row.pair_id << ": " << *row.error << '\n';
  }
  return table.all_failed() ? kExitRuntime : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qadder: superposition of two unknown photonic qubit states"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base seed (replaces the seed list)");
  app.add_option("--shots", g.shots, "Total counts per pair, split evenly over the three bases")
      ->check(CLI::PositiveNumber);
  app.add_option("--theta", g.theta, "Control angle in degrees, [0, 90]");
  app.add_option("--visibility", g.visibility, "Control-pair visibility, [0, 1]");
  app.add_option("--mode", g.mode, "ideal | noisy | tomographic");
  app.add_option("--format", g.format, "csv | json");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--config", g.config, "JSON experiment document");
  app.add_flag("--lenient", g.lenient, "Warn instead of failing on unknown config fields");

  std::string input1, input2;
  auto* simulate = app.add_subcommand("simulate", "Superpose one input pair");
  simulate->add_option("--input1", input1, "First state")->required();
  simulate->add_option("--input2", input2, "Second state")->required();

  auto* table1 = app.add_subcommand("table1", "Run the eleven benchmark pairs");

  std::string param, grid_text;
  auto* sweep = app.add_subcommand("sweep", "Sweep theta, phase or visibility");
  sweep->add_option("--param", param, "theta | phase | visibility")->required();
  sweep->add_option("--grid", grid_text, "Comma-separated values; a 'pi' suffix multiplies by pi")
      ->required();

  std::string counts_path, target_text = "D", method_text = "mle";
  int resamples = 100;
  auto* tomo = app.add_subcommand("tomography", "Reconstruct a qubit from counts in a JSON file");
  tomo->add_option("--counts", counts_path, "File with {n_H, n_V, n_D, n_A, n_R, n_L}")->required();
  tomo->add_option("--target", target_text, "Target state for fidelity and distance");
  tomo->add_option("--method", method_text, "mle | linear");
  tomo->add_option("--resamples", resamples, "Bootstrap resamples (0 disables)");

  auto* run = app.add_subcommand("run", "Run the experiment described by --config");

  for (auto* sub : {simulate, table1, sweep, tomo, run}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    experiment::ExperimentSpec spec;
    if (simulate->parsed()) {
      if (!g.config.empty()) spec = load_config(g);
      if (!g.mode) spec.mode = experiment::Mode::kIdeal;
      const Qubit q1 = parse_state(input1), q2 = parse_state(input2);
      spec.pairs = {{q1, q2, experiment::qubit_label(q1), experiment::qubit_label(q2)}};
      apply_overrides(spec, g);
      return finish(experiment::run_experiment(spec), g);
    }
    if (table1->parsed()) {
      spec = experiment::builtin_table1();
      if (!g.config.empty()) {
        auto cfg = load_config(g);
        cfg.pairs = spec.pairs;
        spec = cfg;
      }
      apply_overrides(spec, g);
      return finish(experiment::run_experiment(spec), g);
    }
    if (sweep->parsed()) {
      spec = g.config.empty() ? experiment::builtin_table1() : load_config(g);
      apply_overrides(spec, g);
      const auto grid = parse_grid(grid_text);
      const auto parameter = experiment::parse_sweep_parameter(param);
      try {
        return finish(experiment::sweep(spec, parameter, grid), g);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
    if (tomo->parsed()) {
      tomography::CountsRecord counts;
      try {
        counts = tomography::counts_from_json(read_file(counts_path));
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      const Qubit target = parse_state(target_text);
      tomography::Method method;
      if (method_text == "mle") {
        method = tomography::Method::kMle;
      } else if (method_text == "linear") {
        method = tomography::Method::kLinear;
      } else {
        throw ConfigError("--method must be mle or linear");
      }
      if (resamples != 0 && resamples < 2) throw ConfigError("--resamples must be 0 or >= 2");
      RandomSource rng(g.seed.value_or(1));
      const auto r = tomography::reconstruct(counts, target, method, resamples, rng);
      experiment::ResultRow row;
      row.pair_id = "counts";
      row.input1 = experiment::qubit_label(target);
      row.input2 = tomography::method_name(method);
      row.fidelity = r.fidelity_to_target;
      row.fidelity_std = r.fidelity_std;
      row.distance = r.distance_to_target;
      row.distance_std = r.distance_std;
      row.mode = "tomography";
      experiment::ResultTable table{{row}, {}};
      table.metadata.seeds = {rng.seed()};
      return finish(table, g);
    }
    if (run->parsed()) {
      if (g.config.empty()) throw ConfigError("run requires --config");
      spec = load_config(g);
      apply_overrides(spec, g);
      return finish(experiment::run_experiment(spec), g);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
