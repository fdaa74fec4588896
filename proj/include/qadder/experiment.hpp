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

// Experiment harness: JSON configuration, the eleven-pair benchmark table,
// parameter sweeps, and CSV/JSON result emission.
//
// Seeds. Every tomographic run draws from
//     base_seed XOR splitmix64(fnv1a64(input amplitudes, trial index))
// where the FNV-1a input is the little-endian IEEE-754 bytes of
// Re/Im of input1.h, input1.v, input2.h, input2.v, followed by the trial
// index as a little-endian u64. Results therefore do not depend on the
// position of a pair in the list.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qadder/core.hpp"
#include "qadder/noise.hpp"
#include "qadder/optics.hpp"
#include "qadder/protocol.hpp"
#include "qadder/qubit.hpp"
#include "qadder/random.hpp"
#include "qadder/tomography.hpp"

namespace qadder::experiment {

inline constexpr std::string_view kVersion = "0.1.0";

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class Mode { kIdeal, kNoisy, kTomographic };

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kIdeal: return "ideal";
    case Mode::kNoisy: return "noisy";
    case Mode::kTomographic: return "tomographic";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "ideal") return Mode::kIdeal;
  if (s == "noisy") return Mode::kNoisy;
  if (s == "tomographic") return Mode::kTomographic;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected ideal, noisy or tomographic)");
}

struct PairSpec {
  Qubit input1;
  Qubit input2;
  std::string label1;
  std::string label2;

  bool operator==(const PairSpec&) const = default;
};

struct ExperimentSpec {
  std::vector<PairSpec> pairs;
  double theta_degrees = 45.0;
  noise::NoiseModel noise{};
  std::uint64_t shots = 5000;
  std::vector<std::uint64_t> seeds{1};
  int trials_per_pair = 1;
  int bootstrap_resamples = 100;
  Mode mode = Mode::kTomographic;

  bool operator==(const ExperimentSpec&) const = default;

  void validate() const {
    if (!(theta_degrees >= 0.0 && theta_degrees <= 90.0)) {
      throw ConfigError("theta_degrees must lie in [0, 90]");
    }
    if (shots < 1) throw ConfigError("shots must be >= 1");
    if (seeds.empty()) throw ConfigError("seeds must not be empty");
    if (trials_per_pair < 1) throw ConfigError("trials_per_pair must be >= 1");
    if (bootstrap_resamples != 0 && bootstrap_resamples < 2) {
      throw ConfigError("bootstrap_resamples must be 0 or >= 2");
    }
    try {
      noise.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
};

// ---------------------------------------------------------------------------
// Labels

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string format_complex(Complex z) {
  if (std::abs(z.imag()) < 1e-12) return format_number(z.real());
  if (std::abs(z.real()) < 1e-12) return format_number(z.imag()) + "i";
  return "(" + format_number(z.real()) + (z.imag() < 0 ? "-" : "+") +
         format_number(std::abs(z.imag())) + "i)";
}

/// Short comma-free label for a qubit.
inline std::string qubit_label(const Qubit& q) {
  const Qubit c = q.canonical();
  const std::pair<const char*, Qubit> named[] = {
      {"|H>", Qubit::H()}, {"|V>", Qubit::V()}, {"|+>", Qubit::D()},
      {"|->", Qubit::A()}, {"|R>", Qubit::R()}, {"|L>", Qubit::L()}};
  for (const auto& [name, ref] : named) {
    if (infidelity(c, ref) < 1e-12) return name;
  }
  return format_complex(c.h()) + "|H>+" + format_complex(c.v()) + "|V>";
}

/// (|H> + e^{i phi}|V>)/sqrt(2)
inline Qubit equator_state(double phi) {
  return Qubit::from_amplitudes(std::numbers::sqrt2 / 2, std::polar(std::numbers::sqrt2 / 2, phi));
}

inline std::string equator_label(double phi) {
  return "(|H>+e^{i" + format_number(phi / std::numbers::pi) + "pi}|V>)/sqrt2";
}

// ---------------------------------------------------------------------------
// Configuration

struct ParseOptions {
  bool strict = true;
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                       const std::string& where, const ParseOptions& options,
                       std::vector<std::string>* warnings) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (known) continue;
    const std::string msg = "unknown field '" + it.key() + "' in " + where;
    if (options.strict) throw ConfigError(msg);
    if (warnings) warnings->push_back(msg);
  }
}

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

inline std::uint64_t unsigned_integer(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) throw ConfigError(what + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline Complex complex_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(what + " must be [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

// Renormalizes within 1e-3 of unit norm (with a warning), rejects otherwise.
inline Qubit parse_qubit(const json& j, const std::string& what, const ParseOptions& options,
                         std::vector<std::string>* warnings) {
  if (j.is_object()) {
    check_keys(j, {"theta", "phi"}, what, options, warnings);
    if (!j.contains("theta")) throw ConfigError(what + ": Bloch form needs 'theta'");
    const double theta = number(j.at("theta"), what + ".theta");
    const double phi = j.contains("phi") ? number(j.at("phi"), what + ".phi") : 0.0;
    return Qubit::from_bloch(optics::degrees(theta), optics::degrees(phi));
  }
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(what + " must be [[re,im],[re,im]] or {\"theta\":..,\"phi\":..}");
  }
  const Complex h = complex_pair(j[0], what);
  const Complex v = complex_pair(j[1], what);
  const double norm = std::sqrt(std::norm(h) + std::norm(v));
  if (!std::isfinite(norm) || std::abs(norm - 1.0) >= 1e-3) {
    throw ConfigError(what + ": state norm " + format_number(norm) + " is not within 1e-3 of 1");
  }
  if (std::abs(norm - 1.0) <= Qubit::kNormTolerance) return Qubit::from_amplitudes(h, v);
  if (warnings) warnings->push_back(what + ": renormalized state with norm " + format_number(norm));
  return Qubit::normalized(h, v);
}

inline json qubit_json(const Qubit& q) {
  return json::array({json::array({q.h().real(), q.h().imag()}),
                      json::array({q.v().real(), q.v().imag()})});
}

inline PairSpec parse_pair(const json& j, std::size_t index, const ParseOptions& options,
                           std::vector<std::string>* warnings) {
  const std::string where = "pairs[" + std::to_string(index) + "]";
  const json* states = &j;
  const json* labels = nullptr;
  if (j.is_object()) {
    check_keys(j, {"states", "labels"}, where, options, warnings);
    if (!j.contains("states")) throw ConfigError(where + ": missing 'states'");
    states = &j.at("states");
    if (j.contains("labels")) labels = &j.at("labels");
  }
  if (!states->is_array() || states->size() != 2) {
    throw ConfigError(where + ": expected two states");
  }
  PairSpec p{parse_qubit((*states)[0], where + ".input1", options, warnings),
             parse_qubit((*states)[1], where + ".input2", options, warnings), "", ""};
  if (labels) {
    if (!labels->is_array() || labels->size() != 2 || !(*labels)[0].is_string() ||
        !(*labels)[1].is_string()) {
      throw ConfigError(where + ": labels must be two strings");
    }
    p.label1 = (*labels)[0].get<std::string>();
    p.label2 = (*labels)[1].get<std::string>();
  } else {
    p.label1 = qubit_label(p.input1);
    p.label2 = qubit_label(p.input2);
  }
  return p;
}

inline std::string calibration_name(noise::Calibration c) {
  return c == noise::Calibration::kControlOnly ? "control" : "product";
}

}  // namespace detail

/// Parses a JSON experiment document:
///
///   {
///     "pairs": [ {"states": [Q, Q], "labels": ["..", ".."]}, [Q, Q], ... ],
///     "theta_degrees": 45,
///     "noise": {"control_visibility": 0.984, "hom_visibility": 0.996,
///               "mzi_visibility": 0.98, "total_counts": 5000,
///               "calibration": "control" | "product"},
///     "shots": 5000,
///     "seeds": [1],
///     "trials_per_pair": 1,
///     "bootstrap_resamples": 100,
///     "mode": "ideal" | "noisy" | "tomographic"
///   }
///
/// Q is [[re, im], [re, im]] (H then V amplitude) or Bloch angles in degrees
/// {"theta": t, "phi": p} for cos(t/2)|H> + e^{ip} sin(t/2)|V>. Every field
/// is optional. `shots` and `noise.total_counts` are the same quantity and
/// must agree when both are given.
inline ExperimentSpec parse_spec(std::string_view text, const ParseOptions& options = {},
                                 std::vector<std::string>* warnings = nullptr) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::check_keys(doc,
                     {"pairs", "theta_degrees", "noise", "shots", "seeds", "trials_per_pair",
                      "bootstrap_resamples", "mode"},
                     "config", options, warnings);

  ExperimentSpec spec;
  if (doc.contains("pairs")) {
    const json& pairs = doc.at("pairs");
    if (!pairs.is_array()) throw ConfigError("pairs must be an array");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      spec.pairs.push_back(detail::parse_pair(pairs[i], i, options, warnings));
    }
  }
  if (doc.contains("theta_degrees")) {
    spec.theta_degrees = detail::number(doc.at("theta_degrees"), "theta_degrees");
  }

  std::optional<std::uint64_t> total_counts;
  if (doc.contains("noise")) {
    const json& n = doc.at("noise");
    if (!n.is_object()) throw ConfigError("noise must be an object");
    detail::check_keys(n,
                       {"control_visibility", "hom_visibility", "mzi_visibility", "total_counts",
                        "calibration"},
                       "noise", options, warnings);
    if (n.contains("control_visibility"))
      spec.noise.control_visibility = detail::number(n.at("control_visibility"), "noise.control_visibility");
    if (n.contains("hom_visibility"))
      spec.noise.hom_visibility = detail::number(n.at("hom_visibility"), "noise.hom_visibility");
    if (n.contains("mzi_visibility"))
      spec.noise.mzi_visibility = detail::number(n.at("mzi_visibility"), "noise.mzi_visibility");
    if (n.contains("total_counts"))
      total_counts = detail::unsigned_integer(n.at("total_counts"), "noise.total_counts");
    if (n.contains("calibration")) {
      const json& c = n.at("calibration");
      if (c == "control") {
        spec.noise.calibration = noise::Calibration::kControlOnly;
      } else if (c == "product") {
        spec.noise.calibration = noise::Calibration::kProduct;
      } else {
        throw ConfigError("noise.calibration must be \"control\" or \"product\"");
      }
    }
  }
  if (doc.contains("shots")) {
    spec.shots = detail::unsigned_integer(doc.at("shots"), "shots");
    if (total_counts && *total_counts != spec.shots) {
      throw ConfigError("shots and noise.total_counts disagree");
    }
  } else if (total_counts) {
    spec.shots = *total_counts;
  }
  spec.noise.total_counts = spec.shots;

  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    if (!s.is_array()) throw ConfigError("seeds must be an array of integers");
    spec.seeds.clear();
    for (const auto& v : s) spec.seeds.push_back(detail::unsigned_integer(v, "seeds[]"));
  }
  if (doc.contains("trials_per_pair")) {
    spec.trials_per_pair = static_cast<int>(detail::unsigned_integer(doc.at("trials_per_pair"), "trials_per_pair"));
  }
  if (doc.contains("bootstrap_resamples")) {
    spec.bootstrap_resamples =
        static_cast<int>(detail::unsigned_integer(doc.at("bootstrap_resamples"), "bootstrap_resamples"));
  }
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw ConfigError("mode must be a string");
    spec.mode = parse_mode(doc.at("mode").get<std::string>());
  }
  spec.validate();
  return spec;
}

/// Canonical JSON form of a spec; parse_spec(spec_to_json(s).dump()) == s.
inline nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  using detail::json;
  json pairs = json::array();
  for (const auto& p : spec.pairs) {
    pairs.push_back({{"states", json::array({detail::qubit_json(p.input1), detail::qubit_json(p.input2)})},
                     {"labels", json::array({p.label1, p.label2})}});
  }
  return json{{"pairs", pairs},
              {"theta_degrees", spec.theta_degrees},
              {"noise",
               {{"control_visibility", spec.noise.control_visibility},
                {"hom_visibility", spec.noise.hom_visibility},
                {"mzi_visibility", spec.noise.mzi_visibility},
                {"total_counts", spec.noise.total_counts},
                {"calibration", detail::calibration_name(spec.noise.calibration)}}},
              {"shots", spec.shots},
              {"seeds", spec.seeds},
              {"trials_per_pair", spec.trials_per_pair},
              {"bootstrap_resamples", spec.bootstrap_resamples},
              {"mode", mode_name(spec.mode)}};
}

inline std::uint64_t spec_hash(const ExperimentSpec& spec) {
  Fnv1a64 h;
  h.text(spec_to_json(spec).dump());
  return h.value();
}

/// The eleven benchmark input pairs at theta = 45 deg with default noise.
inline ExperimentSpec builtin_table1() {
  const double r2 = std::numbers::sqrt2, r3 = std::numbers::sqrt3;
  const Qubit h = Qubit::H();
  const Qubit d = Qubit::D();
  const Qubit h2v = Qubit::from_amplitudes(r2 / r3, 1.0 / r3);  // (sqrt2|H>+|V>)/sqrt3
  const Qubit hv2 = Qubit::from_amplitudes(1.0 / r3, r2 / r3);  // (|H>+sqrt2|V>)/sqrt3
  const std::string ld = "(|H>+|V>)/sqrt2";
  const std::string lh2v = "(sqrt2|H>+|V>)/sqrt3";
  const std::string lhv2 = "(|H>+sqrt2|V>)/sqrt3";

  ExperimentSpec spec;
  spec.pairs = {
      {h, d, "|H>", ld},
      {h, h2v, "|H>", lh2v},
      {h, hv2, "|H>", lhv2},
      {d, h2v, ld, lh2v},
      {h2v, hv2, lh2v, lhv2},
      {d, Qubit::A(), ld, "(|H>-|V>)/sqrt2"},
  };
  for (double phase : {0.775, 0.633, 0.45, 0.33, 0.147}) {
    const double phi = phase * std::numbers::pi;
    spec.pairs.push_back({d, equator_state(phi), ld, equator_label(phi)});
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Running

struct ResultRow {
  std::string pair_id;
  std::string input1;
  std::string input2;
  double fidelity = std::nan("");
  double fidelity_std = std::nan("");
  double distance = std::nan("");
  double distance_std = std::nan("");
  double success_prob = std::nan("");
  std::string mode;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct ResultMetadata {
  std::string spec_hash;
  std::vector<std::uint64_t> seeds;
  std::string version{kVersion};
};

struct ResultTable {
  std::vector<ResultRow> rows;
  ResultMetadata metadata;

  bool all_failed() const {
    if (rows.empty()) return false;
    for (const auto& r : rows) {
      if (r.ok()) return false;
    }
    return true;
  }
};

inline std::uint64_t pair_seed(std::uint64_t base_seed, const PairSpec& pair, std::uint64_t trial) {
  Fnv1a64 h;
  for (const Qubit& q : {pair.input1, pair.input2}) {
    h.f64(q.h().real());
    h.f64(q.h().imag());
    h.f64(q.v().real());
    h.f64(q.v().imag());
  }
  h.u64(trial);
  return base_seed ^ splitmix64(h.value());
}

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size() - 1))};
}

inline DensityOperator reconstruct_best(const tomography::CountsRecord& counts) {
  try {
    return tomography::mle_reconstruct(counts);
  } catch (const tomography::MleNotConverged& e) {
    return e.best().rho;
  }
}

}  // namespace detail

/// Runs one pair under `spec` (theta, noise, mode, shots, seeds).
inline ResultRow run_pair(const ExperimentSpec& spec, const PairSpec& pair, std::string pair_id) {
  ResultRow row;
  row.pair_id = std::move(pair_id);
  row.input1 = pair.label1.empty() ? qubit_label(pair.input1) : pair.label1;
  row.input2 = pair.label2.empty() ? qubit_label(pair.input2) : pair.label2;
  row.mode = mode_name(spec.mode);

  const optics::CircuitConfig config{pair.input1, pair.input2, optics::degrees(spec.theta_degrees)};
  try {
    const Qubit target = protocol::superpose_theta(pair.input1, pair.input2, config.theta).state;
    const DensityOperator sigma = target.density();
    switch (spec.mode) {
      case Mode::kIdeal: {
        const optics::CircuitOutcome out = optics::run_circuit(config);
        const DensityOperator rho = out.output.density();
        row.fidelity = fidelity(rho, sigma);
        row.distance = trace_distance(rho, sigma);
        row.fidelity_std = row.distance_std = 0.0;
        row.success_prob = out.success_prob;
        break;
      }
      case Mode::kNoisy: {
        const noise::NoisyOutcome out = noise::noisy_run(config, spec.noise);
        row.fidelity = fidelity(out.rho, sigma);
        row.distance = trace_distance(out.rho, sigma);
        row.fidelity_std = row.distance_std = 0.0;
        row.success_prob = out.success_prob;
        break;
      }
      case Mode::kTomographic: {
        const noise::NoisyOutcome out = noise::noisy_run(config, spec.noise);
        const std::uint64_t per_setting = std::max<std::uint64_t>(1, spec.shots / 3);
        std::vector<double> fs, ds;
        std::optional<tomography::BootstrapEstimate> boot;
        const bool single = spec.seeds.size() == 1 && spec.trials_per_pair == 1;
        for (std::uint64_t base : spec.seeds) {
          for (int t = 0; t < spec.trials_per_pair; ++t) {
            RandomSource rng(pair_seed(base, pair, static_cast<std::uint64_t>(t)));
            const auto counts = tomography::simulate_measurements(out.rho, per_setting, rng);
            const auto m = tomography::metrics_to_target(detail::reconstruct_best(counts).matrix(), target);
            fs.push_back(m.fidelity);
            ds.push_back(m.distance);
            if (single && spec.bootstrap_resamples >= 2) {
              boot = tomography::bootstrap_errors(counts, target, spec.bootstrap_resamples, rng);
            }
          }
        }
        const auto [fm, fsd] = detail::mean_std(fs);
        const auto [dm, dsd] = detail::mean_std(ds);
        row.fidelity = fm;
        row.distance = dm;
        row.fidelity_std = boot ? boot->fidelity_std : fsd;
        row.distance_std = boot ? boot->distance_std : dsd;
        row.success_prob = out.success_prob;
        break;
      }
    }
  } catch (const ZeroSuccessError&) {
    row.error = "zero overlap with referential state";
  } catch (const Error& e) {
    row.error = e.what();
  }
  if (row.error) {
    row.mode = "error: " + *row.error;
    row.fidelity = row.fidelity_std = row.distance = row.distance_std = row.success_prob = std::nan("");
  }
  return row;
}

inline ResultMetadata metadata_for(const ExperimentSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(spec_hash(spec)));
  return {buf, spec.seeds, std::string(kVersion)};
}

inline ResultTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ResultTable table{{}, metadata_for(spec)};
  for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
    table.rows.push_back(run_pair(spec, spec.pairs[i], std::to_string(i + 1)));
  }
  return table;
}

enum class SweepParameter { kTheta, kPhase, kVisibility };

inline SweepParameter parse_sweep_parameter(std::string_view s) {
  if (s == "theta") return SweepParameter::kTheta;
  if (s == "phase") return SweepParameter::kPhase;
  if (s == "visibility") return SweepParameter::kVisibility;
  throw ConfigError("unknown sweep parameter '" + std::string(s) + "' (expected theta, phase or visibility)");
}

/// theta: grid in degrees [0, 90], every pair at every grid point.
/// phase: grid in radians [0, 2pi]; one row per point for the pair
///        (|+>, (|H> + e^{i phi}|V>)/sqrt2).
/// visibility: grid in [0, 1] applied as the control visibility; ideal mode
///        is promoted to noisy.
inline ResultTable sweep(const ExperimentSpec& spec, SweepParameter parameter,
                         std::span<const double> grid) {
  spec.validate();
  if (grid.empty()) throw DomainError("sweep: empty grid");
  ResultTable table{{}, metadata_for(spec)};
  for (double g : grid) {
    ExperimentSpec s = spec;
    switch (parameter) {
      case SweepParameter::kTheta: {
        if (!(g >= 0.0 && g <= 90.0)) throw DomainError("sweep: theta " + format_number(g) + " outside [0, 90]");
        s.theta_degrees = g;
        for (std::size_t i = 0; i < s.pairs.size(); ++i) {
          table.rows.push_back(run_pair(s, s.pairs[i], "theta=" + format_number(g) + ":" + std::to_string(i + 1)));
        }
        break;
      }
      case SweepParameter::kPhase: {
        if (!(g >= 0.0 && g <= 2 * std::numbers::pi + 1e-12)) {
          throw DomainError("sweep: phase " + format_number(g) + " outside [0, 2pi]");
        }
        const PairSpec pair{Qubit::D(), equator_state(g), "(|H>+|V>)/sqrt2", equator_label(g)};
        table.rows.push_back(run_pair(s, pair, "phase=" + format_number(g / std::numbers::pi) + "pi"));
        break;
      }
      case SweepParameter::kVisibility: {
        if (!(g >= 0.0 && g <= 1.0)) throw DomainError("sweep: visibility " + format_number(g) + " outside [0, 1]");
        s.noise.control_visibility = g;
        s.noise.calibration = noise::Calibration::kControlOnly;
        if (s.mode == Mode::kIdeal) s.mode = Mode::kNoisy;
        for (std::size_t i = 0; i < s.pairs.size(); ++i) {
          table.rows.push_back(run_pair(s, s.pairs[i], "visibility=" + format_number(g) + ":" + std::to_string(i + 1)));
        }
        break;
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Emission

enum class Format { kCsv, kJson };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  throw ConfigError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

inline constexpr std::string_view kCsvHeader =
    "pair_id,input1,input2,fidelity,fidelity_std,distance,distance_std,success_prob,mode";

namespace detail {

inline std::string fixed6(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline double round6(double x) { return std::round(x * 1e6) / 1e6; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return round6(x);
}

}  // namespace detail

inline nlohmann::json table_to_json(const ResultTable& table) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row{{"pair_id", r.pair_id},
             {"input1", r.input1},
             {"input2", r.input2},
             {"fidelity", detail::number_or_null(r.fidelity)},
             {"fidelity_std", detail::number_or_null(r.fidelity_std)},
             {"distance", detail::number_or_null(r.distance)},
             {"distance_std", detail::number_or_null(r.distance_std)},
             {"success_prob", detail::number_or_null(r.success_prob)},
             {"mode", r.mode}};
    if (r.error) row["error"] = *r.error;
    rows.push_back(std::move(row));
  }
  return json{{"metadata",
               {{"spec_hash", table.metadata.spec_hash},
                {"seeds", table.metadata.seeds},
                {"version", table.metadata.version},
                {"rng", std::string(RandomSource::kAlgorithm)}}},
              {"rows", rows}};
}

/// CSV (UTF-8, LF) with the fixed column set, or JSON. Numbers carry six
/// decimals.
inline void emit(const ResultTable& table, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    out << table_to_json(table).dump(2) << '\n';
  } else {
    out << kCsvHeader << '\n';
    for (const auto& r : table.rows) {
      out << detail::csv_field(r.pair_id) << ',' << detail::csv_field(r.input1) << ','
          << detail::csv_field(r.input2) << ',' << detail::fixed6(r.fidelity) << ','
          << detail::fixed6(r.fidelity_std) << ',' << detail::fixed6(r.distance) << ','
          << detail::fixed6(r.distance_std) << ',' << detail::fixed6(r.success_prob) << ','
          << detail::csv_field(r.mode) << '\n';
    }
  }
  if (!out) throw IoError("emit: write failed");
}

inline std::string emit_to_string(const ResultTable& table, Format format) {
  std::ostringstream os;
  emit(table, format, os);
  return os.str();
}

inline void emit_to_file(const ResultTable& table, Format format, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  emit(table, format, f);
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace qadder::experiment
