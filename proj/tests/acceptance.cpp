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

// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qadder/qadder.hpp"

using namespace qadder;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

Qubit random_qubit(oracle::Rng& rng) { return Qubit::from_vector(oracle::random_state(rng)); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

constexpr double kQuarterPi = std::numbers::pi / 4;

// 1. All benchmark pairs at 45 degrees: circuit output equals
//    (c psi + a phi)/N with N^2 = |a|^2 + |c|^2 + 2 Re(a* c <phi|psi>), and the
//    success probability equals N_Psi^2 / 2 = N^2 / 8.
Check closed_form() {
  Check c;
  for (const auto& pair : experiment::builtin_table1().pairs) {
    const Complex a = pair.input1.h(), cc = pair.input2.h();
    const double n2 = std::norm(a) + std::norm(cc) +
                      2 * (std::conj(a) * cc * pair.input2.vec().dot(pair.input1.vec())).real();
    const Eigen::Vector2cd expected = (cc * pair.input1.vec() + a * pair.input2.vec()) / std::sqrt(n2);
    const optics::CircuitOutcome out = optics::run_circuit({pair.input1, pair.input2, kQuarterPi});
    const double f = std::norm(out.output.vec().dot(expected));
    c.require(f >= 1 - 1e-10, "fidelity " + fmt("%.3e", 1 - f) + " below 1-1e-10");
    c.require(std::abs(out.success_prob - n2 / 8) <= 1e-12,
              "success probability off by " + fmt("%.3e", out.success_prob - n2 / 8));
  }
  return c;
}

// 2. Optical circuit versus abstract protocol on random (psi, phi, theta).
Check oracle_equivalence() {
  Check c;
  oracle::Rng rng(20);
  for (int i = 0; i < 1000; ++i) {
    const Qubit p = random_qubit(rng), q = random_qubit(rng);
    const double theta = rng.uniform() * std::numbers::pi / 2;
    const auto out = optics::run_circuit({p, q, theta});
    const auto ref = protocol::superpose_theta(p, q, theta);
    c.require(infidelity(out.output, ref.state) <= 1e-10, "state mismatch");
    c.require(std::abs(out.success_prob - ref.success_prob) <= 1e-12, "probability mismatch");
  }
  return c;
}

// 3. Coincidence post-selection: probability 1/2 and the post-selected state
//    equals the independently assembled 16-dimensional vector.
Check pbs1_postselection() {
  Check c;
  oracle::Rng rng(30);
  std::vector<Qubit> inputs;
  for (const auto& pair : experiment::builtin_table1().pairs) {
    inputs.push_back(pair.input1);
    inputs.push_back(pair.input2);
  }
  for (int i = 0; i < 500; ++i) inputs.push_back(random_qubit(rng));
  for (std::size_t i = 0; i + 1 < inputs.size(); ++i) {
    const Qubit& p = inputs[i];
    const Qubit& q = inputs[i + 1];
    const auto post = optics::pbs1_postselect(optics::prepare_input({p, q}));
    c.require(std::abs(post.stages.coincidence - 0.5) <= 1e-12, "coincidence probability not 1/2");
    const oracle::Vec expected = oracle::post_pbs1_state(p.h(), p.v(), q.h(), q.v());
    c.require((post.state.amplitudes() - expected).cwiseAbs().maxCoeff() <= 1e-12,
              "post-selected state differs from oracle");
  }
  return c;
}

// 4. Tomographic reproduction band and monotonicity in the visibility.
Check table_band() {
  Check c;
  experiment::ExperimentSpec spec = experiment::builtin_table1();
  spec.trials_per_pair = 100;
  const auto table = experiment::run_experiment(spec);
  double sum = 0.0, lo = 1.0;
  for (const auto& row : table.rows) {
    c.require(row.ok(), "pair " + row.pair_id + " failed");
    c.require(row.fidelity >= 0.97 && row.fidelity <= 1.0,
              "pair " + row.pair_id + " mean fidelity " + fmt("%.4f", row.fidelity));
    sum += row.fidelity;
    lo = std::min(lo, row.fidelity);
  }
  const double grand = sum / static_cast<double>(table.rows.size());
  c.require(grand >= 0.98, "grand average " + fmt("%.4f", grand));

  // Mean tomographic fidelity must not decrease as the visibility rises.
  experiment::ExperimentSpec sweep_spec = experiment::builtin_table1();
  sweep_spec.trials_per_pair = 20;
  double prev = -1.0;
  for (double v : {0.80, 0.90, 0.95, 0.984, 1.0}) {
    sweep_spec.noise.control_visibility = v;
    double s = 0.0;
    const auto t = experiment::run_experiment(sweep_spec);
    for (const auto& row : t.rows) s += row.fidelity;
    s /= static_cast<double>(t.rows.size());
    c.require(s >= prev, "tomographic fidelity decreased at V=" + fmt("%.3f", v));
    prev = s;
  }
  // And pair by pair for the exact noisy output.
  for (const auto& pair : sweep_spec.pairs) {
    const auto target = protocol::superpose_theta(pair.input1, pair.input2, kQuarterPi).state.density();
    double last = -1.0;
    for (int k = 0; k <= 20; ++k) {
      const double f = fidelity(noise::noisy_run_at({pair.input1, pair.input2}, k / 20.0).rho, target);
      c.require(f >= last - 1e-12, "noisy fidelity not monotone");
      last = f;
    }
  }
  if (c.ok) c.detail = "grand " + fmt("%.4f", grand) + ", min pair " + fmt("%.4f", lo);
  return c;
}

// 5. Tomography: exact inversion, MLE accuracy, and shot-noise scaling.
Check tomography_oracle() {
  Check c;
  oracle::Rng rng(50);
  for (int i = 0; i < 1000; ++i) {
    const oracle::Mat rho = oracle::random_density(rng, 2, 1 + i % 2);
    const double re = rho(0, 1).real(), im = rho(0, 1).imag(), ph = rho(0, 0).real();
    const std::array<double, 6> f{ph, 1 - ph, 0.5 + re, 0.5 - re, 0.5 - im, 0.5 + im};
    c.require((tomography::linear_inversion(f) - rho).cwiseAbs().maxCoeff() <= 1e-12,
              "linear inversion not exact");
  }

  int good = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DensityOperator rho({2}, oracle::random_density(rng, 2, 1 + seed % 2));
    RandomSource r(seed);
    const auto counts = tomography::simulate_measurements(rho, 1000000, r);
    if (trace_distance(tomography::mle_reconstruct(counts), rho) < 0.01) ++good;
  }
  c.require(good >= 190, "MLE within 0.01 for only " + std::to_string(good) + "/200 seeds");

  // log-log slope of the mean trace distance against shots per setting.
  Eigen::Vector3d bloch(0.3, -0.4, 0.5);
  Eigen::Matrix2cd m;
  m << 0.5 * (1 + bloch.z()), 0.5 * Complex(bloch.x(), -bloch.y()), 0.5 * Complex(bloch.x(), bloch.y()),
      0.5 * (1 - bloch.z());
  const DensityOperator rho({2}, m);
  std::vector<double> xs, ys;
  for (std::uint64_t shots : {100u, 1000u, 10000u, 100000u}) {
    double mean = 0.0;
    const int reps = 100;
    for (int s = 0; s < reps; ++s) {
      RandomSource r(1000 + static_cast<std::uint64_t>(s));
      mean += trace_distance(tomography::mle_reconstruct(tomography::simulate_measurements(rho, shots, r)), rho);
    }
    xs.push_back(std::log(static_cast<double>(shots)));
    ys.push_back(std::log(mean / reps));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / static_cast<double>(xs.size());
    my += ys[i] / static_cast<double>(xs.size());
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  c.require(slope >= -0.65 && slope <= -0.35, "log-log slope " + fmt("%.3f", slope));
  if (c.ok) c.detail = std::to_string(good) + "/200 within 0.01, slope " + fmt("%.3f", slope);
  return c;
}

// 6. Metric properties.
Check metric_properties() {
  Check c;
  oracle::Rng rng(60);
  for (int i = 0; i < 1000; ++i) {
    const auto d = static_cast<Eigen::Index>(2 + i % 3);
    const Dims dims{static_cast<std::size_t>(d)};
    const DensityOperator r(dims, oracle::random_density(rng, d, 1 + i % static_cast<int>(d)));
    const DensityOperator s(dims, oracle::random_density(rng, d, d));
    const double f = fidelity(r, s), t = trace_distance(r, s);
    c.require(1 - std::sqrt(f) <= t + 1e-12 && t <= std::sqrt(1 - f) + 1e-12, "Fuchs-van de Graaf violated");
    c.require(std::abs(fidelity(r, r) - 1) <= 1e-12, "F(rho, rho) != 1");
    c.require(std::abs(trace_distance(r, r)) <= 1e-12, "D(rho, rho) != 0");

    const Qubit a = random_qubit(rng), b = random_qubit(rng);
    const double fp = fidelity(a.density(), b.density());
    c.require(std::abs(trace_distance(a.density(), b.density()) - std::sqrt(1 - fp)) <= 1e-10,
              "pure-state D != sqrt(1-F)");
  }
  return c;
}

// 7. (|+>, |->) at 45 degrees gives exactly |H> with probability 1/8.
Check orthogonal_pair() {
  Check c;
  const auto out = optics::run_circuit({Qubit::D(), Qubit::A(), kQuarterPi});
  c.require(infidelity(out.output, Qubit::H()) <= 1e-12, "output is not |H>");
  c.require(std::abs(out.output.v()) <= 1e-12, "V amplitude nonzero");
  c.require(std::abs(out.success_prob - 0.125) <= 1e-12, "probability " + fmt("%.15f", out.success_prob));
  return c;
}

// 8. Inputs orthogonal to the referential state never yield a state.
Check no_go() {
  Check c;
  auto expect_zero = [&](const std::function<void()>& f, const char* what) {
    try {
      f();
      c.require(false, std::string(what) + " returned a state");
    } catch (const ZeroSuccessError&) {
    }
  };
  for (double alpha : {0.0, 0.7, 2.1}) {
    for (double beta : {0.0, 1.3, 3.0}) {
      const Qubit p = Qubit::from_amplitudes(0.0, std::polar(1.0, alpha));
      const Qubit q = Qubit::from_amplitudes(0.0, std::polar(1.0, beta));
      for (double theta : {0.0, 0.3, kQuarterPi, 1.2, std::numbers::pi / 2}) {
        expect_zero([&] { optics::run_circuit({p, q, theta}); }, "run_circuit");
        expect_zero([&] { protocol::superpose_theta(p, q, theta); }, "superpose_theta");
        expect_zero([&] { noise::noisy_run_at({p, q, theta}, 0.9); }, "noisy_run");
      }
      expect_zero([&] { protocol::superpose(p, q); }, "superpose");
      experiment::ExperimentSpec spec;
      spec.pairs = {{p, q, "", ""}};
      for (auto mode : {experiment::Mode::kIdeal, experiment::Mode::kNoisy, experiment::Mode::kTomographic}) {
        spec.mode = mode;
        const auto t = experiment::run_experiment(spec);
        c.require(!t.rows[0].ok() && *t.rows[0].error == "zero overlap with referential state",
                  "experiment did not report an error row");
      }
    }
  }
  return c;
}

// 9. Three-state extension.
Check three_states() {
  Check c;
  oracle::Rng rng(90);
  for (int i = 0; i < 100; ++i) {
    const std::array<Qubit, 3> q{random_qubit(rng), random_qubit(rng), random_qubit(rng)};
    const StateVector s = protocol::entangle_n(q);
    const double w = 1.0 / std::sqrt(3.0);
    auto term = [&](const Qubit& x, const Qubit& y, const Qubit& z, int p) {
      const Complex ax = x.vec()[(p >> 2) & 1], ay = y.vec()[(p >> 1) & 1], az = z.vec()[p & 1];
      return w * ax * ay * az;
    };
    double err = 0.0;
    for (int p = 0; p < 8; ++p) {
      err = std::max(err, std::abs(s[static_cast<std::size_t>(4 * p + 0)] - term(q[0], q[1], q[2], p)));
      err = std::max(err, std::abs(s[static_cast<std::size_t>(4 * p + 2)] - term(q[1], q[0], q[2], p)));
      err = std::max(err, std::abs(s[static_cast<std::size_t>(4 * p + 1)] - term(q[2], q[1], q[0], p)));
      err = std::max(err, std::abs(s[static_cast<std::size_t>(4 * p + 3)]));
    }
    c.require(err <= 1e-12, "entangled state differs by " + fmt("%.3e", err));

    const std::array<protocol::ReferentialState, 2> refs{};
    const auto out = protocol::superpose_n(q, refs);
    const auto bf = oracle::brute_force_n({q[0].vec(), q[1].vec(), q[2].vec()});
    c.require(oracle::phase_insensitive_infidelity(out.state.vec(), bf.output) <= 1e-10,
              "output differs from brute force");
    c.require(std::abs(out.success_prob - bf.probability) <= 1e-10, "probability differs from brute force");
  }
  return c;
}

// 10. Identical spec and seeds give byte-identical CSV and JSON.
Check determinism() {
  Check c;
  experiment::ExperimentSpec spec = experiment::builtin_table1();
  spec.seeds = {7, 11};
  spec.trials_per_pair = 2;
  for (auto format : {experiment::Format::kCsv, experiment::Format::kJson}) {
    const std::string a = experiment::emit_to_string(experiment::run_experiment(spec), format);
    const std::string b = experiment::emit_to_string(experiment::run_experiment(spec), format);
    c.require(a == b, "outputs differ");
  }
  spec = experiment::builtin_table1();
  const std::string a = experiment::emit_to_string(experiment::run_experiment(spec), experiment::Format::kCsv);
  const std::string b = experiment::emit_to_string(experiment::run_experiment(spec), experiment::Format::kCsv);
  c.require(a == b, "single-seed outputs differ");
  return c;
}

struct Criterion {
  const char* id;
  const char* name;
  double budget_seconds;
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "closed-form equivalence on the benchmark pairs", 1.0, closed_form},
      {"AC2", "optical circuit agrees with protocol on 1000 random inputs", 10.0, oracle_equivalence},
      {"AC3", "coincidence post-selection probability and state", 10.0, pbs1_postselection},
      {"AC4", "tomographic fidelity band and visibility monotonicity", 120.0, table_band},
      {"AC5", "tomography exactness, accuracy and shot scaling", 120.0, tomography_oracle},
      {"AC6", "fidelity and trace distance properties", 10.0, metric_properties},
      {"AC7", "orthogonal pair gives |H> with probability 1/8", 1.0, orthogonal_pair},
      {"AC8", "no-go inputs yield zero-success errors", 10.0, no_go},
      {"AC9", "three-state extension against brute force", 10.0, three_states},
      {"AC10", "byte-identical output under fixed seeds", 60.0, determinism},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget_seconds && result.ok) {
      result.ok = false;
      result.detail = "runtime " + fmt("%.2f", secs) + " s exceeds " + fmt("%.0f", cr.budget_seconds) + " s";
    }
    if (!result.ok) ++failures;
    std::printf("[%s] %-4s %s (%.2f s)%s%s\n", result.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                result.detail.empty() ? "" : ": ", result.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
