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

// Single-qubit polarization tomography with the six projectors
// H/V, D/A, R/L: measurement simulation, linear (Stokes) inversion, maximum
// likelihood reconstruction and bootstrap error bars.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "qadder/core.hpp"
#include "qadder/noise.hpp"
#include "qadder/qubit.hpp"
#include "qadder/random.hpp"

namespace qadder::tomography {

enum class Basis { kZ = 0, kX = 1, kY = 2 };

inline constexpr std::array<Basis, 3> kBases{Basis::kZ, Basis::kX, Basis::kY};

struct MeasurementSetting {
  Basis basis;
  std::array<Qubit, 2> outcomes;  // first outcome is the +1 eigenstate

  Eigen::Matrix2cd projector(std::size_t k) const {
    const Eigen::Vector2cd v = outcomes[k].vec();
    return v * v.adjoint();
  }
};

inline MeasurementSetting setting(Basis b) {
  switch (b) {
    case Basis::kZ: return {b, {Qubit::H(), Qubit::V()}};
    case Basis::kX: return {b, {Qubit::D(), Qubit::A()}};
    case Basis::kY: return {b, {Qubit::R(), Qubit::L()}};
  }
  throw DomainError("unknown basis");
}

struct CountsRecord {
  std::uint64_t n_H = 0, n_V = 0;
  std::uint64_t n_D = 0, n_A = 0;
  std::uint64_t n_R = 0, n_L = 0;

  std::array<std::uint64_t, 2> pair(Basis b) const {
    switch (b) {
      case Basis::kZ: return {n_H, n_V};
      case Basis::kX: return {n_D, n_A};
      case Basis::kY: return {n_R, n_L};
    }
    return {0, 0};
  }

  void set(Basis b, std::uint64_t first, std::uint64_t second) {
    switch (b) {
      case Basis::kZ: n_H = first; n_V = second; break;
      case Basis::kX: n_D = first; n_A = second; break;
      case Basis::kY: n_R = first; n_L = second; break;
    }
  }

  std::uint64_t total(Basis b) const {
    const auto p = pair(b);
    return p[0] + p[1];
  }

  std::uint64_t grand_total() const { return n_H + n_V + n_D + n_A + n_R + n_L; }

  bool operator==(const CountsRecord&) const = default;
};

inline void to_json(nlohmann::json& j, const CountsRecord& c) {
  j = nlohmann::json{{"n_H", c.n_H}, {"n_V", c.n_V}, {"n_D", c.n_D},
                     {"n_A", c.n_A}, {"n_R", c.n_R}, {"n_L", c.n_L}};
}

inline void from_json(const nlohmann::json& j, CountsRecord& c) {
  if (!j.is_object()) throw DomainError("counts record must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "n_H" && k != "n_V" && k != "n_D" && k != "n_A" && k != "n_R" && k != "n_L") {
      throw DomainError("counts record: unknown field '" + k + "'");
    }
  }
  auto field = [&](const char* name) -> std::uint64_t {
    if (!j.contains(name)) throw DomainError(std::string("counts record: missing ") + name);
    const auto& v = j.at(name);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw DomainError(std::string("counts record: ") + name + " must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  };
  c.n_H = field("n_H");
  c.n_V = field("n_V");
  c.n_D = field("n_D");
  c.n_A = field("n_A");
  c.n_R = field("n_R");
  c.n_L = field("n_L");
}

inline std::string counts_to_json(const CountsRecord& c) { return nlohmann::json(c).dump(); }

inline CountsRecord counts_from_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text).get<CountsRecord>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("counts record: ") + e.what());
  }
}

inline double outcome_probability(const Eigen::Matrix2cd& rho, const Qubit& outcome) {
  const Eigen::Vector2cd v = outcome.vec();
  return (v.adjoint() * rho * v)(0, 0).real();
}

inline CountsRecord simulate_measurements(const DensityOperator& rho,
                                          std::uint64_t shots_per_setting, RandomSource& rng) {
  if (rho.dims() != Dims{2}) throw DimensionMismatch("simulate_measurements: expected a qubit");
  rho.validate();
  if (shots_per_setting < 1) throw DomainError("simulate_measurements: shots must be >= 1");
  const Eigen::Matrix2cd m = rho.matrix();
  CountsRecord counts;
  for (Basis b : kBases) {
    const MeasurementSetting s = setting(b);
    double p0 = std::clamp(outcome_probability(m, s.outcomes[0]), 0.0, 1.0);
    const std::array<double, 2> probs{p0, 1.0 - p0};
    const auto n = noise::sample_counts(probs, shots_per_setting, rng);
    counts.set(b, n[0], n[1]);
  }
  return counts;
}

namespace detail {

inline void require_totals(const CountsRecord& counts) {
  for (Basis b : kBases) {
    if (counts.total(b) == 0) throw DomainError("tomography: a measurement basis has zero total counts");
  }
}

}  // namespace detail

/// Linear inversion from outcome frequencies ordered H, V, D, A, R, L. Each
/// basis pair is normalized separately, so unnormalized weights are accepted.
inline Eigen::Matrix2cd linear_inversion(const std::array<double, 6>& f) {
  auto imbalance = [&](std::size_t i) {
    const double sum = f[i] + f[i + 1];
    if (!(sum > 0.0)) throw DomainError("tomography: a measurement basis has zero total weight");
    return (f[i] - f[i + 1]) / sum;
  };
  const double rz = imbalance(0);
  const double rx = imbalance(2);
  const double ry = imbalance(4);
  Eigen::Matrix2cd rho;
  rho << 0.5 * (1 + rz), 0.5 * Complex(rx, -ry), 0.5 * Complex(rx, ry), 0.5 * (1 - rz);
  return rho;
}

/// rho = (I + r.sigma)/2 with r estimated from per-basis count imbalances.
/// Unit trace by construction; not necessarily positive.
inline Eigen::Matrix2cd linear_inversion(const CountsRecord& counts) {
  detail::require_totals(counts);
  return linear_inversion(std::array<double, 6>{
      static_cast<double>(counts.n_H), static_cast<double>(counts.n_V),
      static_cast<double>(counts.n_D), static_cast<double>(counts.n_A),
      static_cast<double>(counts.n_R), static_cast<double>(counts.n_L)});
}

inline bool is_physical(const Eigen::Matrix2cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -kPsdSlack;
}

struct MleOptions {
  double tolerance = 1e-10;  // on the per-count log-likelihood
  int max_iterations = 10000;
};

struct MleResult {
  DensityOperator rho;
  int iterations = 0;
  std::vector<double> log_likelihood;  // per-count, one entry per accepted iterate
};

class MleNotConverged : public Error {
 public:
  MleNotConverged(const std::string& what, MleResult best)
      : Error(what), best_(std::move(best)) {}
  const MleResult& best() const { return best_; }

 private:
  MleResult best_;
};

namespace detail {

struct Term {
  double weight;  // n_j / N
  Eigen::Matrix2cd projector;
};

inline std::vector<Term> likelihood_terms(const CountsRecord& counts) {
  const double total = static_cast<double>(counts.grand_total());
  std::vector<Term> terms;
  for (Basis b : kBases) {
    const MeasurementSetting s = setting(b);
    const auto n = counts.pair(b);
    for (std::size_t k = 0; k < 2; ++k) {
      if (n[k] > 0) terms.push_back({static_cast<double>(n[k]) / total, s.projector(k)});
    }
  }
  return terms;
}

inline Eigen::Matrix2cd rho_from_factor(const Eigen::Matrix2cd& t) {
  const Eigen::Matrix2cd m = t.adjoint() * t;
  return m / m.trace().real();
}

inline double log_likelihood(const std::vector<Term>& terms, const Eigen::Matrix2cd& rho) {
  double ll = 0.0;
  for (const auto& term : terms) {
    const double p = (term.projector * rho).trace().real();
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += term.weight * std::log(p);
  }
  return ll;
}

inline Eigen::Matrix2cd ascent_direction(const std::vector<Term>& terms, const Eigen::Matrix2cd& rho) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (const auto& term : terms) {
    r += (term.weight / (term.projector * rho).trace().real()) * term.projector;
  }
  return 0.5 * (r + r.adjoint());
}

}  // namespace detail

/// Maximum-likelihood estimate over rho = T^dagger T / Tr(T^dagger T).
///
/// Each iteration right-multiplies the factor by R (the likelihood gradient
/// operator), i.e. rho -> R rho R. If that step does not increase the
/// likelihood, the diluted step T (I + eps R) is tried with eps halved until
/// it does. The per-count log-likelihood is therefore nondecreasing.
inline MleResult maximum_likelihood(const CountsRecord& counts, const MleOptions& options = {}) {
  detail::require_totals(counts);
  const auto terms = detail::likelihood_terms(counts);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();

  Eigen::Matrix2cd factor = id;
  Eigen::Matrix2cd rho = detail::rho_from_factor(factor);
  double ll = detail::log_likelihood(terms, rho);
  MleResult result{DensityOperator({2}, rho), 0, {ll}};

  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::Matrix2cd r = detail::ascent_direction(terms, rho);
    Eigen::Matrix2cd next_factor = factor * r;
    Eigen::Matrix2cd next_rho = detail::rho_from_factor(next_factor);
    double next_ll = detail::log_likelihood(terms, next_rho);
    for (double eps = 1.0; !(next_ll > ll) && eps > 1e-12; eps *= 0.5) {
      next_factor = factor * (id + eps * r);
      next_rho = detail::rho_from_factor(next_factor);
      next_ll = detail::log_likelihood(terms, next_rho);
    }
    result.iterations = it;
    if (!(next_ll > ll)) {
      // No ascent direction left at double precision.
      return result;
    }
    const double gain = next_ll - ll;
    // Keep the factor well scaled.
    factor = next_factor / std::sqrt(next_factor.squaredNorm());
    rho = next_rho;
    ll = next_ll;
    result.rho = DensityOperator({2}, 0.5 * (rho + rho.adjoint()));
    result.log_likelihood.push_back(ll);
    if (gain < options.tolerance) return result;
  }
  throw MleNotConverged("mle_reconstruct: no convergence within " +
                            std::to_string(options.max_iterations) + " iterations",
                        std::move(result));
}

inline DensityOperator mle_reconstruct(const CountsRecord& counts, const MleOptions& options = {}) {
  return maximum_likelihood(counts, options).rho;
}

enum class Method { kLinear, kMle };

inline const char* method_name(Method m) { return m == Method::kMle ? "mle" : "linear"; }

struct Metrics {
  double fidelity;
  double distance;
};

/// Fidelity and trace distance of a reconstructed operator to a pure target.
/// Linear-inversion estimates may be non-positive, so fidelity is taken as
/// <target|rho|target>, which coincides with the Uhlmann fidelity for
/// physical rho.
inline Metrics metrics_to_target(const Eigen::Matrix2cd& rho, const Qubit& target) {
  const Eigen::Vector2cd t = target.vec();
  const double f = std::clamp((t.adjoint() * rho * t)(0, 0).real(), 0.0, 1.0);
  const DensityOperator r({2}, 0.5 * (rho + rho.adjoint()));
  return {f, trace_distance(r, target.density())};
}

inline Eigen::Matrix2cd reconstruct_matrix(const CountsRecord& counts, Method method) {
  if (method == Method::kLinear) return linear_inversion(counts);
  return mle_reconstruct(counts).matrix();
}

struct BootstrapEstimate {
  double fidelity = 0.0;
  double fidelity_std = 0.0;
  double distance = 0.0;
  double distance_std = 0.0;
  int samples = 0;
};

/// Parametric bootstrap: each resample redraws every basis multinomially
/// from its empirical frequencies with the same total, then reconstructs.
/// Returns the mean and sample standard deviation of both metrics.
inline BootstrapEstimate bootstrap_errors(const CountsRecord& counts, const Qubit& target,
                                          int resamples, RandomSource& rng,
                                          Method method = Method::kMle) {
  if (resamples < 2) throw DomainError("bootstrap_errors: need at least two resamples");
  detail::require_totals(counts);
  std::vector<double> fs, ds;
  fs.reserve(static_cast<std::size_t>(resamples));
  ds.reserve(static_cast<std::size_t>(resamples));
  for (int i = 0; i < resamples; ++i) {
    CountsRecord resampled;
    for (Basis b : kBases) {
      const auto n = counts.pair(b);
      const double t = static_cast<double>(n[0] + n[1]);
      const std::array<double, 2> probs{n[0] / t, n[1] / t};
      const auto drawn = noise::sample_counts(probs, n[0] + n[1], rng);
      resampled.set(b, drawn[0], drawn[1]);
    }
    const Metrics m = metrics_to_target(reconstruct_matrix(resampled, method), target);
    fs.push_back(m.fidelity);
    ds.push_back(m.distance);
  }
  auto mean_std = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return std::pair{mean, std::sqrt(var)};
  };
  const auto [fm, fsd] = mean_std(fs);
  const auto [dm, dsd] = mean_std(ds);
  return {fm, fsd, dm, dsd, resamples};
}

struct ReconstructionResult {
  DensityOperator rho;
  Method method;
  double fidelity_to_target;
  double fidelity_std;
  double distance_to_target;
  double distance_std;
  int bootstrap_samples;
};

/// Point estimate plus bootstrap spreads. With resamples == 0 the spreads are
/// reported as zero.
inline ReconstructionResult reconstruct(const CountsRecord& counts, const Qubit& target,
                                        Method method, int resamples, RandomSource& rng) {
  const Eigen::Matrix2cd rho = reconstruct_matrix(counts, method);
  const Metrics point = metrics_to_target(rho, target);
  ReconstructionResult out{DensityOperator({2}, rho), method, point.fidelity, 0.0,
                           point.distance, 0.0, 0};
  if (resamples > 0) {
    const BootstrapEstimate be = bootstrap_errors(counts, target, resamples, rng, method);
    out.fidelity_std = be.fidelity_std;
    out.distance_std = be.distance_std;
    out.bootstrap_samples = be.samples;
  }
  return out;
}

}  // namespace qadder::tomography
