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

// Visibility-calibrated imperfections and photon counting.
//
// Imperfect interference is modeled as a single dephasing channel on the
// post-selected control pair (|HH> + |VV>)/sqrt(2): coherences between the
// HH and VV branches are scaled by the effective visibility. Counting is
// multinomial with a fixed total per measurement setting.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qadder/core.hpp"
#include "qadder/optics.hpp"
#include "qadder/random.hpp"

namespace qadder::noise {

enum class Calibration {
  kControlOnly,  // V_eff = control_visibility
  kProduct,      // V_eff = control * hom * mzi
};

struct NoiseModel {
  double control_visibility = 0.984;
  double hom_visibility = 0.996;
  double mzi_visibility = 0.98;
  std::uint64_t total_counts = 5000;
  Calibration calibration = Calibration::kControlOnly;

  static NoiseModel ideal() { return {1.0, 1.0, 1.0, 5000, Calibration::kControlOnly}; }

  void validate() const {
    for (double v : {control_visibility, hom_visibility, mzi_visibility}) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("NoiseModel: visibility outside [0,1]");
    }
    if (total_counts < 1) throw DomainError("NoiseModel: total_counts must be >= 1");
  }

  double effective_visibility() const {
    validate();
    return calibration == Calibration::kControlOnly
               ? control_visibility
               : control_visibility * hom_visibility * mzi_visibility;
  }

  bool operator==(const NoiseModel&) const = default;
};

namespace detail {

// Projector onto equal polarizations `pol` in both arms.
inline Matrix same_polarization_projector(std::size_t pol) {
  Matrix p = Matrix::Zero(16, 16);
  for (std::size_t pa = 0; pa < 2; ++pa) {
    for (std::size_t pb = 0; pb < 2; ++pb) {
      const auto i = static_cast<Eigen::Index>(8 * pa + 4 * pol + 2 * pb + pol);
      p(i, i) = 1.0;
    }
  }
  return p;
}

inline void require_visibility(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("visibility must lie in [0,1]");
}

}  // namespace detail

/// Scales the HH/VV coherences of a post-PBS1 operator by `visibility`.
inline DensityOperator apply_control_dephasing(const DensityOperator& rho, double visibility) {
  detail::require_visibility(visibility);
  if (rho.dims() != optics::mode_dims()) {
    throw DimensionMismatch("apply_control_dephasing: expected dims [2,2,2,2]");
  }
  const Matrix hh = detail::same_polarization_projector(0);
  const Matrix vv = detail::same_polarization_projector(1);
  const Matrix& m = rho.matrix();
  const Matrix support = hh + vv;
  if ((support * m * support - m).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("apply_control_dephasing: state has HV/VH components");
  }
  Matrix out = hh * m * hh + vv * m * vv + visibility * (hh * m * vv + vv * m * hh);
  return DensityOperator(rho.dims(), std::move(out));
}

inline DensityOperator apply_control_dephasing(const StateVector& post_pbs1, double visibility) {
  return apply_control_dephasing(DensityOperator::from_pure(post_pbs1), visibility);
}

struct NoisyOutcome {
  DensityOperator rho;  // photon 1 polarization, unit trace
  double success_prob;
  optics::StageProbabilities stages;
};

/// Circuit pipeline with dephasing at an explicit visibility.
inline NoisyOutcome noisy_run_at(const optics::CircuitConfig& config, double visibility) {
  const optics::TrackedState post = optics::pbs1_postselect(optics::prepare_input(config));
  const DensityOperator dephased = apply_control_dephasing(post.state, visibility);

  optics::StageProbabilities stages = post.stages;
  const DensityOperator erased = optics::erasure_operator(config.theta).apply(dephased);
  stages.erasure = erased.trace().real();
  if (!(stages.erasure > kZeroNorm * kZeroNorm)) {
    throw ZeroSuccessError("noisy_run: erased state vanishes");
  }
  const DensityOperator projected =
      optics::photon2_projector().apply(DensityOperator(erased.dims(), erased.matrix() / stages.erasure));
  stages.projection = projected.trace().real();
  const double success = stages.heralded();
  if (!(std::sqrt(2 * std::max(0.0, success)) > kZeroNorm)) {
    throw ZeroSuccessError("zero overlap with referential state: photon 2 projection vanishes");
  }
  DensityOperator rho = projected.normalized();
  rho = DensityOperator(rho.dims(), 0.5 * (rho.matrix() + rho.matrix().adjoint()));
  return {std::move(rho), success, stages};
}

inline NoisyOutcome noisy_run(const optics::CircuitConfig& config, const NoiseModel& noise) {
  return noisy_run_at(config, noise.effective_visibility());
}

/// Multinomial sample of `total` outcomes; each shot is one inverse-CDF
/// lookup of a uniform draw. Probabilities in (-1e-12, 0) are treated as 0.
inline std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                                std::uint64_t total, RandomSource& rng) {
  if (probabilities.empty()) throw DomainError("sample_counts: no outcomes");
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (p < -1e-12 || !std::isfinite(p)) {
      throw DomainError("sample_counts: negative probability " + std::to_string(p));
    }
    acc += std::max(0.0, p);
    cdf[i] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-9) {
    throw DomainError("sample_counts: probabilities sum to " + std::to_string(acc));
  }
  // Ties resolve to the last outcome with nonzero mass.
  std::size_t last = cdf.size() - 1;
  while (last > 0 && probabilities[last] <= 0.0) --last;
  cdf[last] = 1.0;

  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (std::uint64_t shot = 0; shot < total; ++shot) {
    const double u = rng.uniform();
    std::size_t k = 0;
    while (k < last && u >= cdf[k]) ++k;
    ++counts[k];
  }
  return counts;
}

}  // namespace qadder::noise
