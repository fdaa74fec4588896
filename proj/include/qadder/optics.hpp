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

// Linear-optical quantum adder on two photons.
//
// Photons are labeled by the interferometer arm they occupy rather than by
// their origin: arm A holds paths 1/2 (exit mode 5), arm B holds paths 3/4
// (exit mode 6). The joint state lives on (path_A, pol_A, path_B, pol_B),
// each factor two-dimensional, with path bit 0 for paths 1/3 and bit 1 for
// paths 2/4.
//
// Stages:
//   1. prepare_input    beam displacers turn each input polarization qubit
//                       into a path qubit; both polarizations are set to |+>.
//   2. pbs1_postselect  PBS1 transmits H and reflects V into the other arm.
//                       A coincidence keeps only |HH> (arms unchanged) and
//                       |VV> (arm contents exchanged): a controlled swap whose
//                       control is (|HH> + |VV>)/sqrt(2).
//   3. erase_control    HWP5/HWP6 at theta/2, PBS2/PBS3 keep H, and the path
//                       qubit is converted back to polarization in modes 5/6.
//   4. project_photon2  HWP11 + PBS4 project mode 6 onto |H>.
//
// PBS transmission and reflection carry no relative phase.

#pragma once

#include <cmath>
#include <numbers>

#include "qadder/core.hpp"
#include "qadder/qubit.hpp"

namespace qadder::optics {

inline constexpr std::size_t kPathA = 0;
inline constexpr std::size_t kPolA = 1;
inline constexpr std::size_t kPathB = 2;
inline constexpr std::size_t kPolB = 3;

inline const Dims& mode_dims() {
  static const Dims dims{2, 2, 2, 2};
  return dims;
}

// The erasure projection is referred to the coincidence-heralded control pair
// |HH> + |VV> rather than to its normalized form. With this convention the
// reported success probability is N^2 / 2; stages.physical() is half of it.
inline constexpr double kControlPairNormalization = 2.0;

enum class WaveplateKind { kHalf, kQuarter };

struct WaveplateSetting {
  WaveplateKind kind;
  double angle;  // fast-axis angle, radians
};

inline double degrees(double deg) { return deg * std::numbers::pi / 180.0; }

inline LinearOperator hwp_jones(double angle) {
  const double c = std::cos(2 * angle), s = std::sin(2 * angle);
  Matrix m(2, 2);
  m << c, s, s, -c;
  return LinearOperator({2}, {2}, std::move(m));
}

/// Quarter-wave plate; qwp_jones(45 deg) maps |H> to (|H> + i|V>)/sqrt(2) up
/// to a global phase.
inline LinearOperator qwp_jones(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix rot(2, 2), ret(2, 2);
  rot << c, -s, s, c;
  ret << 1.0, 0.0, 0.0, -kI;
  return LinearOperator({2}, {2}, rot * ret * rot.transpose());
}

inline LinearOperator jones(const WaveplateSetting& w) {
  return w.kind == WaveplateKind::kHalf ? hwp_jones(w.angle) : qwp_jones(w.angle);
}

struct CircuitConfig {
  Qubit input1;
  Qubit input2;
  double theta = std::numbers::pi / 4;

  void validate() const {
    if (!(theta >= -1e-12 && theta <= std::numbers::pi / 2 + 1e-12)) {
      throw DomainError("CircuitConfig: theta must lie in [0, pi/2]");
    }
  }
};

/// Per-stage probabilities, each conditional on the previous stages.
struct StageProbabilities {
  double coincidence = 1.0;
  double erasure = 1.0;
  double projection = 1.0;

  double physical() const { return coincidence * erasure * projection; }
  double heralded() const { return kControlPairNormalization * physical(); }
};

struct TrackedState {
  StateVector state;
  StageProbabilities stages;
};

struct CircuitOutcome {
  Qubit output;
  double success_prob;
  StageProbabilities stages;
};

namespace detail {

inline void require_theta(double theta) { CircuitConfig{Qubit::H(), Qubit::H(), theta}.validate(); }

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

inline Eigen::Vector2cd ket_h() { return {1.0, 0.0}; }
inline Eigen::Vector2cd ket_v() { return {0.0, 1.0}; }

}  // namespace detail

/// BD1/BD2 split H into path 1 and V into path 2, the V path passes a HWP at
/// 45 deg, then HWP3/HWP4 at 22.5 deg: |H> -> |1>|+>, |V> -> |2>|+>.
inline LinearOperator polarization_to_path() {
  Matrix split = Matrix::Zero(4, 2);
  split(0, 0) = 1.0;  // |H> -> |path 1, H>
  split(3, 1) = 1.0;  // |V> -> |path 2, V>
  const Matrix fold = detail::block_diag(Matrix::Identity(2, 2), hwp_jones(degrees(45)).matrix());
  const Matrix rotate = qadder::detail::kron(Matrix::Identity(2, 2), hwp_jones(degrees(22.5)).matrix());
  return LinearOperator({2}, {2, 2}, rotate * fold * split);
}

inline StateVector prepare_input(const CircuitConfig& config) {
  config.validate();
  const LinearOperator enc = polarization_to_path();
  return tensor_product(enc.apply(config.input1.state()), enc.apply(config.input2.state()));
}

/// Coincidence Kraus operator of PBS1 on the arm-labeled space.
inline LinearOperator pbs1_coincidence_operator() {
  Matrix k = Matrix::Zero(16, 16);
  for (std::size_t pa = 0; pa < 2; ++pa) {
    for (std::size_t pb = 0; pb < 2; ++pb) {
      for (std::size_t s = 0; s < 2; ++s) {
        const auto in = static_cast<Eigen::Index>(8 * pa + 4 * s + 2 * pb + s);
        // H photons stay in their arm; V photons cross, exchanging arm contents.
        const auto out = s == 0 ? in : static_cast<Eigen::Index>(8 * pb + 4 * s + 2 * pa + s);
        k(out, in) = 1.0;
      }
    }
  }
  return LinearOperator(mode_dims(), mode_dims(), std::move(k));
}

inline TrackedState pbs1_postselect(const StateVector& state) {
  if (state.dims() != mode_dims()) {
    throw DimensionMismatch("pbs1_postselect: expected dims [2,2,2,2]");
  }
  if (!state.is_normalized(1e-12)) {
    throw InvalidStateError("pbs1_postselect: input state is not normalized");
  }
  const StateVector out = pbs1_coincidence_operator().apply(state);
  const double prob = out.amplitudes().squaredNorm();
  if (!(prob > kZeroNorm * kZeroNorm)) {
    throw DomainError("pbs1_postselect: input has no coincidence component");
  }
  return {normalize(out).state, {prob, 1.0, 1.0}};
}

/// One arm's share of the erasure stage: HWP at theta/2, PBS keeping H, then
/// path 1 through HWP8/HWP10 (0 deg) into H and path 2 through HWP7/HWP9
/// (45 deg) into V, merged by BD3/BD4.
inline LinearOperator arm_erasure(double theta) {
  const Matrix rotate = hwp_jones(theta / 2).matrix();
  const Eigen::RowVector2cd keep_h = detail::ket_h().adjoint() * rotate;
  const Eigen::Vector2cd from_path1 =
      detail::ket_h() * (detail::ket_h().adjoint() * hwp_jones(0.0).matrix() * detail::ket_h());
  const Eigen::Vector2cd from_path2 =
      detail::ket_v() * (detail::ket_v().adjoint() * hwp_jones(degrees(45)).matrix() * detail::ket_h());
  Matrix m(2, 4);
  m.leftCols(2) = from_path1 * keep_h;
  m.rightCols(2) = from_path2 * keep_h;
  return LinearOperator({2, 2}, {2}, std::move(m));
}

inline LinearOperator erasure_operator(double theta) {
  detail::require_theta(theta);
  const LinearOperator arm = arm_erasure(theta);
  return tensor_product(arm, arm);
}

/// Polarization state of modes 5/6, renormalized:
/// cos^2(theta)|psi>|phi> + sin^2(theta)|phi>|psi>.
inline TrackedState erase_control(const TrackedState& in, double theta) {
  if (in.state.dims() != mode_dims()) {
    throw DimensionMismatch("erase_control: expected dims [2,2,2,2]");
  }
  const StateVector out = erasure_operator(theta).apply(in.state);
  const double prob = out.amplitudes().squaredNorm();
  if (!(prob > kZeroNorm * kZeroNorm)) {
    throw ZeroSuccessError("erase_control: erased state vanishes");
  }
  TrackedState result{normalize(out).state, in.stages};
  result.stages.erasure = prob;
  return result;
}

/// HWP11 + PBS4: <H| on mode 6.
inline LinearOperator photon2_projector() {
  Matrix m = Matrix::Zero(2, 4);
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  return LinearOperator({2, 2}, {2}, std::move(m));
}

inline CircuitOutcome project_photon2(const TrackedState& in) {
  if (in.state.dims() != Dims{2, 2}) {
    throw DimensionMismatch("project_photon2: expected dims [2,2]");
  }
  const StateVector out = photon2_projector().apply(in.state);
  StageProbabilities stages = in.stages;
  stages.projection = out.amplitudes().squaredNorm();
  const double success = stages.heralded();
  if (!(std::sqrt(2 * success) > kZeroNorm)) {
    throw ZeroSuccessError("zero overlap with referential state: photon 2 projection vanishes");
  }
  return {Qubit::from_state(canonical_phase(normalize(out).state)), success, stages};
}

inline CircuitOutcome run_circuit(const CircuitConfig& config) {
  const TrackedState post = pbs1_postselect(prepare_input(config));
  return project_photon2(erase_control(post, config.theta));
}

}  // namespace qadder::optics
