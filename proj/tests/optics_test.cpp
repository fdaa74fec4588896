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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qadder/optics.hpp"
#include "qadder/protocol.hpp"

using namespace qadder;
using namespace qadder::optics;

namespace {

Qubit random_qubit(oracle::Rng& rng) { return Qubit::from_vector(oracle::random_state(rng)); }

constexpr double kQuarterPi = std::numbers::pi / 4;

}  // namespace

TEST(Waveplates, HalfWaveAt45SwapsHV) {
  const Matrix m = hwp_jones(degrees(45)).matrix();
  EXPECT_NEAR(std::abs(m(1, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(0, 0)), 0.0, 1e-15);
}

TEST(Waveplates, HalfWaveAt22_5MapsHToDiagonal) {
  const Vector out = hwp_jones(degrees(22.5)).matrix() * Qubit::H().vec();
  EXPECT_LT(oracle::phase_insensitive_infidelity(out, Qubit::D().vec()), 1e-15);
}

TEST(Waveplates, QuarterWaveAt45MapsHToCircular) {
  const Vector out = qwp_jones(degrees(45)).matrix() * Qubit::H().vec();
  EXPECT_LT(oracle::phase_insensitive_infidelity(out, Qubit::R().vec()), 1e-15);
}

TEST(Waveplates, AreUnitary) {
  for (double a : {0.0, 0.3, 1.1, 2.5}) {
    EXPECT_TRUE(hwp_jones(a).is_unitary());
    EXPECT_TRUE(qwp_jones(a).is_unitary());
    EXPECT_TRUE(jones({WaveplateKind::kQuarter, a}).is_unitary());
  }
}

TEST(Encoding, PolarizationBecomesPathWithDiagonalPolarization) {
  const LinearOperator enc = polarization_to_path();
  const double r = std::numbers::sqrt2 / 2;
  const StateVector h = enc.apply(Qubit::H().state());
  const StateVector v = enc.apply(Qubit::V().state());
  EXPECT_NEAR(std::abs(h[0] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h[1] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[2] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[3] - r), 0.0, 1e-15);
  EXPECT_TRUE(LinearOperator({2}, {2}, enc.matrix().adjoint() * enc.matrix()).is_unitary());
}

TEST(Pbs1, CoincidenceProbabilityIsOneHalf) {
  oracle::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const CircuitConfig cfg{random_qubit(rng), random_qubit(rng)};
    EXPECT_NEAR(pbs1_postselect(prepare_input(cfg)).stages.coincidence, 0.5, 1e-12);
  }
}

TEST(Pbs1, MatchesTermByTermOracle) {
  oracle::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Qubit p = random_qubit(rng), q = random_qubit(rng);
    const StateVector post = pbs1_postselect(prepare_input({p, q})).state;
    const oracle::Vec expected = oracle::post_pbs1_state(p.h(), p.v(), q.h(), q.v());
    EXPECT_LT((post.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Pbs1, RejectsUnnormalizedAndWrongDims) {
  EXPECT_THROW(pbs1_postselect(StateVector({2, 2}, Vector::Zero(4))), DimensionMismatch);
  Vector v = Vector::Zero(16);
  v[0] = 2.0;
  EXPECT_THROW(pbs1_postselect(StateVector(mode_dims(), v)), InvalidStateError);
}

TEST(Pbs1, NoCoincidenceComponentIsDomainError) {
  // Both photons H-polarized but photon B vertically polarized in arm B:
  // index (pa=0, H, pb=0, V) has mismatched polarizations.
  EXPECT_THROW(pbs1_postselect(StateVector::basis(mode_dims(), 1)), DomainError);
}

TEST(Erasure, ProducesWeightedOrderings) {
  oracle::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Qubit p = random_qubit(rng), q = random_qubit(rng);
    const double theta = rng.uniform() * std::numbers::pi / 2;
    const TrackedState t = erase_control(pbs1_postselect(prepare_input({p, q, theta})), theta);
    const double c2 = std::pow(std::cos(theta), 2), s2 = std::pow(std::sin(theta), 2);
    const oracle::Vec expected = c2 * oracle::kron(p.vec(), q.vec()) + s2 * oracle::kron(q.vec(), p.vec());
    EXPECT_LT(oracle::phase_insensitive_infidelity(t.state.amplitudes(), expected), 1e-12);
  }
}

TEST(Erasure, RejectsThetaOutsideRange) {
  EXPECT_THROW(erasure_operator(-0.1), DomainError);
  EXPECT_THROW(erasure_operator(2.0), DomainError);
  EXPECT_THROW(run_circuit({Qubit::H(), Qubit::D(), 2.0}), DomainError);
}

TEST(Circuit, MatchesClosedFormOnRandomInputs) {
  oracle::Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const Qubit p = random_qubit(rng), q = random_qubit(rng);
    const double theta = rng.uniform() * std::numbers::pi / 2;
    const CircuitOutcome out = run_circuit({p, q, theta});
    const protocol::AdderOutcome ref = protocol::superpose_theta(p, q, theta);
    EXPECT_LT(infidelity(out.output, ref.state), 1e-10);
    EXPECT_NEAR(out.success_prob, ref.success_prob, 1e-12);
  }
}

TEST(Circuit, PhysicalProbabilityIsHalfTheHeralded) {
  const CircuitOutcome out = run_circuit({Qubit::H(), Qubit::D(), kQuarterPi});
  EXPECT_NEAR(out.stages.physical() * 2, out.success_prob, 1e-15);
  EXPECT_NEAR(out.success_prob, 5.0 / 16, 1e-12);
}

TEST(Circuit, OrthogonalPairGivesHWithProbabilityOneEighth) {
  const CircuitOutcome out = run_circuit({Qubit::D(), Qubit::A(), kQuarterPi});
  EXPECT_LT(infidelity(out.output, Qubit::H()), 1e-12);
  EXPECT_NEAR(out.success_prob, 0.125, 1e-12);
}

TEST(Circuit, ThetaZeroReturnsFirstInput) {
  oracle::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Qubit p = random_qubit(rng), q = random_qubit(rng);
    EXPECT_LT(infidelity(run_circuit({p, q, 0.0}).output, p), 1e-12);
  }
}

TEST(Circuit, NoGoPairIsZeroSuccess) {
  EXPECT_THROW(run_circuit({Qubit::V(), Qubit::V(), kQuarterPi}), ZeroSuccessError);
  EXPECT_THROW(run_circuit({Qubit::V(), Qubit::V(), 0.3}), ZeroSuccessError);
}

TEST(Circuit, OutputHasCanonicalPhase) {
  const CircuitOutcome out = run_circuit({Qubit::R(), Qubit::L(), kQuarterPi});
  EXPECT_GE(out.output.h().real(), 0.0);
  EXPECT_NEAR(out.output.h().imag(), 0.0, 1e-15);
}
