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

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qadder/core.hpp"

namespace qadder {

/// Normalized polarization qubit h|H> + v|V>.
class Qubit {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Requires |h|^2 + |v|^2 = 1 within kNormTolerance.
  static Qubit from_amplitudes(Complex h, Complex v) {
    const double n2 = std::norm(h) + std::norm(v);
    if (std::abs(std::sqrt(n2) - 1.0) > kNormTolerance) {
      throw InvalidStateError("Qubit: amplitudes are not normalized (norm^2 = " +
                              std::to_string(n2) + ")");
    }
    return Qubit(h, v);
  }

  static Qubit normalized(Complex h, Complex v) {
    const double n = std::sqrt(std::norm(h) + std::norm(v));
    if (!(n > kZeroNorm)) throw DegenerateStateError("Qubit: zero vector");
    return Qubit(h / n, v / n);
  }

  static Qubit from_vector(const Eigen::Vector2cd& v) { return normalized(v[0], v[1]); }

  static Qubit from_state(const StateVector& s) {
    if (s.dims() != Dims{2}) throw DimensionMismatch("Qubit: state is not a single qubit");
    return normalized(s[0], s[1]);
  }

  /// cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>, angles in radians.
  static Qubit from_bloch(double theta, double phi) {
    return Qubit(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  }

  static Qubit H() { return Qubit(1.0, 0.0); }
  static Qubit V() { return Qubit(0.0, 1.0); }
  static Qubit D() { return Qubit(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2); }
  static Qubit A() { return Qubit(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2); }
  static Qubit R() { return Qubit(std::numbers::sqrt2 / 2, kI * (std::numbers::sqrt2 / 2)); }
  static Qubit L() { return Qubit(std::numbers::sqrt2 / 2, -kI * (std::numbers::sqrt2 / 2)); }

  Complex h() const { return h_; }
  Complex v() const { return v_; }

  Eigen::Vector2cd vec() const { return Eigen::Vector2cd(h_, v_); }
  StateVector state() const { return StateVector({2}, vec()); }
  DensityOperator density() const { return DensityOperator::from_pure(state()); }

  /// <this|other>
  Complex overlap(const Qubit& other) const {
    return std::conj(h_) * other.h_ + std::conj(v_) * other.v_;
  }

  Qubit canonical() const { return from_vector(canonical_phase(Vector(vec()))); }

  bool operator==(const Qubit&) const = default;

 private:
  Qubit(Complex h, Complex v) : h_(h), v_(v) {}

  Complex h_;
  Complex v_;
};

/// Phase-insensitive closeness: 1 - |<a|b>|^2.
inline double infidelity(const Qubit& a, const Qubit& b) {
  return std::max(0.0, 1.0 - std::norm(a.overlap(b)));
}

}  // namespace qadder
