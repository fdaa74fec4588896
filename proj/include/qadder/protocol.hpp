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

// The abstract superposition machine: two unknown qubits are entangled by a
// controlled swap, the control is projected onto |+>, and photon 2 is
// projected onto a referential state |chi>. Photon 1 is left in
//
//     (alpha <chi|phi> |psi> + beta <chi|psi> |phi>) / N
//
// with heralded success probability N^2 / 2.
//
// Returned output states are canonicalized so that the first nonzero
// amplitude is real and positive.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "qadder/core.hpp"
#include "qadder/qubit.hpp"

namespace qadder::protocol {

class ControlQubit {
 public:
  static ControlQubit from_amplitudes(Complex alpha, Complex beta) {
    if (std::abs(std::sqrt(std::norm(alpha) + std::norm(beta)) - 1.0) >
        Qubit::kNormTolerance) {
      throw InvalidStateError("ControlQubit: amplitudes are not normalized");
    }
    return ControlQubit(alpha, beta);
  }

  static ControlQubit balanced() {
    return ControlQubit(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2);
  }

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  StateVector state() const { return StateVector({2}, Eigen::Vector2cd(alpha_, beta_)); }

 private:
  ControlQubit(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {}
  Complex alpha_;
  Complex beta_;
};

struct ReferentialState {
  Qubit chi = Qubit::H();
};

struct AdderOutcome {
  Qubit state;
  double norm_factor;
  double success_prob;
};

namespace detail {

// Bit of qubit `q` (0 = most significant) in an `n`-qubit basis index.
inline std::size_t bit(std::size_t index, std::size_t q, std::size_t n) {
  return (index >> (n - 1 - q)) & 1U;
}

inline std::size_t swap_bits(std::size_t index, std::size_t q1, std::size_t q2,
                             std::size_t n) {
  if (bit(index, q1, n) == bit(index, q2, n)) return index;
  return index ^ (std::size_t{1} << (n - 1 - q1)) ^ (std::size_t{1} << (n - 1 - q2));
}

inline Dims qubit_dims(std::size_t n) { return Dims(n, 2); }

inline void require_normalized(const StateVector& s, const char* what) {
  if (!s.is_normalized(1e-12)) {
    throw InvalidStateError(std::string(what) + ": input state is not normalized");
  }
}

inline AdderOutcome outcome_from(const Eigen::Vector2cd& unnormalized,
                                 double projection_prob) {
  const double n = unnormalized.norm();
  if (!(n > kZeroNorm)) {
    throw ZeroSuccessError(
        "zero overlap with referential state: superposition amplitude vanishes");
  }
  Qubit out = Qubit::from_vector(canonical_phase(Vector(unnormalized / n)));
  return {out, n, projection_prob * n * n};
}

}  // namespace detail

/// Controlled swap on (photon 1, photon 2, control):
/// alpha|psi>|phi>|0> + beta|phi>|psi>|1>.
inline StateVector control_swap(const Qubit& psi, const Qubit& phi,
                                const ControlQubit& control) {
  const StateVector in =
      tensor_product(tensor_product(psi.state(), phi.state()), control.state());
  Vector out(8);
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t j = detail::bit(i, 2, 3) ? detail::swap_bits(i, 0, 1, 3) : i;
    out[static_cast<Eigen::Index>(j)] = in[i];
  }
  return StateVector({2, 2, 2}, std::move(out));
}

/// Projects the control onto |+>. Returns alpha|psi phi> + beta|phi psi>; the
/// 1/sqrt(2) projection amplitude is carried by the success probability.
inline StateVector project_control(const StateVector& state3) {
  if (state3.dims() != Dims{2, 2, 2}) {
    throw DimensionMismatch("project_control: expected dims [2,2,2]");
  }
  detail::require_normalized(state3, "project_control");
  Vector out(4);
  for (std::size_t i = 0; i < 4; ++i) out[static_cast<Eigen::Index>(i)] = state3[2 * i] + state3[2 * i + 1];
  return StateVector({2, 2}, std::move(out));
}

/// Projects photon 2 of a project_control output onto |chi>.
inline AdderOutcome project_referential(const StateVector& state2,
                                        const ReferentialState& chi = {}) {
  if (state2.dims() != Dims{2, 2}) {
    throw DimensionMismatch("project_referential: expected dims [2,2]");
  }
  const Complex ch = std::conj(chi.chi.h());
  const Complex cv = std::conj(chi.chi.v());
  const Eigen::Vector2cd out(ch * state2[0] + cv * state2[1],
                             ch * state2[2] + cv * state2[3]);
  return detail::outcome_from(out, 0.5);
}

inline AdderOutcome superpose(const Qubit& psi, const Qubit& phi,
                              const ControlQubit& control = ControlQubit::balanced(),
                              const ReferentialState& chi = {}) {
  return project_referential(project_control(control_swap(psi, phi, control)), chi);
}

/// Closed-form output of the optical implementation with the erasure wave
/// plates at theta/2: (c cos^2 theta |psi> + a sin^2 theta |phi>) / N, where
/// a = <H|psi>, c = <H|phi>, and success probability N^2 / 2.
inline AdderOutcome superpose_theta(const Qubit& psi, const Qubit& phi, double theta) {
  const Complex a = psi.h();
  const Complex c = phi.h();
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double sin2t = std::sin(2 * theta);
  const double n2 = std::norm(c * c2) + std::norm(a * s2) +
                    0.5 * sin2t * sin2t * (std::conj(a) * c * phi.overlap(psi)).real();
  const double n = std::sqrt(std::max(0.0, n2));
  if (!(n > kZeroNorm)) {
    throw ZeroSuccessError(
        "zero overlap with referential state: superposition amplitude vanishes");
  }
  const Eigen::Vector2cd u = c * c2 * psi.vec() + a * s2 * phi.vec();
  return {Qubit::from_vector(canonical_phase(Vector(u / n))), n, 0.5 * n * n};
}

/// Uniform superposition of the all-zero and the n-1 one-hot basis states of
/// an (n-1)-qubit control register. Branch k (one-hot on control k-2) swaps
/// photon 1 with photon k.
inline StateVector control_register(std::size_t n) {
  if (n < 2) throw DomainError("control_register: need at least two photons");
  const std::size_t m = n - 1;
  Vector v = Vector::Zero(std::int64_t{1} << m);
  const double w = 1.0 / std::sqrt(static_cast<double>(n));
  v[0] = w;
  for (std::size_t k = 0; k < m; ++k) v[std::int64_t{1} << (m - 1 - k)] = w;
  return StateVector(detail::qubit_dims(m), std::move(v));
}

/// Entangled state of n photons followed by the n-1 control qubits, after the
/// sequential controlled swaps (1,k), k = 2..n. For three photons the photon
/// part is (psi phi xi |00> + phi psi xi |10> + xi phi psi |01>) / sqrt(3).
inline StateVector entangle_n(std::span<const Qubit> states) {
  const std::size_t n = states.size();
  if (n < 2) throw DomainError("entangle_n: need at least two states");
  if (n > 10) throw DomainError("entangle_n: at most ten states are supported");
  StateVector s = states[0].state();
  for (std::size_t k = 1; k < n; ++k) s = tensor_product(s, states[k].state());
  s = tensor_product(s, control_register(n));

  const std::size_t total = 2 * n - 1;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t control = n + k - 1;
    Vector out(s.amplitudes().size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::size_t j =
          detail::bit(i, control, total) ? detail::swap_bits(i, 0, k, total) : i;
      out[static_cast<Eigen::Index>(j)] = s[i];
    }
    s = StateVector(s.dims(), std::move(out));
  }
  return s;
}

/// n-state generalization: entangle, project the control register back onto
/// its initial superposition, then project photons 2..n onto their
/// referential states. Success probability is N^2 / n.
inline AdderOutcome superpose_n(std::span<const Qubit> states,
                                std::span<const ReferentialState> referentials) {
  const std::size_t n = states.size();
  if (n < 2) throw DomainError("superpose_n: need at least two states");
  if (referentials.size() != n - 1) {
    throw DomainError("superpose_n: need exactly n-1 referential states");
  }
  const StateVector full = entangle_n(states);
  const StateVector reg = control_register(n);
  const std::size_t photon_dim = std::size_t{1} << n;
  const std::size_t reg_dim = reg.size();

  // sqrt(n) <register| applied to the control factor; the 1/n projection
  // probability is restored below.
  const double scale = std::sqrt(static_cast<double>(n));
  Vector photons = Vector::Zero(static_cast<Eigen::Index>(photon_dim));
  for (std::size_t p = 0; p < photon_dim; ++p) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < reg_dim; ++c) acc += std::conj(reg[c]) * full[p * reg_dim + c];
    photons[static_cast<Eigen::Index>(p)] = scale * acc;
  }

  // Contract photons n..2 with their referential bras, last factor first.
  Vector cur = photons;
  for (std::size_t k = n; k-- > 1;) {
    const Qubit& chi = referentials[k - 1].chi;
    const Eigen::Index half = cur.size() / 2;
    Vector next(half);
    for (Eigen::Index i = 0; i < half; ++i) {
      next[i] = std::conj(chi.h()) * cur[2 * i] + std::conj(chi.v()) * cur[2 * i + 1];
    }
    cur = std::move(next);
  }
  return detail::outcome_from(Eigen::Vector2cd(cur[0], cur[1]),
                              1.0 / static_cast<double>(n));
}

}  // namespace qadder::protocol
