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

// Dense complex linear algebra over small tensor-product Hilbert spaces:
// pure and mixed states, linear maps between factor spaces, partial trace,
// and the two state-comparison metrics (fidelity and trace distance).
//
// Factor ordering follows the Kronecker convention: the first factor is the
// most significant digit of a basis index.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qadder {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline constexpr Complex kI{0.0, 1.0};

// Slack for validity checks on density operators.
inline constexpr double kPsdSlack = 1e-10;
// Eigenvalues below -kSqrtClampLimit are rejected by matrix_sqrt_psd; those
// between it and zero are clamped.
inline constexpr double kSqrtClampLimit = 1e-8;
// Norms below this are treated as exactly zero.
inline constexpr double kZeroNorm = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a heralded operation has vanishing success amplitude.
class ZeroSuccessError : public Error {
 public:
  using Error::Error;
};

inline std::size_t product_of(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

inline Dims concat(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline std::string dims_string(const Dims& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

class StateVector {
 public:
  StateVector(Dims dims, Vector amplitudes)
      : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    if (dims_.empty() || product_of(dims_) !=
                             static_cast<std::size_t>(amplitudes_.size())) {
      throw DimensionMismatch("StateVector: amplitude count " +
                              std::to_string(amplitudes_.size()) +
                              " does not match dims " + dims_string(dims_));
    }
  }

  static StateVector basis(Dims dims, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(product_of(dims)));
    if (index >= static_cast<std::size_t>(v.size())) {
      throw DimensionMismatch("StateVector::basis: index out of range");
    }
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(dims), std::move(v));
  }

  const Dims& dims() const { return dims_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const {
    return amplitudes_[static_cast<Eigen::Index>(i)];
  }

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol = 1e-12) const {
    return std::abs(norm() - 1.0) <= tol;
  }

 private:
  Dims dims_;
  Vector amplitudes_;
};

class DensityOperator {
 public:
  DensityOperator(Dims dims, Matrix matrix)
      : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(product_of(dims_));
    if (dims_.empty() || matrix_.rows() != n || matrix_.cols() != n) {
      throw DimensionMismatch("DensityOperator: matrix shape does not match dims " +
                              dims_string(dims_));
    }
  }

  static DensityOperator from_pure(const StateVector& psi) {
    const Vector& v = psi.amplitudes();
    return DensityOperator(psi.dims(), v * v.adjoint());
  }

  const Dims& dims() const { return dims_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  Complex trace() const { return matrix_.trace(); }

  /// Throws InvalidStateError unless the operator is Hermitian, PSD and
  /// (when `require_unit_trace`) of unit trace, all within kPsdSlack.
  void validate(bool require_unit_trace = true) const {
    const Matrix diff = matrix_ - matrix_.adjoint();
    if (diff.cwiseAbs().maxCoeff() > kPsdSlack) {
      throw InvalidStateError("density operator is not Hermitian");
    }
    if (require_unit_trace && std::abs(trace() - 1.0) > kPsdSlack) {
      throw InvalidStateError("density operator trace is not 1");
    }
    const Matrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdSlack) {
      throw InvalidStateError("density operator has a negative eigenvalue");
    }
  }

  bool is_valid(bool require_unit_trace = true) const {
    try {
      validate(require_unit_trace);
      return true;
    } catch (const InvalidStateError&) {
      return false;
    }
  }

  /// Divides by the trace. Throws DegenerateStateError on zero trace.
  DensityOperator normalized() const {
    const double t = trace().real();
    if (!(t > kZeroNorm * kZeroNorm)) {
      throw DegenerateStateError("density operator has vanishing trace");
    }
    return DensityOperator(dims_, matrix_ / t);
  }

 private:
  Dims dims_;
  Matrix matrix_;
};

class LinearOperator {
 public:
  LinearOperator(Dims in_dims, Dims out_dims, Matrix matrix)
      : in_dims_(std::move(in_dims)),
        out_dims_(std::move(out_dims)),
        matrix_(std::move(matrix)) {
    if (in_dims_.empty() || out_dims_.empty() ||
        matrix_.rows() != static_cast<Eigen::Index>(product_of(out_dims_)) ||
        matrix_.cols() != static_cast<Eigen::Index>(product_of(in_dims_))) {
      throw DimensionMismatch("LinearOperator: matrix shape does not match " +
                              dims_string(out_dims_) + " x " + dims_string(in_dims_));
    }
  }

  static LinearOperator identity(Dims dims) {
    const auto n = static_cast<Eigen::Index>(product_of(dims));
    return LinearOperator(dims, dims, Matrix::Identity(n, n));
  }

  const Dims& in_dims() const { return in_dims_; }
  const Dims& out_dims() const { return out_dims_; }
  const Matrix& matrix() const { return matrix_; }

  StateVector apply(const StateVector& psi) const {
    if (psi.dims() != in_dims_) {
      throw DimensionMismatch("LinearOperator::apply: state dims " +
                              dims_string(psi.dims()) + " != " + dims_string(in_dims_));
    }
    return StateVector(out_dims_, matrix_ * psi.amplitudes());
  }

  /// K rho K^dagger, without renormalization.
  DensityOperator apply(const DensityOperator& rho) const {
    if (rho.dims() != in_dims_) {
      throw DimensionMismatch("LinearOperator::apply: operator dims " +
                              dims_string(rho.dims()) + " != " + dims_string(in_dims_));
    }
    return DensityOperator(out_dims_, matrix_ * rho.matrix() * matrix_.adjoint());
  }

  /// this * other (other acts first).
  LinearOperator after(const LinearOperator& other) const {
    if (other.out_dims() != in_dims_) {
      throw DimensionMismatch("LinearOperator::after: incompatible factor dims");
    }
    return LinearOperator(other.in_dims(), out_dims_, matrix_ * other.matrix());
  }

  LinearOperator adjoint() const {
    return LinearOperator(out_dims_, in_dims_, matrix_.adjoint());
  }

  bool is_unitary(double tol = 1e-12) const {
    if (matrix_.rows() != matrix_.cols()) return false;
    const Matrix gram = matrix_.adjoint() * matrix_;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  Dims in_dims_;
  Dims out_dims_;
  Matrix matrix_;
};

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
}

}  // namespace detail

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
  return StateVector(concat(a.dims(), b.dims()),
                     detail::kron(a.amplitudes(), b.amplitudes()));
}

inline LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b) {
  return LinearOperator(concat(a.in_dims(), b.in_dims()),
                        concat(a.out_dims(), b.out_dims()),
                        detail::kron(a.matrix(), b.matrix()));
}

inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(concat(a.dims(), b.dims()),
                         detail::kron(a.matrix(), b.matrix()));
}

/// Traces out every factor not listed in `keep`. Kept factors retain their
/// original relative order.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     std::vector<std::size_t> keep) {
  const Dims& dims = rho.dims();
  const std::size_t nf = dims.size();
  if (keep.empty()) {
    throw DomainError("partial_trace: keep set is empty");
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.back() >= nf) {
    throw DomainError("partial_trace: factor index " + std::to_string(keep.back()) +
                      " out of range for dims " + dims_string(dims));
  }

  std::vector<bool> kept(nf, false);
  for (auto k : keep) kept[k] = true;
  Dims keep_dims, trace_dims;
  std::vector<std::size_t> keep_idx, trace_idx;
  for (std::size_t f = 0; f < nf; ++f) {
    (kept[f] ? keep_dims : trace_dims).push_back(dims[f]);
    (kept[f] ? keep_idx : trace_idx).push_back(f);
  }

  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * dims[f];

  // Full-space offset contributed by a multi-index over a subset of factors.
  auto offsets = [&](const Dims& sub_dims, const std::vector<std::size_t>& idx) {
    const std::size_t n = product_of(sub_dims);
    std::vector<std::size_t> out(n, 0);
    for (std::size_t flat = 0; flat < n; ++flat) {
      std::size_t rem = flat, off = 0;
      for (std::size_t s = sub_dims.size(); s-- > 0;) {
        off += (rem % sub_dims[s]) * stride[idx[s]];
        rem /= sub_dims[s];
      }
      out[flat] = off;
    }
    return out;
  };

  const auto koff = offsets(keep_dims, keep_idx);
  const auto toff = trace_dims.empty() ? std::vector<std::size_t>{0}
                                       : offsets(trace_dims, trace_idx);
  const auto nk = static_cast<Eigen::Index>(koff.size());
  Matrix out = Matrix::Zero(nk, nk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < nk; ++i) {
    for (Eigen::Index j = 0; j < nk; ++j) {
      Complex acc = 0.0;
      for (auto t : toff) {
        acc += m(static_cast<Eigen::Index>(koff[i] + t),
                 static_cast<Eigen::Index>(koff[j] + t));
      }
      out(i, j) = acc;
    }
  }
  return DensityOperator(keep_dims, std::move(out));
}

/// Principal square root of a Hermitian PSD matrix via eigendecomposition.
inline Matrix matrix_sqrt_psd(const Matrix& m) {
  detail::require_square(m, "matrix_sqrt_psd");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw NotPsdError("matrix_sqrt_psd: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(detail::hermitian_part(m));
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -kSqrtClampLimit) {
    throw NotPsdError("matrix_sqrt_psd: eigenvalue " + std::to_string(ev.minCoeff()) +
                      " below clamp limit");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

inline void require_same_dims(const DensityOperator& a, const DensityOperator& b,
                              const char* what) {
  if (a.dims() != b.dims()) {
    throw DimensionMismatch(std::string(what) + ": dims " + dims_string(a.dims()) +
                            " vs " + dims_string(b.dims()));
  }
}

namespace detail {

// Eigenvalues of unit-trace operators below this are rounding noise; inside
// fidelity they are treated as exact zeros so that rank-deficient inputs do
// not pick up sqrt(eps)-sized errors.
inline constexpr double kEigenFloor = 1e-14;

inline Eigen::VectorXd floored_sqrt(Eigen::VectorXd ev) {
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = ev[i] < kEigenFloor ? 0.0 : std::sqrt(ev[i]);
  return ev;
}

}  // namespace detail

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0,1].
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dims(rho, sigma, "fidelity");
  rho.validate();
  sigma.validate();
  Eigen::SelfAdjointEigenSolver<Matrix> er(detail::hermitian_part(rho.matrix()));
  const Eigen::VectorXd sr = detail::floored_sqrt(er.eigenvalues());
  const Matrix s = er.eigenvectors() * sr.cast<Complex>().asDiagonal() * er.eigenvectors().adjoint();
  const Matrix inner = detail::hermitian_part(s * sigma.matrix() * s);
  Eigen::SelfAdjointEigenSolver<Matrix> ei(inner, Eigen::EigenvaluesOnly);
  const double root_trace = detail::floored_sqrt(ei.eigenvalues()).sum();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

/// Half the trace norm of rho - sigma.
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dims(rho, sigma, "trace_distance");
  const Matrix diff = detail::hermitian_part(rho.matrix() - sigma.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

/// Inner product <psi|phi> (antilinear in the first argument).
inline Complex overlap(const StateVector& psi, const StateVector& phi) {
  if (psi.dims() != phi.dims()) {
    throw DimensionMismatch("overlap: dims " + dims_string(psi.dims()) + " vs " +
                            dims_string(phi.dims()));
  }
  return psi.amplitudes().dot(phi.amplitudes());
}

struct Normalized {
  StateVector state;
  double norm;
};

inline Normalized normalize(const StateVector& psi) {
  const double n = psi.norm();
  if (!(n > kZeroNorm)) {
    throw DegenerateStateError("normalize: zero vector");
  }
  return {StateVector(psi.dims(), psi.amplitudes() / n), n};
}

/// Multiplies by a global phase so the first amplitude with modulus above
/// kZeroNorm is real and positive.
inline Vector canonical_phase(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > kZeroNorm) return v * (std::conj(v[i]) / mag);
  }
  return v;
}

inline StateVector canonical_phase(const StateVector& psi) {
  return StateVector(psi.dims(), canonical_phase(psi.amplitudes()));
}

}  // namespace qadder
