// Copyright 2026 The qngbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace qng {

using cplx = std::complex<double>;

inline constexpr int kMaxStateQubits = 12;
inline constexpr int kMaxDensityQubits = 10;

/// Dense gate matrix. Bit l of a row/column index refers to targets[l].
using GateMatrix = Eigen::MatrixXcd;

/// Pure state of N qubits.
///
/// Qubit q is bit q of the computational-basis index, so qubit 0 is the least
/// significant bit. Every operator, gate and bitstring in the library uses
/// this ordering.
class StateVector {
 public:
  /// |0...0> on `n_qubits` qubits.
  explicit StateVector(int n_qubits);

  /// Takes ownership of `amplitudes`; the length must be 2^n_qubits and the
  /// norm must be 1 within 1e-10.
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

  static StateVector basis(int n_qubits, std::size_t index);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  // Kernels in this library write through this; callers are responsible for
  // keeping the state normalized.
  Eigen::VectorXcd& amplitudes() noexcept { return amplitudes_; }

  cplx operator[](std::size_t index) const { return amplitudes_[static_cast<Eigen::Index>(index)]; }

  double norm() const { return amplitudes_.norm(); }

  /// <this|other>
  cplx inner(const StateVector& other) const;

 private:
  int n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Mixed state of N qubits, same bit ordering as StateVector.
class DensityMatrix {
 public:
  /// |0...0><0...0|
  explicit DensityMatrix(int n_qubits);

  /// Checks Hermiticity and unit trace within 1e-10.
  DensityMatrix(int n_qubits, Eigen::MatrixXcd matrix);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Eigen::MatrixXcd& matrix() noexcept { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  double purity() const;

  /// Largest |rho - rho^dagger| element.
  double hermiticity_error() const;

  /// Smallest eigenvalue; O(d^3).
  double min_eigenvalue() const;

 private:
  int n_qubits_;
  Eigen::MatrixXcd matrix_;
};

/// Throws std::invalid_argument unless u is square, unitary within 1e-10 and
/// sized for `targets`, and the targets are distinct and inside [0, n_qubits).
void check_gate(const GateMatrix& u, std::span<const int> targets, int n_qubits);

/// |psi> <- U|psi>
void apply_unitary(StateVector& state, const GateMatrix& u, std::span<const int> targets);

/// rho <- U rho U^dagger
void apply_unitary(DensityMatrix& state, const GateMatrix& u, std::span<const int> targets);

/// Computes <psi_g|rho|psi_g>. Values within 1e-9 outside [0, 1] are clamped;
/// anything further out is returned unchanged so callers can see it.
double fidelity(const DensityMatrix& rho, const StateVector& psi_g);

/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

struct Eigensystem {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXcd vectors;  // column i pairs with values[i]
};

/// Hermitian eigendecomposition with eigenvalues sorted in descending order.
/// Throws std::invalid_argument if the input is not Hermitian within 1e-10.
Eigensystem eigendecompose(const Eigen::MatrixXcd& hermitian);
Eigensystem eigendecompose(const DensityMatrix& rho);

namespace kernels {

// Low-level strided kernels. `data` addresses 2^n_qubits amplitudes spaced
// `stride` elements apart. No validation is performed.

/// Applies a row-major 2x2 matrix to one target qubit.
void apply_1q(cplx* data, std::size_t stride, int n_qubits, int target, const cplx m[4]);

/// Applies a general 2^k x 2^k matrix (Eigen layout) to the given targets.
void apply_kq(cplx* data, std::size_t stride, int n_qubits, const GateMatrix& m,
              std::span<const int> targets);

/// M <- V M V^dagger for a square 2^n x 2^n matrix M (not necessarily Hermitian).
void conjugate(Eigen::MatrixXcd& m, int n_qubits, const GateMatrix& v, std::span<const int> targets);

/// M <- V M V^dagger with a single-qubit V given row-major.
void conjugate_1q(Eigen::MatrixXcd& m, int n_qubits, int target, const cplx v[4]);

}  // namespace kernels

}  // namespace qng
