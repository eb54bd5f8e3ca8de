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

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qng/state.hpp"

namespace qng {

/// One weighted Pauli string. Character q of `paulis` acts on qubit q, so
/// "ZZI" is Z on qubits 0 and 1.
struct PauliTerm {
  double coefficient = 0.0;
  std::string paulis;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Hermitian operator written as a real-weighted sum of Pauli strings.
class PauliSum {
 public:
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

  /// out = H * in. `out` is resized.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  /// out = H * M (left multiplication of a square matrix).
  void apply_left(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) const;

  /// Tr(H M) for an arbitrary square matrix M.
  cplx trace_with(const Eigen::MatrixXcd& m) const;

  /// Sum of all Z/I-only terms evaluated on each basis state.
  const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }

  Eigen::MatrixXcd to_dense() const;

  /// Real dense matrix; throws if any term carries an odd number of Y factors.
  Eigen::MatrixXd to_dense_real() const;

  PauliSum operator*(double scale) const;
  PauliSum operator+(const PauliSum& other) const;

 private:
  struct Compiled {
    std::uint64_t x_mask;
    std::uint64_t z_mask;
    cplx weight;  // coefficient * i^(number of Y)
  };

  int n_qubits_;
  std::vector<PauliTerm> terms_;
  std::vector<Compiled> off_diagonal_;
  Eigen::VectorXd diagonal_;
};

/// <psi|H|psi>. Throws on dimension mismatch or if the imaginary residue
/// exceeds 1e-10.
double expectation(const StateVector& psi, const PauliSum& h);

/// Tr(rho H), same checks.
double expectation(const DensityMatrix& rho, const PauliSum& h);

}  // namespace qng
