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

#include <vector>

#include <Eigen/Dense>

#include "qng/pauli.hpp"
#include "qng/state.hpp"

namespace qng {

/// 1D transverse-field Ising chain with periodic boundary:
/// H_c = -J sum_i Z_i Z_{i+1} - h sum_i X_i.
struct TfimSpec {
  int n_qubits = 4;
  double coupling = 1.0;  // J
  double field = 0.5;     // h

  void validate() const;
};

/// The operator types share one representation.
using HamiltonianOperator = PauliSum;

/// Cost operator. For N = 2 the periodic sum visits the single bond twice and
/// both copies are kept.
HamiltonianOperator build_hc(const TfimSpec& spec);

/// sum_i Z_i Z_{i+1} with periodic wraparound.
HamiltonianOperator build_hzz(int n_qubits);

/// sum_i X_i
HamiltonianOperator build_hmix(int n_qubits);

/// Diagonal of H_zz: z(x) = N - 2 popcount(x ^ rot(x)).
Eigen::VectorXd hzz_diagonal(int n_qubits);

struct ExactEnergyTerms {
  int r = 0;
  std::vector<double> alpha;
  double shift = 0.0;  // E_1
};

ExactEnergyTerms exact_energy_terms(const TfimSpec& spec);

/// Closed-form ground energy, J = 1 and N >= 3 only:
/// E_0 = -E_1 - 2 sum_q sqrt(1 + h^2 + 2h cos(alpha_q)).
double exact_ground_energy(const TfimSpec& spec);

struct GroundState {
  double energy = 0.0;
  StateVector state{1};
  int degeneracy = 1;
  /// Orthonormal basis of the ground subspace, one column per state.
  Eigen::MatrixXcd subspace;
  double residual = 0.0;  // ||H psi - E psi||

  /// Overlap of rho with the ground subspace projector.
  double fidelity(const DensityMatrix& rho) const;
  double fidelity(const StateVector& psi) const;
};

/// Ground energy and ground subspace of H_c. Dense below 11 qubits, Lanczos
/// with full reorthogonalization and deflation at 11 and 12.
GroundState exact_diagonalize(const TfimSpec& spec);

/// Same, for any real Pauli operator (dense path only for N <= 10).
GroundState exact_diagonalize(const HamiltonianOperator& h);

inline constexpr double kDegeneracyTol = 1e-9;

}  // namespace qng
