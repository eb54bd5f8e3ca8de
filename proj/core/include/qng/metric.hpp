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

#include <span>

#include <Eigen/Dense>

#include "qng/qaoa.hpp"

namespace qng {

/// Quantum Fisher information matrix F over theta. The Fubini-Study metric is
/// g = F / 4.
using MetricMatrix = Eigen::MatrixXd;

/// Full F from a pure trace. Row a uses |psi_{a-1}> = trace.states[a-1].
MetricMatrix qfim_pure_full(const AnsatzTrace<StateVector>& trace, const QaoaParams& params);

/// Diagonal only: F_aa = 4 Var_{psi_{a-1}}(H_a).
MetricMatrix qfim_pure_diag(const AnsatzTrace<StateVector>& trace);

/// Mixed-state approximation
///   F_ab = 4 Re[Tr(W H_a W^dag H_b rho_{b-1}) - Tr(rho_{a-1} H_a) Tr(rho_{b-1} H_b)]
/// with W = U_{b-1} ... U_a the ideal propagators between slots a and b.
/// Reduces to the pure formula when every rho is pure. May be indefinite.
MetricMatrix qfim_mixed_full(const AnsatzTrace<DensityMatrix>& trace, const QaoaParams& params);

/// F_aa = 4 [Tr(rho_{a-1} H_a^2) - Tr(rho_{a-1} H_a)^2]
MetricMatrix qfim_mixed_diag(const AnsatzTrace<DensityMatrix>& trace);

/// Mixed formula for rho = mean of pure trajectories, evaluated per trajectory
/// (the first term is linear in rho) without forming any density matrix.
MetricMatrix qfim_ensemble_full(std::span<const AnsatzTrace<StateVector>> traces, const QaoaParams& params);
MetricMatrix qfim_ensemble_diag(std::span<const AnsatzTrace<StateVector>> traces);

struct PseudoInverse {
  Eigen::MatrixXd inverse;
  int rank = 0;
  /// Eigenvalues below -1e-6 max|lambda|; only expected from mixed metrics.
  int negative_modes = 0;
  double min_eigenvalue = 0.0;
};

/// Symmetrizes, then inverts eigenvalues with |lambda| > rcond max|lambda|,
/// keeping their sign, and zeroes the rest.
PseudoInverse pseudo_inverse(const Eigen::MatrixXd& m, double rcond = 1e-8);

}  // namespace qng
