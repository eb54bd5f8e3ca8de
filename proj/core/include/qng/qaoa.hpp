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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qng/state.hpp"
#include "qng/tfim.hpp"

namespace qng {

/// Which operator generates a parameter: H_zz for gamma, H_m for beta.
enum class Generator { kZZ, kMix };

/// theta = (gamma_1, beta_1, ..., gamma_P, beta_P).
struct QaoaParams {
  int depth = 1;
  Eigen::VectorXd theta;

  QaoaParams() = default;
  QaoaParams(int depth, Eigen::VectorXd theta);
  static QaoaParams zeros(int depth);

  int size() const noexcept { return static_cast<int>(theta.size()); }
  double gamma(int layer) const { return theta[2 * layer]; }
  double beta(int layer) const { return theta[2 * layer + 1]; }

  /// Slot k (0-based): even slots are H_zz, odd slots are H_m.
  static Generator generator(int k) noexcept { return (k % 2 == 0) ? Generator::kZZ : Generator::kMix; }

  void validate() const;
};

/// states[a] is the state after the first a evolutions, so states[0] is the
/// input and states[2P] the output.
template <class State>
struct AnsatzTrace {
  std::vector<State> states;
  std::vector<Generator> generators;
  std::size_t size() const noexcept { return generators.size(); }
};

template <class State>
struct Evolution {
  State state;
  std::optional<AnsatzTrace<State>> trace;
};

StateVector prepare_plus(int n_qubits);
DensityMatrix prepare_plus_density(int n_qubits);

/// Cached H_zz diagonal for N qubits (periodic, literal sum).
const Eigen::VectorXd& zz_diagonal(int n_qubits);

void apply_uzz(StateVector& state, double gamma);
void apply_uzz(DensityMatrix& state, double gamma);
void apply_umix(StateVector& state, double beta);
void apply_umix(DensityMatrix& state, double beta);

/// e^{-i angle H_g} on a state.
void apply_evolution(StateVector& state, Generator g, double angle);
void apply_evolution(DensityMatrix& state, Generator g, double angle);

/// Same on a raw (not necessarily normalized) vector of 2^n_qubits entries.
void apply_evolution(Eigen::VectorXcd& v, int n_qubits, Generator g, double angle);

/// M <- e^{-i angle H_g} M e^{i angle H_g} for any square M.
void conjugate_evolution(Eigen::MatrixXcd& m, int n_qubits, Generator g, double angle);

/// out = H_g v
void apply_generator(const Eigen::VectorXcd& v, int n_qubits, Generator g, Eigen::VectorXcd& out);

/// out = H_g M
void apply_generator_left(const Eigen::MatrixXcd& m, int n_qubits, Generator g, Eigen::MatrixXcd& out);

Evolution<StateVector> evolve(const QaoaParams& params, const StateVector& initial, bool keep_trace = false);
Evolution<DensityMatrix> evolve(const QaoaParams& params, const DensityMatrix& initial, bool keep_trace = false);

/// <psi(theta)|H_c|psi(theta)> starting from |+>^N.
double energy(const QaoaParams& params, const TfimSpec& spec);

/// (e_c - e_0) / |e_0|
double accuracy(double e_c, double e_0);

/// exp(-i (angle/2) Z (x) Z); bit 0 of the index is the first target.
GateMatrix zz_gate(double angle);

/// exp(-i (angle/2) X)
GateMatrix rx_gate(double angle);

}  // namespace qng
