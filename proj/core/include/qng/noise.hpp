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

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qng/optimizer.hpp"
#include "qng/state.hpp"

namespace qng {

/// Per-qubit device figures. Infinite T1 or T2 means no relaxation.
struct QubitCalibration {
  double t1_us = 300.0;
  double t2_us = 200.0;
  double readout_p10 = 0.01;  // P(read 1 | prepared 0)
  double readout_p01 = 0.01;  // P(read 0 | prepared 1)
};

enum class GateKind { kRx, kZZ };

struct GateCalibration {
  GateKind kind = GateKind::kRx;
  std::vector<int> qubits;  // empty for a file-level default
  double error = 0.0;       // reported average gate infidelity
  double duration_ns = 0.0;
};

/// Device calibration. Lookups fall back to the file-level defaults when no
/// per-qubit or per-gate entry exists.
struct CalibrationData {
  QubitCalibration default_qubit;
  GateCalibration default_rx{GateKind::kRx, {}, 2e-4, 35.0};
  GateCalibration default_zz{GateKind::kZZ, {}, 7e-3, 500.0};
  std::vector<std::optional<QubitCalibration>> qubits;  // index = qubit
  std::vector<GateCalibration> gates;                   // overrides
  std::string source;                                   // file path or label

  const QubitCalibration& qubit(int q) const;

  /// Override for (kind, qubits) if present, else the default. zz lookups
  /// ignore qubit order.
  const GateCalibration& gate(GateKind kind, std::span<const int> qubits) const;

  /// Throws std::invalid_argument on any physicality or range violation.
  void validate() const;

  /// No relaxation, no gate error, no readout error.
  static CalibrationData ideal();

  /// The bundled reference values.
  static CalibrationData reference();
};

/// Parses the JSON calibration schema (see data/reference_calibration.json).
CalibrationData parse_calibration(const std::string& json_text, const std::string& source = "<string>");
CalibrationData load_calibration(const std::string& path);
std::string calibration_to_json(const CalibrationData& cal);

/// Completely positive trace-preserving map in Kraus form.
class KrausChannel {
 public:
  KrausChannel(int n_qubits, std::vector<Eigen::MatrixXcd> operators);

  static KrausChannel identity(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  int dim() const noexcept { return 1 << n_qubits_; }
  const std::vector<Eigen::MatrixXcd>& operators() const noexcept { return ops_; }

  /// max |sum K^dag K - I|
  double completeness_error() const;

  /// Choi matrix sum_ij |i><j| (x) E(|i><j|), built from the superoperator.
  Eigen::MatrixXcd choi() const;

  /// S = sum K (x) conj(K) acting on the row-major vec index r * d + c.
  Eigen::MatrixXcd superoperator() const;

  /// this after `first`: K_i L_j for all pairs.
  KrausChannel compose_after(const KrausChannel& first) const;

  /// this on the low qubits, other on the high ones.
  KrausChannel tensor(const KrausChannel& other) const;

  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  int n_qubits_;
  std::vector<Eigen::MatrixXcd> ops_;
};

/// Amplitude damping with gamma = 1 - exp(-t/T1) plus the pure dephasing that
/// makes coherences decay by exactly exp(-t/T2). Requires T2 <= 2 T1.
KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double duration_us);

/// rho -> (1 - p) rho + p I/d on one or two qubits.
KrausChannel depolarizing_channel(double p, int n_qubits);

/// Choi matrix of a superoperator on dimension `dim`; PSD iff the map is CP.
Eigen::MatrixXcd choi_from_superop(const Eigen::MatrixXcd& superop, int dim);

/// F_pro = |Tr K|^2 summed / d^2, relative to the identity.
double process_fidelity(const KrausChannel& channel);
double process_fidelity(const Eigen::MatrixXcd& superop, int dim);

/// (d F_pro + 1) / (d + 1)
double average_gate_fidelity(const KrausChannel& channel);

struct DepolarizingFit {
  double p = 0.0;
  bool feasible = true;
  std::string warning;  // set when p had to be clamped
};

/// p such that relaxation after depolarizing(p) has average infidelity
/// gate_error. Process fidelity is linear in p, so this is a closed-form solve.
DepolarizingFit fit_depolarizing(double gate_error, const KrausChannel& relaxation);

/// Per-qubit row-stochastic confusion matrices, M(i, j) = P(read j | true i).
struct ReadoutError {
  std::vector<Eigen::Matrix2d> confusion;

  static ReadoutError from_calibration(const CalibrationData& cal, int n_qubits);
  static ReadoutError symmetric(int n_qubits, double p);
  static ReadoutError asymmetric(int n_qubits, double p10, double p01);
  void validate() const;
};

/// Tensor-product stochastic map on a basis-state distribution.
Eigen::VectorXd apply_readout(const Eigen::VectorXd& probabilities, const ReadoutError& readout);

/// Computational-basis populations of rho.
Eigen::VectorXd basis_distribution(const DensityMatrix& rho);

namespace kernels {

/// rho <- S(rho) for a k-qubit superoperator in row-major vec convention.
void apply_superop(Eigen::MatrixXcd& rho, int n_qubits, const Eigen::MatrixXcd& superop, std::span<const int> targets);

}  // namespace kernels

/// One gate of the decomposed circuit with its noise.
struct NoisyGate {
  GateKind kind;
  std::vector<int> targets;
  int slot;                         // index into theta
  Eigen::MatrixXcd noise_superop;   // depolarizing then relaxation; empty when identity
  DepolarizingFit fit;
};

/// Gate-level noise model for the depth-P QAOA circuit on N qubits.
class NoisyCircuit {
 public:
  NoisyCircuit(int n_qubits, const CalibrationData& cal);

  int n_qubits() const noexcept { return n_qubits_; }

  /// Gates of one layer (ZZ bonds then Rx), without the slot offset.
  const std::vector<NoisyGate>& layer() const noexcept { return layer_; }

  /// Fit warnings collected while building the model.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  struct Forward {
    DensityMatrix state{1};
    std::optional<AnsatzTrace<DensityMatrix>> trace;
    std::vector<Eigen::MatrixXcd> post_gate;  // state right after each ideal gate, before its noise
  };

  /// Runs the circuit from the ideal |+><+|.
  Forward run(const QaoaParams& params, bool keep_trace, bool keep_gates) const;

  /// dE/dtheta by a backward Heisenberg sweep over the stored gate states.
  Eigen::VectorXd gradient(const QaoaParams& params, const Forward& fwd, const Eigen::MatrixXcd& observable) const;

 private:
  int n_qubits_;
  std::vector<NoisyGate> layer_;
  std::vector<std::string> warnings_;
};

/// Final density matrix of the noisy gate-decomposed circuit.
DensityMatrix noisy_qaoa_evolve(const QaoaParams& params, int n_qubits, const CalibrationData& cal);

class DigitalNoiseBackend final : public Backend {
 public:
  DigitalNoiseBackend(const TfimSpec& spec, const CalibrationData& cal, std::shared_ptr<const GroundState> ground);

  std::string_view name() const override { return "digital-noise"; }
  int n_qubits() const override { return spec_.n_qubits; }
  const GroundState& ground() const override { return *ground_; }
  Evaluation evaluate(const QaoaParams& params, const EvalRequest& request) override;

  const NoisyCircuit& circuit() const noexcept { return circuit_; }

 private:
  TfimSpec spec_;
  HamiltonianOperator hc_;
  Eigen::MatrixXcd hc_dense_;
  NoisyCircuit circuit_;
  std::shared_ptr<const GroundState> ground_;
};

}  // namespace qng
