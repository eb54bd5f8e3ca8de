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

#include <cmath>
#include <stdexcept>

#include "qng/noise.hpp"

namespace qng {

namespace {

bool is_identity(const Eigen::MatrixXcd& s) {
  return (s - Eigen::MatrixXcd::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() < 1e-15;
}

KrausChannel relaxation_on(const CalibrationData& cal, int q, double duration_us) {
  const auto& qc = cal.qubit(q);
  return thermal_relaxation_channel(qc.t1_us, qc.t2_us, duration_us);
}

// Tr(O [G, sigma]) for the Pauli generator of a circuit gate.
cplx commutator_trace(const Eigen::MatrixXcd& o, const Eigen::MatrixXcd& sigma, const NoisyGate& g) {
  const Eigen::Index d = sigma.rows();
  cplx acc = 0.0;
  if (g.kind == GateKind::kZZ) {
    const int a = g.targets[0], b = g.targets[1];
    auto sign = [&](Eigen::Index x) { return (((x >> a) ^ (x >> b)) & 1) ? -1.0 : 1.0; };
    for (Eigen::Index y = 0; y < d; ++y) {
      const double sy = sign(y);
      for (Eigen::Index x = 0; x < d; ++x) {
        const double diff = sign(x) - sy;
        if (diff != 0.0) acc += o(y, x) * diff * sigma(x, y);
      }
    }
    return acc;
  }
  const Eigen::Index m = Eigen::Index{1} << g.targets[0];
  for (Eigen::Index y = 0; y < d; ++y)
    for (Eigen::Index x = 0; x < d; ++x) acc += o(y, x) * (sigma(x ^ m, y) - sigma(x, y ^ m));
  return acc;
}

GateMatrix gate_unitary(const NoisyGate& g, const QaoaParams& params, int layer) {
  const double angle = params.theta[2 * layer + g.slot];
  return g.kind == GateKind::kZZ ? zz_gate(2.0 * angle) : rx_gate(2.0 * angle);
}

}  // namespace

NoisyCircuit::NoisyCircuit(int n_qubits, const CalibrationData& cal) : n_qubits_(n_qubits) {
  if (n_qubits < 2 || n_qubits > kMaxDensityQubits) throw std::invalid_argument("NoisyCircuit: N must be in [2, 10]");
  cal.validate();
  auto add = [&](GateKind kind, std::vector<int> targets) {
    const GateCalibration& gc = cal.gate(kind, targets);
    const double t_us = gc.duration_ns * 1e-3;
    KrausChannel relax = relaxation_on(cal, targets[0], t_us);
    for (std::size_t i = 1; i < targets.size(); ++i) relax = relax.tensor(relaxation_on(cal, targets[i], t_us));
    NoisyGate g{kind, targets, kind == GateKind::kZZ ? 0 : 1, {}, fit_depolarizing(gc.error, relax)};
    if (!g.fit.warning.empty()) {
      warnings_.push_back(std::string(kind == GateKind::kZZ ? "zz" : "rx") + " on qubit(s) " +
                          std::to_string(targets[0]) + (targets.size() > 1 ? "," + std::to_string(targets[1]) : "") +
                          ": " + g.fit.warning);
    }
    const Eigen::MatrixXcd s =
        relax.superoperator() * depolarizing_channel(g.fit.p, static_cast<int>(targets.size())).superoperator();
    if (!is_identity(s)) g.noise_superop = s;
    layer_.push_back(std::move(g));
  };
  // Literal periodic sum: N = 2 gets the (0, 1) bond twice.
  for (int i = 0; i < n_qubits; ++i) add(GateKind::kZZ, {i, (i + 1) % n_qubits});
  for (int q = 0; q < n_qubits; ++q) add(GateKind::kRx, {q});
}

NoisyCircuit::Forward NoisyCircuit::run(const QaoaParams& params, bool keep_trace, bool keep_gates) const {
  params.validate();
  Forward f;
  Eigen::MatrixXcd rho = prepare_plus_density(n_qubits_).matrix();
  if (keep_trace) {
    f.trace.emplace();
    f.trace->states.push_back(DensityMatrix(n_qubits_, rho));
  }
  if (keep_gates) f.post_gate.reserve(layer_.size() * static_cast<std::size_t>(params.depth));
  for (int l = 0; l < params.depth; ++l) {
    for (int slot = 0; slot < 2; ++slot) {
      for (const auto& g : layer_) {
        if (g.slot != slot) continue;
        kernels::conjugate(rho, n_qubits_, gate_unitary(g, params, l), g.targets);
        if (keep_gates) f.post_gate.push_back(rho);
        if (g.noise_superop.size() > 0) kernels::apply_superop(rho, n_qubits_, g.noise_superop, g.targets);
      }
      if (keep_trace) {
        f.trace->states.push_back(DensityMatrix(n_qubits_, rho));
        f.trace->generators.push_back(slot == 0 ? Generator::kZZ : Generator::kMix);
      }
    }
  }
  f.state = DensityMatrix(n_qubits_, std::move(rho));
  return f;
}

Eigen::VectorXd NoisyCircuit::gradient(const QaoaParams& params, const Forward& fwd,
                                       const Eigen::MatrixXcd& observable) const {
  const std::size_t per_layer = layer_.size();
  if (fwd.post_gate.size() != per_layer * static_cast<std::size_t>(params.depth)) {
    throw std::invalid_argument("NoisyCircuit::gradient: forward pass did not keep gate states");
  }
  // Gate order inside a layer as run() applies it.
  std::vector<const NoisyGate*> order;
  for (int slot = 0; slot < 2; ++slot)
    for (const auto& g : layer_)
      if (g.slot == slot) order.push_back(&g);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
  Eigen::MatrixXcd o = observable;
  std::size_t j = fwd.post_gate.size();
  for (int l = params.depth - 1; l >= 0; --l) {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NoisyGate& g = **it;
      --j;
      if (g.noise_superop.size() > 0) {
        const Eigen::MatrixXcd adj = g.noise_superop.adjoint();
        kernels::apply_superop(o, n_qubits_, adj, g.targets);
      }
      // d/dtheta Tr(O U sigma U^dag) = Tr(O (-i)[G, U sigma U^dag])
      grad[2 * l + g.slot] += (cplx(0.0, -1.0) * commutator_trace(o, fwd.post_gate[j], g)).real();
      const GateMatrix u = gate_unitary(g, params, l);
      kernels::conjugate(o, n_qubits_, u.adjoint(), g.targets);
    }
  }
  return grad;
}

DensityMatrix noisy_qaoa_evolve(const QaoaParams& params, int n_qubits, const CalibrationData& cal) {
  return NoisyCircuit(n_qubits, cal).run(params, false, false).state;
}

DigitalNoiseBackend::DigitalNoiseBackend(const TfimSpec& spec, const CalibrationData& cal,
                                         std::shared_ptr<const GroundState> ground)
    : spec_(spec), hc_(build_hc(spec)), hc_dense_(hc_.to_dense()), circuit_(spec.n_qubits, cal),
      ground_(std::move(ground)) {
  if (!ground_) throw std::invalid_argument("DigitalNoiseBackend: null ground state");
}

Evaluation DigitalNoiseBackend::evaluate(const QaoaParams& params, const EvalRequest& request) {
  const bool need_trace = request.metric != MetricKind::kNone;
  const bool analytic = request.gradient && request.gradient_mode == GradientMode::kAnalytic;
  const auto fwd = circuit_.run(params, need_trace, analytic);
  Evaluation out;
  out.energy = expectation(fwd.state, hc_);
  out.fidelity = ground_->fidelity(fwd.state);
  if (request.gradient) {
    if (analytic) {
      out.gradient = circuit_.gradient(params, fwd, hc_dense_);
    } else {
      const int depth = params.depth;
      out.gradient = gradient_fd(
          params.theta,
          [&](const Eigen::VectorXd& t) {
            return expectation(circuit_.run(QaoaParams(depth, t), false, false).state, hc_);
          },
          request.fd_step);
    }
  }
  if (request.metric == MetricKind::kFull) out.qfim = qfim_mixed_full(*fwd.trace, params);
  if (request.metric == MetricKind::kDiag) out.qfim = qfim_mixed_diag(*fwd.trace);
  return out;
}

}  // namespace qng
