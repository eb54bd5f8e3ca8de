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

#include "qng/random.hpp"
#include "qng/rydberg.hpp"

namespace qng {

namespace {

constexpr double kCacheLimitBytes = 2.0e9;

}  // namespace

AnalogBackend::AnalogBackend(const TfimSpec& spec, AtomRegister reg, CompileOptions opts, AnalogNoiseConfig noise,
                             int depth, int n_traj, std::uint64_t seed, std::shared_ptr<const GroundState> ground)
    : spec_(spec),
      hc_(build_hc(spec)),
      reg_(std::move(reg)),
      opts_(opts),
      noise_(noise),
      depth_(depth),
      ground_(std::move(ground)) {
  if (!ground_) throw std::invalid_argument("AnalogBackend: null ground state");
  if (reg_.size() != spec.n_qubits) throw std::invalid_argument("AnalogBackend: register and spec sizes differ");
  if (depth < 1) throw std::invalid_argument("AnalogBackend: depth must be at least 1");
  if (n_traj < 1) throw std::invalid_argument("AnalogBackend: n_traj must be at least 1");
  opts_.validate();
  noise_.validate();
  const int n_seg = 2 * depth;
  const double dim = std::ldexp(1.0, spec.n_qubits);
  if (static_cast<double>(n_traj) * n_seg * dim * dim * 8.0 > kCacheLimitBytes) {
    throw std::invalid_argument("AnalogBackend: spectral cache would exceed 2 GB; reduce n_traj, depth or N");
  }
  // Segment Hamiltonians do not depend on the angles, only durations do.
  const PulseSchedule shape = compile_schedule(QaoaParams::zeros(depth), reg_, opts_);
  for (int k = 0; k < n_traj; ++k) {
    realizations_.push_back(sample_noise(noise_, reg_, n_seg, derive_seed(seed, {static_cast<std::uint64_t>(k)})));
    std::vector<Spectral> per_segment;
    for (int s = 0; s < n_seg; ++s) {
      const Eigen::MatrixXd h =
          segment_hamiltonian(reg_, shape.segments[static_cast<std::size_t>(s)], realizations_.back(),
                              static_cast<std::size_t>(s));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
      if (solver.info() != Eigen::Success) throw std::runtime_error("AnalogBackend: eigensolver failed");
      per_segment.push_back({solver.eigenvectors(), solver.eigenvalues()});
    }
    cache_.push_back(std::move(per_segment));
  }
}

void AnalogBackend::propagate(Eigen::VectorXcd& psi, const Spectral& s, double t) const {
  if (t == 0.0) return;
  Eigen::VectorXd re = s.vectors.transpose() * psi.real();
  Eigen::VectorXd im = s.vectors.transpose() * psi.imag();
  for (Eigen::Index i = 0; i < re.size(); ++i) {
    const cplx c = std::polar(1.0, -s.values[i] * t) * cplx(re[i], im[i]);
    re[i] = c.real();
    im[i] = c.imag();
  }
  psi.real() = s.vectors * re;
  psi.imag() = s.vectors * im;
}

void AnalogBackend::apply_h(const Eigen::VectorXcd& psi, const Spectral& s, Eigen::VectorXcd& out) const {
  Eigen::VectorXd re = s.values.cwiseProduct(s.vectors.transpose() * psi.real());
  Eigen::VectorXd im = s.values.cwiseProduct(s.vectors.transpose() * psi.imag());
  out.resize(psi.size());
  out.real() = s.vectors * re;
  out.imag() = s.vectors * im;
}

std::vector<StateVector> AnalogBackend::trajectory_states(const QaoaParams& params) const {
  if (params.depth != depth_) throw std::invalid_argument("AnalogBackend: depth mismatch");
  const PulseSchedule sched = compile_schedule(params, reg_, opts_);
  std::vector<StateVector> out;
  for (std::size_t k = 0; k < realizations_.size(); ++k) {
    Eigen::VectorXcd psi = analog_initial_state(realizations_[k]).amplitudes();
    for (std::size_t s = 0; s < sched.segments.size(); ++s) propagate(psi, cache_[k][s], sched.segments[s].duration);
    psi.normalize();
    out.emplace_back(spec_.n_qubits, std::move(psi));
  }
  return out;
}

Evaluation AnalogBackend::evaluate(const QaoaParams& params, const EvalRequest& request) {
  if (params.depth != depth_) throw std::invalid_argument("AnalogBackend: depth mismatch");
  const PulseSchedule sched = compile_schedule(params, reg_, opts_);
  const std::size_t n_seg = sched.segments.size();
  const bool need_trace = request.metric != MetricKind::kNone;
  const bool analytic = request.gradient && request.gradient_mode == GradientMode::kAnalytic;
  const int n = spec_.n_qubits;

  Evaluation out;
  if (request.gradient) out.gradient = Eigen::VectorXd::Zero(params.size());
  std::vector<AnsatzTrace<StateVector>> traces;
  double e_sum = 0.0, f_sum = 0.0;
  Eigen::VectorXcd lam, hpsi;
  for (std::size_t k = 0; k < realizations_.size(); ++k) {
    Eigen::VectorXcd psi = analog_initial_state(realizations_[k]).amplitudes();
    AnsatzTrace<StateVector> trace;
    if (need_trace) trace.states.emplace_back(n, psi);
    for (std::size_t s = 0; s < n_seg; ++s) {
      propagate(psi, cache_[k][s], sched.segments[s].duration);
      if (need_trace) {
        psi.normalize();
        trace.states.emplace_back(n, psi);
        trace.generators.push_back(sched.segments[s].role);
      }
    }
    psi.normalize();
    const StateVector final_state(n, psi);
    e_sum += expectation(final_state, hc_);
    f_sum += ground_->fidelity(final_state);
    if (analytic) {
      // Segment s depends on its angle through the duration only: generator t'(theta) H_s.
      hc_.apply(psi, lam);
      for (std::size_t s = n_seg; s-- > 0;) {
        apply_h(psi, cache_[k][s], hpsi);
        out.gradient[static_cast<Eigen::Index>(s)] += 2.0 * sched.segments[s].duration_per_radian * lam.dot(hpsi).imag();
        propagate(psi, cache_[k][s], -sched.segments[s].duration);
        propagate(lam, cache_[k][s], -sched.segments[s].duration);
      }
    }
    if (need_trace) traces.push_back(std::move(trace));
  }
  const double inv = 1.0 / static_cast<double>(realizations_.size());
  out.energy = e_sum * inv;
  out.fidelity = f_sum * inv;
  if (analytic) out.gradient *= inv;
  if (request.gradient && !analytic) {
    const int depth = params.depth;
    out.gradient = gradient_fd(
        params.theta,
        [&](const Eigen::VectorXd& t) {
          EvalRequest plain;
          return evaluate(QaoaParams(depth, t), plain).energy;
        },
        request.fd_step);
  }
  if (request.metric == MetricKind::kFull) out.qfim = qfim_ensemble_full(traces, params);
  if (request.metric == MetricKind::kDiag) out.qfim = qfim_ensemble_diag(traces);
  return out;
}

}  // namespace qng
