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

#include "qng/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qng {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kVanilla: return "vanilla";
    case Method::kQngDiag: return "qng-diag";
    case Method::kQngFull: return "qng-full";
  }
  return "unknown";
}

std::string_view to_string(GradientMode m) {
  return m == GradientMode::kAnalytic ? "analytic" : "finite-difference";
}

std::string_view to_string(StopReason r) { return r == StopReason::kConverged ? "converged" : "max-iters"; }

Method parse_method(std::string_view s) {
  if (s == "vanilla") return Method::kVanilla;
  if (s == "qng-diag") return Method::kQngDiag;
  if (s == "qng-full") return Method::kQngFull;
  throw std::invalid_argument("unknown optimizer method '" + std::string(s) + "'");
}

GradientMode parse_gradient_mode(std::string_view s) {
  if (s == "analytic") return GradientMode::kAnalytic;
  if (s == "finite-difference" || s == "fd") return GradientMode::kFiniteDifference;
  throw std::invalid_argument("unknown gradient mode '" + std::string(s) + "'");
}

StopReason parse_stop_reason(std::string_view s) {
  if (s == "converged") return StopReason::kConverged;
  if (s == "max-iters") return StopReason::kMaxIters;
  throw std::invalid_argument("unknown stop reason '" + std::string(s) + "'");
}

MetricKind metric_for(Method m) {
  switch (m) {
    case Method::kVanilla: return MetricKind::kNone;
    case Method::kQngDiag: return MetricKind::kDiag;
    case Method::kQngFull: return MetricKind::kFull;
  }
  return MetricKind::kNone;
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("optimizer: learning_rate must be positive");
  if (max_iters < 1) throw std::invalid_argument("optimizer: max_iters must be at least 1");
  if (!(eps_stop > 0.0)) throw std::invalid_argument("optimizer: eps_stop must be positive");
  if (!(pinv_rcond > 0.0)) throw std::invalid_argument("optimizer: pinv_rcond must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("optimizer: fd_step must be positive");
}

NoiselessBackend::NoiselessBackend(const TfimSpec& spec)
    : NoiselessBackend(spec, std::make_shared<const GroundState>(exact_diagonalize(spec))) {}

NoiselessBackend::NoiselessBackend(const TfimSpec& spec, std::shared_ptr<const GroundState> ground)
    : spec_(spec), hc_(build_hc(spec)), ground_(std::move(ground)) {
  if (!ground_) throw std::invalid_argument("NoiselessBackend: null ground state");
}

Evaluation NoiselessBackend::evaluate(const QaoaParams& params, const EvalRequest& request) {
  const bool need_trace = request.metric == MetricKind::kFull || request.metric == MetricKind::kDiag;
  auto ev = evolve(params, prepare_plus(spec_.n_qubits), need_trace);
  Evaluation out;
  out.energy = expectation(ev.state, hc_);
  out.fidelity = ground_->fidelity(ev.state);
  if (request.gradient) {
    if (request.gradient_mode == GradientMode::kAnalytic) {
      out.gradient = gradient_analytic(params, hc_);
    } else {
      const int depth = params.depth;
      out.gradient = gradient_fd(
          params.theta,
          [&](const Eigen::VectorXd& t) {
            return expectation(evolve(QaoaParams(depth, t), prepare_plus(spec_.n_qubits)).state, hc_);
          },
          request.fd_step);
    }
  }
  if (request.metric == MetricKind::kFull) out.qfim = qfim_pure_full(*ev.trace, params);
  if (request.metric == MetricKind::kDiag) out.qfim = qfim_pure_diag(*ev.trace);
  return out;
}

Eigen::VectorXd gradient_analytic(const QaoaParams& params, const HamiltonianOperator& hc) {
  params.validate();
  const int n = hc.n_qubits();
  Eigen::VectorXcd psi = evolve(params, prepare_plus(n)).state.amplitudes();
  Eigen::VectorXcd lam, hpsi;
  hc.apply(psi, lam);
  Eigen::VectorXd grad(params.size());
  for (int k = params.size() - 1; k >= 0; --k) {
    const Generator g = QaoaParams::generator(k);
    apply_generator(psi, n, g, hpsi);
    grad[k] = 2.0 * lam.dot(hpsi).imag();
    apply_evolution(psi, n, g, -params.theta[k]);
    apply_evolution(lam, n, g, -params.theta[k]);
  }
  return grad;
}

Eigen::VectorXd gradient_analytic(const QaoaParams& params, const TfimSpec& spec) {
  return gradient_analytic(params, build_hc(spec));
}

Eigen::VectorXd gradient_fd(const Eigen::VectorXd& theta, const std::function<double(const Eigen::VectorXd&)>& f,
                            double step) {
  if (!(step > 0.0)) throw std::invalid_argument("gradient_fd: step must be positive");
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd t = theta;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    t[k] = theta[k] + step;
    const double up = f(t);
    t[k] = theta[k] - step;
    const double down = f(t);
    t[k] = theta[k];
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

Eigen::VectorXd vanilla_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double eta) {
  if (theta.size() != grad.size()) throw std::invalid_argument("vanilla_step: shape mismatch");
  return theta - eta * grad;
}

Eigen::VectorXd qng_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad, const MetricMatrix& g, double eta,
                         double rcond, PseudoInverse* diagnostics) {
  if (theta.size() != grad.size() || g.rows() != theta.size() || g.cols() != theta.size()) {
    throw std::invalid_argument("qng_step: shape mismatch");
  }
  PseudoInverse pinv = pseudo_inverse(g, rcond);
  Eigen::VectorXd next = theta - eta * (pinv.inverse * grad);
  if (diagnostics != nullptr) *diagnostics = std::move(pinv);
  return next;
}

RunResult optimize(const Eigen::VectorXd& initial_theta, const OptimizerConfig& config, Backend& backend) {
  config.validate();
  if (initial_theta.size() < 2 || initial_theta.size() % 2 != 0) {
    throw std::invalid_argument("optimize: theta length must be a positive even number");
  }
  const int depth = static_cast<int>(initial_theta.size() / 2);
  const double e0 = backend.ground().energy;

  EvalRequest request;
  request.gradient = true;
  request.metric = metric_for(config.method);
  request.gradient_mode = backend.has_analytic_gradient() ? config.gradient_mode : GradientMode::kFiniteDifference;
  request.fd_step = config.fd_step;

  RunResult r;
  r.initial_theta = initial_theta;
  Eigen::VectorXd theta = initial_theta;
  Evaluation ev = backend.evaluate(QaoaParams(depth, theta), request);
  r.energy_trajectory.push_back(ev.energy);
  r.best_energy = ev.energy;
  r.best_fidelity = ev.fidelity;
  r.best_theta = theta;

  for (int step = 1; step <= config.max_iters; ++step) {
    if (config.method == Method::kVanilla) {
      theta = vanilla_step(theta, ev.gradient, config.learning_rate);
    } else {
      PseudoInverse diag;
      theta = qng_step(theta, ev.gradient, ev.qfim / 4.0, config.learning_rate, config.pinv_rcond, &diag);
      if (diag.negative_modes > 0) ++r.indefinite_metric_steps;
    }
    if (!theta.allFinite()) throw std::runtime_error("optimize: parameters became non-finite");
    const double previous = ev.energy;
    ev = backend.evaluate(QaoaParams(depth, theta), request);
    r.energy_trajectory.push_back(ev.energy);
    r.steps_taken = step;
    if (ev.energy < r.best_energy) {
      r.best_energy = ev.energy;
      r.best_fidelity = ev.fidelity;
      r.best_theta = theta;
    }
    if (std::abs(ev.energy - previous) < config.eps_stop) {
      r.stop_reason = StopReason::kConverged;
      break;
    }
  }
  r.final_theta = theta;
  r.final_energy = ev.energy;
  r.best_accuracy = accuracy(r.best_energy, e0);
  return r;
}

}  // namespace qng
