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

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qng/metric.hpp"
#include "qng/qaoa.hpp"
#include "qng/tfim.hpp"

namespace qng {

enum class Method { kVanilla, kQngDiag, kQngFull };
enum class GradientMode { kAnalytic, kFiniteDifference };
enum class MetricKind { kNone, kDiag, kFull };
enum class StopReason { kConverged, kMaxIters };

std::string_view to_string(Method m);
std::string_view to_string(GradientMode m);
std::string_view to_string(StopReason r);
Method parse_method(std::string_view s);
GradientMode parse_gradient_mode(std::string_view s);
StopReason parse_stop_reason(std::string_view s);
MetricKind metric_for(Method m);

struct OptimizerConfig {
  Method method = Method::kQngFull;
  double learning_rate = 0.01;
  int max_iters = 5000;
  double eps_stop = 1e-12;
  double pinv_rcond = 1e-8;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  double fd_step = 1e-5;

  void validate() const;
};

/// What one backend call must produce besides the energy.
struct EvalRequest {
  bool gradient = false;
  MetricKind metric = MetricKind::kNone;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  double fd_step = 1e-5;
};

struct Evaluation {
  double energy = 0.0;
  double fidelity = 0.0;
  Eigen::VectorXd gradient;  // empty unless requested
  MetricMatrix qfim;         // F, empty unless requested
};

/// Energy source for the optimizer. Implementations must be deterministic for
/// a fixed construction seed so that finite differences see common noise.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string_view name() const = 0;
  virtual int n_qubits() const = 0;

  /// Exact ground state of the target Hamiltonian.
  virtual const GroundState& ground() const = 0;

  virtual Evaluation evaluate(const QaoaParams& params, const EvalRequest& request) = 0;

  /// Analytic gradient support; backends without it fall back to finite differences.
  virtual bool has_analytic_gradient() const { return true; }
};

/// Pure-state statevector backend.
class NoiselessBackend final : public Backend {
 public:
  explicit NoiselessBackend(const TfimSpec& spec);
  NoiselessBackend(const TfimSpec& spec, std::shared_ptr<const GroundState> ground);

  std::string_view name() const override { return "noiseless"; }
  int n_qubits() const override { return spec_.n_qubits; }
  const GroundState& ground() const override { return *ground_; }
  Evaluation evaluate(const QaoaParams& params, const EvalRequest& request) override;

 private:
  TfimSpec spec_;
  HamiltonianOperator hc_;
  std::shared_ptr<const GroundState> ground_;
};

/// Exact dE/dtheta for the noiseless ansatz via one forward and one backward sweep.
Eigen::VectorXd gradient_analytic(const QaoaParams& params, const TfimSpec& spec);
Eigen::VectorXd gradient_analytic(const QaoaParams& params, const HamiltonianOperator& hc);

/// Central differences (f(theta + s e_k) - f(theta - s e_k)) / 2s.
Eigen::VectorXd gradient_fd(const Eigen::VectorXd& theta, const std::function<double(const Eigen::VectorXd&)>& f,
                            double step);

Eigen::VectorXd vanilla_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double eta);

/// theta - eta g^+ grad with g the Fubini-Study metric.
Eigen::VectorXd qng_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad, const MetricMatrix& g, double eta,
                         double rcond, PseudoInverse* diagnostics = nullptr);

struct RunResult {
  Eigen::VectorXd initial_theta;
  Eigen::VectorXd final_theta;
  Eigen::VectorXd best_theta;
  std::vector<double> energy_trajectory;
  int steps_taken = 0;
  StopReason stop_reason = StopReason::kMaxIters;
  double best_energy = 0.0;
  double best_accuracy = 0.0;  // delta E_opt
  double best_fidelity = 0.0;  // fidelity at the best-energy point
  double final_energy = 0.0;
  /// Iterations whose mixed metric had eigenvalues below -1e-6 max|lambda|.
  int indefinite_metric_steps = 0;

  bool success(double threshold) const { return best_accuracy < threshold; }
};

/// Runs the configured update rule from `initial_theta` until
/// |E_{t+1} - E_t| < eps_stop or max_iters steps.
RunResult optimize(const Eigen::VectorXd& initial_theta, const OptimizerConfig& config, Backend& backend);

}  // namespace qng
