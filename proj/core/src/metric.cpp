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

#include "qng/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace qng {

namespace {

template <class State>
void check_trace(const AnsatzTrace<State>& trace, const QaoaParams* params) {
  if (trace.generators.empty()) throw std::invalid_argument("qfim: empty trace");
  if (trace.states.size() != trace.generators.size() + 1) {
    throw std::invalid_argument("qfim: trace must hold 2P + 1 states");
  }
  if (params != nullptr && static_cast<std::size_t>(params->size()) != trace.generators.size()) {
    throw std::invalid_argument("qfim: trace and parameter lengths differ");
  }
}

MetricMatrix symmetrize(const Eigen::MatrixXd& upper) {
  MetricMatrix f = upper;
  for (Eigen::Index a = 0; a < f.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < f.cols(); ++b) f(b, a) = f(a, b);
  }
  return f;
}

// Upper-triangle matrix A(a, b) = <psi_{a-1}|H_a W^dag H_b|psi_{b-1}> plus the
// expectations e_a, for one pure trace.
void accumulate_pure(const AnsatzTrace<StateVector>& trace, const QaoaParams& params, Eigen::MatrixXcd& acc,
                     Eigen::VectorXd& e) {
  const int n = trace.states.front().n_qubits();
  const auto k = static_cast<Eigen::Index>(trace.size());
  std::vector<Eigen::VectorXcd> w(static_cast<std::size_t>(k));
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto& psi = trace.states[static_cast<std::size_t>(a)].amplitudes();
    apply_generator(psi, n, trace.generators[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(a)]);
    e[a] += psi.dot(w[static_cast<std::size_t>(a)]).real();
  }
  for (Eigen::Index b = 0; b < k; ++b) {
    Eigen::VectorXcd v = w[static_cast<std::size_t>(b)];
    acc(b, b) += w[static_cast<std::size_t>(b)].squaredNorm();
    for (Eigen::Index a = b - 1; a >= 0; --a) {
      apply_evolution(v, n, trace.generators[static_cast<std::size_t>(a)], -params.theta[a]);
      acc(a, b) += w[static_cast<std::size_t>(a)].dot(v);
    }
  }
}

MetricMatrix finish(const Eigen::MatrixXcd& acc, const Eigen::VectorXd& e, bool full) {
  const Eigen::Index k = e.size();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index b = 0; b < k; ++b) {
    for (Eigen::Index a = full ? 0 : b; a <= b; ++a) f(a, b) = 4.0 * (acc(a, b).real() - e[a] * e[b]);
  }
  return symmetrize(f);
}

}  // namespace

MetricMatrix qfim_pure_full(const AnsatzTrace<StateVector>& trace, const QaoaParams& params) {
  check_trace(trace, &params);
  const auto k = static_cast<Eigen::Index>(trace.size());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(k, k);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
  accumulate_pure(trace, params, acc, e);
  return finish(acc, e, true);
}

MetricMatrix qfim_pure_diag(const AnsatzTrace<StateVector>& trace) {
  check_trace(trace, nullptr);
  const int n = trace.states.front().n_qubits();
  const auto k = static_cast<Eigen::Index>(trace.size());
  MetricMatrix f = MetricMatrix::Zero(k, k);
  Eigen::VectorXcd w;
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto& psi = trace.states[static_cast<std::size_t>(a)].amplitudes();
    apply_generator(psi, n, trace.generators[static_cast<std::size_t>(a)], w);
    const double mean = psi.dot(w).real();
    f(a, a) = 4.0 * (w.squaredNorm() - mean * mean);
  }
  return f;
}

MetricMatrix qfim_mixed_full(const AnsatzTrace<DensityMatrix>& trace, const QaoaParams& params) {
  check_trace(trace, &params);
  const int n = trace.states.front().n_qubits();
  const auto k = static_cast<Eigen::Index>(trace.size());
  Eigen::VectorXd e(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    Eigen::MatrixXcd hr;
    apply_generator_left(trace.states[static_cast<std::size_t>(a)].matrix(), n,
                         trace.generators[static_cast<std::size_t>(a)], hr);
    e[a] = hr.trace().real();
  }
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXcd x, hx;
  for (Eigen::Index b = 0; b < k; ++b) {
    // X = H_b rho_{b-1}, then X <- U_a^dag X U_a walking a down from b-1
    apply_generator_left(trace.states[static_cast<std::size_t>(b)].matrix(), n,
                         trace.generators[static_cast<std::size_t>(b)], x);
    for (Eigen::Index a = b; a >= 0; --a) {
      if (a < b) conjugate_evolution(x, n, trace.generators[static_cast<std::size_t>(a)], -params.theta[a]);
      apply_generator_left(x, n, trace.generators[static_cast<std::size_t>(a)], hx);
      f(a, b) = 4.0 * (hx.trace().real() - e[a] * e[b]);
    }
  }
  return symmetrize(f);
}

MetricMatrix qfim_mixed_diag(const AnsatzTrace<DensityMatrix>& trace) {
  check_trace(trace, nullptr);
  const int n = trace.states.front().n_qubits();
  const auto k = static_cast<Eigen::Index>(trace.size());
  MetricMatrix f = MetricMatrix::Zero(k, k);
  Eigen::MatrixXcd hr, hhr;
  for (Eigen::Index a = 0; a < k; ++a) {
    const Generator g = trace.generators[static_cast<std::size_t>(a)];
    apply_generator_left(trace.states[static_cast<std::size_t>(a)].matrix(), n, g, hr);
    apply_generator_left(hr, n, g, hhr);
    const double mean = hr.trace().real();
    f(a, a) = 4.0 * (hhr.trace().real() - mean * mean);
  }
  return f;
}

MetricMatrix qfim_ensemble_full(std::span<const AnsatzTrace<StateVector>> traces, const QaoaParams& params) {
  if (traces.empty()) throw std::invalid_argument("qfim_ensemble_full: no trajectories");
  const auto k = static_cast<Eigen::Index>(params.size());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(k, k);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
  for (const auto& t : traces) {
    check_trace(t, &params);
    accumulate_pure(t, params, acc, e);
  }
  const double inv = 1.0 / static_cast<double>(traces.size());
  return finish(acc * inv, e * inv, true);
}

MetricMatrix qfim_ensemble_diag(std::span<const AnsatzTrace<StateVector>> traces) {
  if (traces.empty()) throw std::invalid_argument("qfim_ensemble_diag: no trajectories");
  const auto k = static_cast<Eigen::Index>(traces.front().size());
  Eigen::VectorXd second = Eigen::VectorXd::Zero(k), first = Eigen::VectorXd::Zero(k);
  Eigen::VectorXcd w;
  for (const auto& t : traces) {
    check_trace(t, nullptr);
    if (static_cast<Eigen::Index>(t.size()) != k) throw std::invalid_argument("qfim_ensemble_diag: ragged traces");
    const int n = t.states.front().n_qubits();
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto& psi = t.states[static_cast<std::size_t>(a)].amplitudes();
      apply_generator(psi, n, t.generators[static_cast<std::size_t>(a)], w);
      first[a] += psi.dot(w).real();
      second[a] += w.squaredNorm();
    }
  }
  const double inv = 1.0 / static_cast<double>(traces.size());
  MetricMatrix f = MetricMatrix::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const double mean = first[a] * inv;
    f(a, a) = 4.0 * (second[a] * inv - mean * mean);
  }
  return f;
}

PseudoInverse pseudo_inverse(const Eigen::MatrixXd& m, double rcond) {
  if (m.rows() != m.cols()) throw std::invalid_argument("pseudo_inverse: matrix not square");
  if (!(rcond > 0.0)) throw std::invalid_argument("pseudo_inverse: rcond must be positive");
  PseudoInverse out;
  const Eigen::Index k = m.rows();
  out.inverse = Eigen::MatrixXd::Zero(k, k);
  if (k == 0) return out;
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pseudo_inverse: eigensolver failed");
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const double max_abs = lam.cwiseAbs().maxCoeff();
  out.min_eigenvalue = lam.minCoeff();
  if (max_abs == 0.0) return out;
  Eigen::VectorXd inv_lam = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(lam[i]) > rcond * max_abs) {
      inv_lam[i] = 1.0 / lam[i];
      ++out.rank;
    }
    if (lam[i] < -1e-6 * max_abs) ++out.negative_modes;
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  out.inverse = v * inv_lam.asDiagonal() * v.transpose();
  return out;
}

}  // namespace qng
