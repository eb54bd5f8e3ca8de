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

#include "qng/qaoa.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qng {

namespace {

void check_dims(const Eigen::MatrixXcd& m, int n_qubits, const char* what) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (m.rows() != d || m.cols() != d) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Phases e^{-i angle z} for every value z can take, indexed by x.
Eigen::VectorXcd zz_phases(int n_qubits, double angle) {
  const Eigen::VectorXd& z = zz_diagonal(n_qubits);
  Eigen::VectorXcd out(z.size());
  // z only takes N + 1 distinct values, N - 2k
  std::array<cplx, kMaxStateQubits + 1> table{};
  for (int k = 0; k <= n_qubits; ++k) table[static_cast<std::size_t>(k)] = std::polar(1.0, -angle * (n_qubits - 2.0 * k));
  for (Eigen::Index x = 0; x < z.size(); ++x) {
    const auto k = static_cast<std::size_t>(std::lround((n_qubits - z[x]) / 2.0));
    out[x] = table[k];
  }
  return out;
}

void rx_matrix(double beta, cplx m[4]) {
  // e^{-i beta X}
  const double c = std::cos(beta), s = std::sin(beta);
  m[0] = c;
  m[1] = cplx(0.0, -s);
  m[2] = cplx(0.0, -s);
  m[3] = c;
}

template <class State>
Evolution<State> evolve_impl(const QaoaParams& params, const State& initial, bool keep_trace) {
  params.validate();
  Evolution<State> out{initial, std::nullopt};
  if (keep_trace) {
    out.trace.emplace();
    out.trace->states.reserve(static_cast<std::size_t>(params.size()) + 1);
    out.trace->states.push_back(initial);
  }
  for (int k = 0; k < params.size(); ++k) {
    const Generator g = QaoaParams::generator(k);
    apply_evolution(out.state, g, params.theta[k]);
    if (keep_trace) {
      out.trace->states.push_back(out.state);
      out.trace->generators.push_back(g);
    }
  }
  return out;
}

}  // namespace

QaoaParams::QaoaParams(int depth_, Eigen::VectorXd theta_) : depth(depth_), theta(std::move(theta_)) { validate(); }

QaoaParams QaoaParams::zeros(int depth) { return QaoaParams(depth, Eigen::VectorXd::Zero(2 * depth)); }

void QaoaParams::validate() const {
  if (depth < 1) throw std::invalid_argument("QaoaParams: depth must be at least 1");
  if (theta.size() != 2 * depth) throw std::invalid_argument("QaoaParams: theta length must be 2 * depth");
  if (!theta.allFinite()) throw std::invalid_argument("QaoaParams: non-finite angle");
}

StateVector prepare_plus(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxStateQubits) throw std::invalid_argument("prepare_plus: N out of range");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return StateVector(n_qubits, Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

DensityMatrix prepare_plus_density(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxDensityQubits) throw std::invalid_argument("prepare_plus_density: N out of range");
  return DensityMatrix::pure(prepare_plus(n_qubits));
}

const Eigen::VectorXd& zz_diagonal(int n_qubits) {
  static const std::array<Eigen::VectorXd, kMaxStateQubits + 1> cache = [] {
    std::array<Eigen::VectorXd, kMaxStateQubits + 1> c;
    for (int n = 1; n <= kMaxStateQubits; ++n) c[static_cast<std::size_t>(n)] = hzz_diagonal(n);
    return c;
  }();
  if (n_qubits < 1 || n_qubits > kMaxStateQubits) throw std::invalid_argument("zz_diagonal: N out of range");
  return cache[static_cast<std::size_t>(n_qubits)];
}

void apply_uzz(StateVector& state, double gamma) {
  apply_evolution(state.amplitudes(), state.n_qubits(), Generator::kZZ, gamma);
}

void apply_uzz(DensityMatrix& state, double gamma) {
  conjugate_evolution(state.matrix(), state.n_qubits(), Generator::kZZ, gamma);
}

void apply_umix(StateVector& state, double beta) {
  apply_evolution(state.amplitudes(), state.n_qubits(), Generator::kMix, beta);
}

void apply_umix(DensityMatrix& state, double beta) {
  conjugate_evolution(state.matrix(), state.n_qubits(), Generator::kMix, beta);
}

void apply_evolution(StateVector& state, Generator g, double angle) {
  if (g == Generator::kZZ) apply_uzz(state, angle);
  else apply_umix(state, angle);
}

void apply_evolution(DensityMatrix& state, Generator g, double angle) {
  if (g == Generator::kZZ) apply_uzz(state, angle);
  else apply_umix(state, angle);
}

void apply_evolution(Eigen::VectorXcd& v, int n_qubits, Generator g, double angle) {
  if (v.size() != (Eigen::Index{1} << n_qubits)) throw std::invalid_argument("apply_evolution: dimension mismatch");
  if (g == Generator::kZZ) {
    v.array() *= zz_phases(n_qubits, angle).array();
    return;
  }
  cplx m[4];
  rx_matrix(angle, m);
  for (int q = 0; q < n_qubits; ++q) kernels::apply_1q(v.data(), 1, n_qubits, q, m);
}

void conjugate_evolution(Eigen::MatrixXcd& m, int n_qubits, Generator g, double angle) {
  check_dims(m, n_qubits, "conjugate_evolution");
  if (g == Generator::kZZ) {
    const Eigen::VectorXcd ph = zz_phases(n_qubits, angle);
    m = ph.asDiagonal() * m * ph.conjugate().asDiagonal();
    return;
  }
  cplx r[4];
  rx_matrix(angle, r);
  for (int q = 0; q < n_qubits; ++q) kernels::conjugate_1q(m, n_qubits, q, r);
}

void apply_generator(const Eigen::VectorXcd& v, int n_qubits, Generator g, Eigen::VectorXcd& out) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (v.size() != d) throw std::invalid_argument("apply_generator: dimension mismatch");
  if (g == Generator::kZZ) {
    out = zz_diagonal(n_qubits).cast<cplx>().cwiseProduct(v);
    return;
  }
  out = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (int q = 0; q < n_qubits; ++q) out[x] += v[x ^ (Eigen::Index{1} << q)];
  }
}

void apply_generator_left(const Eigen::MatrixXcd& m, int n_qubits, Generator g, Eigen::MatrixXcd& out) {
  check_dims(m, n_qubits, "apply_generator_left");
  const Eigen::Index d = m.rows();
  if (g == Generator::kZZ) {
    out = zz_diagonal(n_qubits).cast<cplx>().asDiagonal() * m;
    return;
  }
  out = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (int q = 0; q < n_qubits; ++q) out.row(x) += m.row(x ^ (Eigen::Index{1} << q));
  }
}

Evolution<StateVector> evolve(const QaoaParams& params, const StateVector& initial, bool keep_trace) {
  return evolve_impl(params, initial, keep_trace);
}

Evolution<DensityMatrix> evolve(const QaoaParams& params, const DensityMatrix& initial, bool keep_trace) {
  return evolve_impl(params, initial, keep_trace);
}

double energy(const QaoaParams& params, const TfimSpec& spec) {
  const auto ev = evolve(params, prepare_plus(spec.n_qubits));
  return expectation(ev.state, build_hc(spec));
}

double accuracy(double e_c, double e_0) {
  if (e_0 == 0.0) throw std::invalid_argument("accuracy: reference energy is zero");
  return (e_c - e_0) / std::abs(e_0);
}

GateMatrix zz_gate(double angle) {
  GateMatrix u = GateMatrix::Zero(4, 4);
  // Z(x)Z eigenvalue is +1 on 00 and 11, -1 on 01 and 10
  const cplx plus = std::polar(1.0, -angle / 2.0);
  const cplx minus = std::polar(1.0, angle / 2.0);
  u(0, 0) = plus;
  u(1, 1) = minus;
  u(2, 2) = minus;
  u(3, 3) = plus;
  return u;
}

GateMatrix rx_gate(double angle) {
  GateMatrix u(2, 2);
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  u << c, cplx(0.0, -s), cplx(0.0, -s), c;
  return u;
}

}  // namespace qng
