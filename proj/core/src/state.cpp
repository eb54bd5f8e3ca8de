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

#include "qng/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qng {

namespace {

constexpr double kUnitTol = 1e-10;

void check_qubits(int n_qubits, int max_qubits, const char* what) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw std::invalid_argument(std::string(what) + ": qubit count " + std::to_string(n_qubits) +
                                " outside [1, " + std::to_string(max_qubits) + "]");
  }
}

// Expands `i` by inserting a zero bit at every (ascending) position in `sorted_targets`.
inline std::size_t insert_zero_bits(std::size_t i, std::span<const int> sorted_targets) {
  for (int t : sorted_targets) {
    const std::size_t low = i & ((std::size_t{1} << t) - 1);
    i = ((i >> t) << (t + 1)) | low;
  }
  return i;
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_qubits(n_qubits, kMaxStateQubits, "StateVector");
  amplitudes_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubits(n_qubits, kMaxStateQubits, "StateVector");
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count is not 2^n_qubits");
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("StateVector: amplitudes are not normalized");
  }
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw std::invalid_argument("StateVector::basis: index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("StateVector::inner: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);  // Eigen conjugates the left operand
}

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  check_qubits(n_qubits, kMaxDensityQubits, "DensityMatrix");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  matrix_ = Eigen::MatrixXcd::Zero(d, d);
  matrix_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  check_qubits(n_qubits, kMaxDensityQubits, "DensityMatrix");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("DensityMatrix: matrix is not 2^n x 2^n");
  }
  if (hermiticity_error() > kUnitTol) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - cplx(1.0)) > kUnitTol) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  check_qubits(psi.n_qubits(), kMaxDensityQubits, "DensityMatrix::pure");
  DensityMatrix rho(psi.n_qubits());
  rho.matrix_.noalias() = psi.amplitudes() * psi.amplitudes().adjoint();
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  DensityMatrix rho(n_qubits);
  const auto d = static_cast<double>(rho.dim());
  rho.matrix_ = Eigen::MatrixXcd::Identity(rho.matrix_.rows(), rho.matrix_.cols()) / d;
  return rho;
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return matrix_.squaredNorm();
}

double DensityMatrix::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

void check_gate(const GateMatrix& u, std::span<const int> targets, int n_qubits) {
  const std::size_t k = targets.size();
  if (k == 0) throw std::invalid_argument("gate: empty target list");
  if (static_cast<int>(k) > n_qubits) throw std::invalid_argument("gate: more targets than qubits");
  for (std::size_t i = 0; i < k; ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits) {
      throw std::invalid_argument("gate: target " + std::to_string(targets[i]) + " out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw std::invalid_argument("gate: duplicate target");
    }
  }
  const Eigen::Index d = Eigen::Index{1} << k;
  if (u.rows() != d || u.cols() != d) throw std::invalid_argument("gate: matrix size does not match targets");
  const double err = (u.adjoint() * u - GateMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > kUnitTol) throw std::invalid_argument("gate: matrix is not unitary");
}

void apply_unitary(StateVector& state, const GateMatrix& u, std::span<const int> targets) {
  check_gate(u, targets, state.n_qubits());
  kernels::apply_kq(state.amplitudes().data(), 1, state.n_qubits(), u, targets);
}

void apply_unitary(DensityMatrix& state, const GateMatrix& u, std::span<const int> targets) {
  check_gate(u, targets, state.n_qubits());
  kernels::conjugate(state.matrix(), state.n_qubits(), u, targets);
}

double fidelity(const DensityMatrix& rho, const StateVector& psi_g) {
  if (rho.dim() != psi_g.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const auto& v = psi_g.amplitudes();
  double f = v.dot(rho.matrix() * v).real();
  if (f < 0.0 && f > -1e-9) f = 0.0;
  if (f > 1.0 && f < 1.0 + 1e-9) f = 1.0;
  return f;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(a.inner(b)); }

Eigensystem eigendecompose(const Eigen::MatrixXcd& hermitian) {
  if (hermitian.rows() != hermitian.cols()) throw std::invalid_argument("eigendecompose: matrix not square");
  if (hermitian.size() > 0 && (hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > kUnitTol) {
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  // Eigen returns ascending order.
  Eigensystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Eigensystem eigendecompose(const DensityMatrix& rho) { return eigendecompose(rho.matrix()); }

namespace kernels {

void apply_1q(cplx* data, std::size_t stride, int n_qubits, int target, const cplx m[4]) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t bit = std::size_t{1} << target;
  const cplx m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
  for (std::size_t block = 0; block < dim; block += 2 * bit) {
    for (std::size_t i = block; i < block + bit; ++i) {
      cplx& a0 = data[i * stride];
      cplx& a1 = data[(i + bit) * stride];
      const cplx x0 = a0;
      const cplx x1 = a1;
      a0 = m00 * x0 + m01 * x1;
      a1 = m10 * x0 + m11 * x1;
    }
  }
}

void apply_kq(cplx* data, std::size_t stride, int n_qubits, const GateMatrix& m,
              std::span<const int> targets) {
  const std::size_t k = targets.size();
  if (k == 1) {
    const cplx mm[4] = {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
    apply_1q(data, stride, n_qubits, targets[0], mm);
    return;
  }
  const std::size_t sub = std::size_t{1} << k;
  std::vector<int> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> offsets(sub, 0);
  for (std::size_t j = 0; j < sub; ++j) {
    for (std::size_t l = 0; l < k; ++l) {
      if ((j >> l) & 1U) offsets[j] |= std::size_t{1} << targets[l];
    }
  }
  std::vector<cplx> in(sub);
  const std::size_t outer = std::size_t{1} << (n_qubits - static_cast<int>(k));
  for (std::size_t i = 0; i < outer; ++i) {
    const std::size_t base = insert_zero_bits(i, sorted);
    for (std::size_t j = 0; j < sub; ++j) in[j] = data[(base | offsets[j]) * stride];
    for (std::size_t r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < sub; ++c) acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      data[(base | offsets[r]) * stride] = acc;
    }
  }
}

void conjugate(Eigen::MatrixXcd& mat, int n_qubits, const GateMatrix& v, std::span<const int> targets) {
  const auto d = static_cast<std::size_t>(mat.rows());
  cplx* data = mat.data();  // column-major: (r, c) at r + c * d
  for (std::size_t c = 0; c < d; ++c) apply_kq(data + c * d, 1, n_qubits, v, targets);
  const GateMatrix vc = v.conjugate();
  for (std::size_t r = 0; r < d; ++r) apply_kq(data + r, d, n_qubits, vc, targets);
}

void conjugate_1q(Eigen::MatrixXcd& mat, int n_qubits, int target, const cplx v[4]) {
  const auto d = static_cast<std::size_t>(mat.rows());
  cplx* data = mat.data();
  for (std::size_t c = 0; c < d; ++c) apply_1q(data + c * d, 1, n_qubits, target, v);
  const cplx vc[4] = {std::conj(v[0]), std::conj(v[1]), std::conj(v[2]), std::conj(v[3])};
  for (std::size_t r = 0; r < d; ++r) apply_1q(data + r, d, n_qubits, target, vc);
}

}  // namespace kernels

}  // namespace qng
