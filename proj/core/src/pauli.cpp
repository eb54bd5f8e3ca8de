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

#include "qng/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qng {

namespace {

inline double parity_sign(std::uint64_t x) { return (std::popcount(x) & 1U) ? -1.0 : 1.0; }

}  // namespace

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : n_qubits_(n_qubits), terms_(std::move(terms)) {
  if (n_qubits < 1 || n_qubits > kMaxStateQubits) throw std::invalid_argument("PauliSum: qubit count out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  diagonal_ = Eigen::VectorXd::Zero(dim);
  for (const auto& term : terms_) {
    if (static_cast<int>(term.paulis.size()) != n_qubits) {
      throw std::invalid_argument("PauliSum: Pauli string '" + term.paulis + "' has wrong length");
    }
    if (!std::isfinite(term.coefficient)) throw std::invalid_argument("PauliSum: non-finite coefficient");
    std::uint64_t xm = 0, zm = 0;
    int n_y = 0;
    for (int q = 0; q < n_qubits; ++q) {
      const std::uint64_t bit = std::uint64_t{1} << q;
      switch (term.paulis[static_cast<std::size_t>(q)]) {
        case 'I': break;
        case 'X': xm |= bit; break;
        case 'Y': xm |= bit; zm |= bit; ++n_y; break;
        case 'Z': zm |= bit; break;
        default: throw std::invalid_argument("PauliSum: invalid Pauli character in '" + term.paulis + "'");
      }
    }
    if (xm == 0) {
      for (Eigen::Index x = 0; x < dim; ++x) {
        diagonal_[x] += term.coefficient * parity_sign(static_cast<std::uint64_t>(x) & zm);
      }
    } else {
      static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      off_diagonal_.push_back({xm, zm, term.coefficient * kIPow[n_y % 4]});
    }
  }
}

// P|x> = i^{nY} (-1)^{|x & z|} |x ^ xm>, Y = iXZ.
void PauliSum::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const Eigen::Index dim = diagonal_.size();
  if (in.size() != dim) throw std::invalid_argument("PauliSum::apply: dimension mismatch");
  out = diagonal_.cast<cplx>().cwiseProduct(in);
  for (const auto& t : off_diagonal_) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      out[static_cast<Eigen::Index>(ux ^ t.x_mask)] += t.weight * parity_sign(ux & t.z_mask) * in[x];
    }
  }
}

void PauliSum::apply_left(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) const {
  const Eigen::Index dim = diagonal_.size();
  if (m.rows() != dim || m.cols() != dim) throw std::invalid_argument("PauliSum::apply_left: dimension mismatch");
  out = diagonal_.cast<cplx>().asDiagonal() * m;
  for (const auto& t : off_diagonal_) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      const cplx w = t.weight * parity_sign(ux & t.z_mask);
      out.row(static_cast<Eigen::Index>(ux ^ t.x_mask)) += w * m.row(x);
    }
  }
}

cplx PauliSum::trace_with(const Eigen::MatrixXcd& m) const {
  const Eigen::Index dim = diagonal_.size();
  if (m.rows() != dim || m.cols() != dim) throw std::invalid_argument("PauliSum::trace_with: dimension mismatch");
  // per term: H(x^xm, x) M(x, x^xm)
  cplx acc = 0.0;
  for (Eigen::Index x = 0; x < dim; ++x) acc += diagonal_[x] * m(x, x);
  for (const auto& t : off_diagonal_) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      acc += t.weight * parity_sign(ux & t.z_mask) * m(x, static_cast<Eigen::Index>(ux ^ t.x_mask));
    }
  }
  return acc;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  const Eigen::Index dim = diagonal_.size();
  Eigen::MatrixXcd h = diagonal_.cast<cplx>().asDiagonal();
  for (const auto& t : off_diagonal_) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      h(static_cast<Eigen::Index>(ux ^ t.x_mask), x) += t.weight * parity_sign(ux & t.z_mask);
    }
  }
  return h;
}

Eigen::MatrixXd PauliSum::to_dense_real() const {
  for (const auto& t : off_diagonal_) {
    if (t.weight.imag() != 0.0) throw std::invalid_argument("PauliSum::to_dense_real: operator has imaginary entries");
  }
  return to_dense().real();
}

PauliSum PauliSum::operator*(double scale) const {
  std::vector<PauliTerm> scaled = terms_;
  for (auto& t : scaled) t.coefficient *= scale;
  return PauliSum(n_qubits_, std::move(scaled));
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("PauliSum::operator+: qubit count mismatch");
  std::vector<PauliTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return PauliSum(n_qubits_, std::move(all));
}

double expectation(const StateVector& psi, const PauliSum& h) {
  if (psi.n_qubits() != h.n_qubits()) throw std::invalid_argument("expectation: qubit count mismatch");
  Eigen::VectorXcd hpsi;
  h.apply(psi.amplitudes(), hpsi);
  const cplx e = psi.amplitudes().dot(hpsi);
  if (std::abs(e.imag()) > 1e-10) throw std::runtime_error("expectation: imaginary residue above 1e-10");
  return e.real();
}

double expectation(const DensityMatrix& rho, const PauliSum& h) {
  if (rho.n_qubits() != h.n_qubits()) throw std::invalid_argument("expectation: qubit count mismatch");
  const cplx e = h.trace_with(rho.matrix());
  if (std::abs(e.imag()) > 1e-10) throw std::runtime_error("expectation: imaginary residue above 1e-10");
  return e.real();
}

}  // namespace qng
