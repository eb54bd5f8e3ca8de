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

#include "qng/tfim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qng {

namespace {

std::string bond_string(int n, int i, int j) {
  std::string s(static_cast<std::size_t>(n), 'I');
  s[static_cast<std::size_t>(i)] = 'Z';
  s[static_cast<std::size_t>(j)] = 'Z';
  return s;
}

std::string site_string(int n, int i, char p) {
  std::string s(static_cast<std::size_t>(n), 'I');
  s[static_cast<std::size_t>(i)] = p;
  return s;
}

// Literal periodic sum over i = 0..N-1 of Z_i Z_{i+1}. For N = 2 this is the
// same bond twice, which PauliSum accumulates into one diagonal.
std::vector<PauliTerm> zz_terms(int n, double coefficient) {
  std::vector<PauliTerm> terms;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if (i == j) continue;
    terms.push_back({coefficient, bond_string(n, i, j)});
  }
  return terms;
}

std::vector<PauliTerm> x_terms(int n, double coefficient) {
  std::vector<PauliTerm> terms;
  for (int i = 0; i < n; ++i) terms.push_back({coefficient, site_string(n, i, 'X')});
  return terms;
}

GroundState from_dense(const Eigen::MatrixXd& h, int n_qubits) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("exact_diagonalize: eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  GroundState g;
  g.energy = ev[0];
  int deg = 1;
  while (deg < ev.size() && ev[deg] - ev[0] < kDegeneracyTol) ++deg;
  g.degeneracy = deg;
  g.subspace = solver.eigenvectors().leftCols(deg).cast<cplx>();
  Eigen::VectorXcd v = g.subspace.col(0);
  v.normalize();
  g.state = StateVector(n_qubits, v);
  g.residual = (h * solver.eigenvectors().col(0) - ev[0] * solver.eigenvectors().col(0)).norm();
  return g;
}

// Real symmetric operator action through the Pauli kernels.
Eigen::VectorXd apply_real(const PauliSum& h, const Eigen::VectorXd& v) {
  Eigen::VectorXcd out;
  h.apply(v.cast<cplx>(), out);
  return out.real();
}

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;
  double residual;
};

// Lowest eigenpair of h restricted to the orthogonal complement of `locked`.
// Full reorthogonalization; restarts from the current Ritz vector when the
// basis reaches `max_basis`.
Eigenpair lanczos_lowest(const PauliSum& h, const std::vector<Eigen::VectorXd>& locked, std::mt19937_64& rng) {
  const Eigen::Index dim = h.diagonal().size();
  constexpr int kMaxBasis = 400;
  constexpr int kMaxRestarts = 20;
  constexpr double kResidualTol = 1e-11;

  auto project_out = [&](Eigen::VectorXd& v) {
    for (const auto& u : locked) v -= u.dot(v) * u;
  };

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start[i] = normal(rng);
  project_out(start);
  start.normalize();

  Eigenpair best{0.0, start, 1.0};
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    const int m_max = static_cast<int>(std::min<Eigen::Index>(kMaxBasis, dim - static_cast<Eigen::Index>(locked.size())));
    Eigen::MatrixXd q(dim, m_max);
    std::vector<double> alpha, beta;
    q.col(0) = start;
    int m = 0;
    for (; m < m_max; ++m) {
      Eigen::VectorXd w = apply_real(h, q.col(m));
      const double a = q.col(m).dot(w);
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt keep the basis orthogonal.
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w);
        w -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * w);
      }
      const double b = w.norm();
      if (m + 1 == m_max || b < 1e-13) {
        ++m;
        break;
      }
      beta.push_back(b);
      q.col(m + 1) = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts(t);
    Eigen::VectorXd ritz = q.leftCols(m) * ts.eigenvectors().col(0);
    project_out(ritz);
    ritz.normalize();
    const double theta = ritz.dot(apply_real(h, ritz));
    const double res = (apply_real(h, ritz) - theta * ritz).norm();
    best = {theta, ritz, res};
    if (res < kResidualTol) break;
    start = ritz;
  }
  if (best.residual > 1e-8) throw std::runtime_error("exact_diagonalize: Lanczos did not converge");
  return best;
}

GroundState from_lanczos(const PauliSum& h, int n_qubits) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::vector<Eigen::VectorXd> locked;
  Eigenpair first = lanczos_lowest(h, locked, rng);
  locked.push_back(first.vector);
  // Deflate until the next eigenvalue leaves the degeneracy window.
  while (static_cast<Eigen::Index>(locked.size()) < h.diagonal().size()) {
    Eigenpair next = lanczos_lowest(h, locked, rng);
    if (next.value - first.value >= kDegeneracyTol) break;
    if (next.value < first.value) first = next;  // the lower one found late
    locked.push_back(next.vector);
  }
  GroundState g;
  g.energy = first.value;
  g.degeneracy = static_cast<int>(locked.size());
  g.subspace.resize(h.diagonal().size(), g.degeneracy);
  for (int k = 0; k < g.degeneracy; ++k) g.subspace.col(k) = locked[static_cast<std::size_t>(k)].cast<cplx>();
  g.state = StateVector(n_qubits, first.vector.cast<cplx>());
  g.residual = first.residual;
  return g;
}

}  // namespace

void TfimSpec::validate() const {
  if (n_qubits < 2) throw std::invalid_argument("TfimSpec: N must be at least 2");
  if (n_qubits > kMaxStateQubits) throw std::invalid_argument("TfimSpec: N exceeds the statevector cap of 12");
  if (!std::isfinite(coupling) || !std::isfinite(field)) throw std::invalid_argument("TfimSpec: non-finite J or h");
}

HamiltonianOperator build_hzz(int n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("build_hzz: N must be at least 2");
  return PauliSum(n_qubits, zz_terms(n_qubits, 1.0));
}

HamiltonianOperator build_hmix(int n_qubits) { return PauliSum(n_qubits, x_terms(n_qubits, 1.0)); }

HamiltonianOperator build_hc(const TfimSpec& spec) {
  spec.validate();
  auto terms = zz_terms(spec.n_qubits, -spec.coupling);
  if (spec.field != 0.0) {
    auto xs = x_terms(spec.n_qubits, -spec.field);
    terms.insert(terms.end(), xs.begin(), xs.end());
  }
  return PauliSum(spec.n_qubits, std::move(terms));
}

Eigen::VectorXd hzz_diagonal(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxStateQubits) throw std::invalid_argument("hzz_diagonal: N out of range");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t mask = dim - 1;
  Eigen::VectorXd z(static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    // rot moves bit i+1 to position i, so bit i of x ^ rot(x) is the bond (i, i+1) disagreement.
    const std::uint64_t rot = ((x >> 1) | (x << (n_qubits - 1))) & mask;
    z[static_cast<Eigen::Index>(x)] = n_qubits - 2.0 * std::popcount(x ^ rot);
  }
  return z;
}

ExactEnergyTerms exact_energy_terms(const TfimSpec& spec) {
  spec.validate();
  const int n = spec.n_qubits;
  ExactEnergyTerms t;
  t.r = n / 2;
  const bool even = n % 2 == 0;
  for (int q = 1; q <= t.r; ++q) {
    const double num = even ? (2.0 * q - 1.0) : 2.0 * q;
    t.alpha.push_back(num * std::numbers::pi / n);
  }
  t.shift = even ? 0.0 : 1.0 + spec.field;
  return t;
}

double exact_ground_energy(const TfimSpec& spec) {
  if (spec.coupling != 1.0) throw std::invalid_argument("exact_ground_energy: closed form requires J = 1");
  if (spec.n_qubits < 3) throw std::invalid_argument("exact_ground_energy: closed form requires N >= 3");
  const auto t = exact_energy_terms(spec);
  const double h = spec.field;
  double sum = 0.0;
  for (double a : t.alpha) sum += std::sqrt(1.0 + h * h + 2.0 * h * std::cos(a));
  return -t.shift - 2.0 * sum;
}

double GroundState::fidelity(const DensityMatrix& rho) const {
  if (static_cast<Eigen::Index>(rho.dim()) != subspace.rows()) throw std::invalid_argument("fidelity: dimension mismatch");
  double f = (subspace.adjoint() * rho.matrix() * subspace).trace().real();
  if (f < 0.0 && f > -1e-9) f = 0.0;
  if (f > 1.0 && f < 1.0 + 1e-9) f = 1.0;
  return f;
}

double GroundState::fidelity(const StateVector& psi) const {
  if (static_cast<Eigen::Index>(psi.dim()) != subspace.rows()) throw std::invalid_argument("fidelity: dimension mismatch");
  double f = (subspace.adjoint() * psi.amplitudes()).squaredNorm();
  if (f > 1.0 && f < 1.0 + 1e-9) f = 1.0;
  return f;
}

GroundState exact_diagonalize(const HamiltonianOperator& h) {
  if (h.n_qubits() > kMaxStateQubits) throw std::invalid_argument("exact_diagonalize: N exceeds 12");
  if (h.n_qubits() <= kMaxDensityQubits) return from_dense(h.to_dense_real(), h.n_qubits());
  return from_lanczos(h, h.n_qubits());
}

GroundState exact_diagonalize(const TfimSpec& spec) {
  spec.validate();
  return exact_diagonalize(build_hc(spec));
}

}  // namespace qng
