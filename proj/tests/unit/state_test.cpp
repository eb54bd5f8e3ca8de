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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qng/state.hpp"

using namespace qng;

namespace {

oracle::Mat random_unitary(std::mt19937_64& rng, int n) {
  const int d = 1 << n;
  std::normal_distribution<double> g;
  oracle::Mat a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<oracle::Mat> qr(a);
  return qr.householderQ();
}

}  // namespace

TEST(StateVector, DefaultIsAllZeros) {
  StateVector s(3);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s[0], cplx(1.0));
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(s[i], cplx(0.0));
}

TEST(StateVector, RejectsBadSizeAndNorm) {
  EXPECT_THROW(StateVector(2, Eigen::VectorXcd::Ones(3)), std::invalid_argument);
  EXPECT_THROW(StateVector(2, Eigen::VectorXcd::Ones(4)), std::invalid_argument);
  EXPECT_THROW(StateVector(0), std::invalid_argument);
  EXPECT_THROW(StateVector(kMaxStateQubits + 1), std::invalid_argument);
}

TEST(StateVector, BasisUsesLsbOrdering) {
  // X on qubit 0 of |000> gives index 1.
  StateVector s(3);
  oracle::Mat x = oracle::pauli('X');
  const int target[] = {0};
  apply_unitary(s, x, target);
  EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
  const int target2[] = {2};
  apply_unitary(s, x, target2);
  EXPECT_NEAR(std::abs(s[5]), 1.0, 1e-15);
}

TEST(StateVector, ApplyUnitaryMatchesKroneckerOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    const oracle::Vec psi = oracle::random_state(rng, n);
    const oracle::Mat u = random_unitary(rng, 2);
    std::vector<int> targets{static_cast<int>(rng() % n), 0};
    do targets[1] = static_cast<int>(rng() % n);
    while (targets[1] == targets[0]);
    StateVector s(n, psi);
    apply_unitary(s, u, targets);
    // Oracle: permute u into place via the full operator sum over basis pairs.
    const int d = 1 << n;
    oracle::Mat full = oracle::Mat::Zero(d, d);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        std::vector<std::pair<int, oracle::Mat>> f;
        for (int l = 0; l < 2; ++l) {
          oracle::Mat e = oracle::Mat::Zero(2, 2);
          e(((r >> l) & 1), ((c >> l) & 1)) = 1.0;
          f.emplace_back(targets[static_cast<std::size_t>(l)], e);
        }
        full += u(r, c) * oracle::embed(n, f);
      }
    EXPECT_LT((s.amplitudes() - full * psi).norm(), 1e-12);
  }
}

TEST(StateVector, ApplyUnitaryRejectsBadGates) {
  StateVector s(3);
  const int same[] = {1, 1};
  const int out[] = {3};
  const int one[] = {0};
  EXPECT_THROW(apply_unitary(s, oracle::Mat::Identity(4, 4), same), std::invalid_argument);
  EXPECT_THROW(apply_unitary(s, oracle::pauli('X'), out), std::invalid_argument);
  EXPECT_THROW(apply_unitary(s, 2.0 * oracle::pauli('X'), one), std::invalid_argument);
  EXPECT_THROW(apply_unitary(s, oracle::Mat::Identity(4, 4), one), std::invalid_argument);
}

TEST(DensityMatrix, ConjugationMatchesDenseOracle) {
  std::mt19937_64 rng(2);
  const int n = 3;
  const oracle::Mat rho = oracle::random_density(rng, n, 3);
  const oracle::Mat u = random_unitary(rng, 1);
  DensityMatrix dm(n, rho);
  const int t[] = {1};
  apply_unitary(dm, u, t);
  const oracle::Mat full = oracle::embed(n, {{1, u}});
  EXPECT_LT((dm.matrix() - full * rho * full.adjoint()).norm(), 1e-12);
  EXPECT_NEAR(dm.trace(), 1.0, 1e-12);
}

TEST(DensityMatrix, Invariants) {
  EXPECT_THROW(DensityMatrix(1, oracle::pauli('Y')), std::invalid_argument);  // trace 0
  oracle::Mat bad(2, 2);
  bad << 1, 0.5, 0, 0;
  EXPECT_THROW(DensityMatrix(1, bad), std::invalid_argument);  // not Hermitian
  const auto mixed = DensityMatrix::maximally_mixed(2);
  EXPECT_NEAR(mixed.purity(), 0.25, 1e-15);
  EXPECT_NEAR(mixed.min_eigenvalue(), 0.25, 1e-12);
}

TEST(Fidelity, PureAndMixed) {
  std::mt19937_64 rng(3);
  const auto a = oracle::random_state(rng, 3), b = oracle::random_state(rng, 3);
  const StateVector sa(3, a), sb(3, b);
  EXPECT_NEAR(fidelity(sa, sb), std::norm(a.dot(b)), 1e-14);
  EXPECT_NEAR(fidelity(DensityMatrix::pure(sa), sb), std::norm(a.dot(b)), 1e-14);
  EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(3), sb), 1.0 / 8.0, 1e-14);
  EXPECT_NEAR(fidelity(sa, sa), 1.0, 1e-14);
}

TEST(Eigendecompose, DescendingAndReconstructs) {
  std::mt19937_64 rng(4);
  const oracle::Mat rho = oracle::random_density(rng, 3, 4);
  const auto es = eigendecompose(rho);
  for (Eigen::Index i = 1; i < es.values.size(); ++i) EXPECT_GE(es.values[i - 1], es.values[i]);
  const oracle::Mat back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  EXPECT_LT((back - rho).norm(), 1e-12);
  oracle::Mat bad = oracle::Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(eigendecompose(bad), std::invalid_argument);
}

TEST(Kernels, ConjugateIsVMVdagger) {
  std::mt19937_64 rng(5);
  const int n = 3;
  oracle::Mat m = oracle::Mat::Random(8, 8);
  const oracle::Mat v = random_unitary(rng, 2);
  const int targets[] = {2, 0};
  oracle::Mat got = m;
  kernels::conjugate(got, n, v, targets);
  StateVector probe(n);
  // Build the full operator column by column with apply_unitary.
  oracle::Mat full(8, 8);
  for (int c = 0; c < 8; ++c) {
    StateVector e = StateVector::basis(n, static_cast<std::size_t>(c));
    apply_unitary(e, v, targets);
    full.col(c) = e.amplitudes();
  }
  EXPECT_LT((got - full * m * full.adjoint()).norm(), 1e-12);
}
