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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qng/noise.hpp"

using namespace qng;

namespace {

double min_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  return es.eigenvalues()[0];
}

constexpr const char* kSample = R"({
  "description": "test",
  "defaults": {"t1_us": 100, "t2_us": 80, "readout_p10": 0.02, "readout_p01": 0.03,
               "rx": {"error": 1e-3, "duration_ns": 40}, "zz": {"error": 1e-2, "duration_ns": 300}},
  "qubits": [{"index": 2, "t1_us": 50, "t2_us": 20}],
  "gates": [{"kind": "zz", "qubits": [1, 0], "error": 2e-2, "duration_ns": 400}]
})";

}  // namespace

TEST(Calibration, ParsesSampleWithDefaultsAndOverrides) {
  const auto cal = parse_calibration(kSample);
  EXPECT_EQ(cal.qubit(0).t1_us, 100);
  EXPECT_EQ(cal.qubit(2).t1_us, 50);
  EXPECT_EQ(cal.qubit(2).readout_p10, 0.02);  // inherited
  EXPECT_EQ(cal.qubit(7).t2_us, 80);
  const int fwd[] = {0, 1}, other[] = {1, 2}, q0[] = {0};
  EXPECT_EQ(cal.gate(GateKind::kZZ, fwd).error, 2e-2);  // order-insensitive
  EXPECT_EQ(cal.gate(GateKind::kZZ, other).error, 1e-2);
  EXPECT_EQ(cal.gate(GateKind::kRx, q0).duration_ns, 40);
  // Round trip through the writer.
  const auto back = parse_calibration(calibration_to_json(cal));
  EXPECT_EQ(back.qubit(2).t2_us, 20);
  EXPECT_EQ(back.gate(GateKind::kZZ, fwd).duration_ns, 400);
}

TEST(Calibration, BundledFileMatchesBuiltInReference) {
  const auto cal = load_calibration(QNG_SOURCE_DIR "/data/reference_calibration.json");
  const auto ref = CalibrationData::reference();
  EXPECT_EQ(cal.default_qubit.t1_us, ref.default_qubit.t1_us);
  EXPECT_EQ(cal.default_qubit.t2_us, ref.default_qubit.t2_us);
  EXPECT_EQ(cal.default_rx.error, ref.default_rx.error);
  EXPECT_EQ(cal.default_zz.duration_ns, ref.default_zz.duration_ns);
  EXPECT_EQ(cal.default_qubit.readout_p01, ref.default_qubit.readout_p01);
}

TEST(Calibration, RejectsUnphysicalOrMalformed) {
  EXPECT_THROW(parse_calibration(R"({"defaults": {"t1_us": 100, "t2_us": 250}})"), std::invalid_argument);
  EXPECT_THROW(parse_calibration(R"({"defaults": {"t1_us": -1}})"), std::invalid_argument);
  EXPECT_THROW(parse_calibration(R"({"defaults": {}, "extra": 1})"), std::invalid_argument);
  EXPECT_THROW(parse_calibration(R"({"qubits": []})"), std::invalid_argument);
  EXPECT_THROW(parse_calibration(R"({"defaults": {"readout_p10": 1.5}})"), std::invalid_argument);
  EXPECT_THROW(parse_calibration(R"({"defaults": {}, "gates": [{"kind": "cz", "qubits": [0, 1]}]})"),
               std::invalid_argument);
  EXPECT_THROW(parse_calibration("{not json"), std::invalid_argument);
  EXPECT_NO_THROW(parse_calibration(R"({"defaults": {"t1_us": "inf", "t2_us": null}})"));
}

TEST(Channels, DepolarizingLimits) {
  std::mt19937_64 rng(41);
  const oracle::Mat rho = oracle::random_density(rng, 2, 2);
  const DensityMatrix dm(2, rho);
  EXPECT_LT((depolarizing_channel(0.0, 2).apply(dm).matrix() - rho).norm(), 1e-14);
  EXPECT_LT((depolarizing_channel(1.0, 2).apply(dm).matrix() - oracle::Mat::Identity(4, 4) / 4.0).norm(), 1e-14);
  const double p = 0.3;
  EXPECT_LT((depolarizing_channel(p, 2).apply(dm).matrix() - ((1 - p) * rho + p * oracle::Mat::Identity(4, 4) / 4.0))
                .norm(),
            1e-14);
  EXPECT_THROW(depolarizing_channel(1.1, 1), std::invalid_argument);
  EXPECT_THROW(depolarizing_channel(0.1, 3), std::invalid_argument);
}

TEST(Channels, OneQubitDepolarizingAverageFidelity) {
  for (double p : {0.0, 0.01, 0.2, 0.9}) {
    const auto ch = depolarizing_channel(p, 1);
    EXPECT_NEAR(average_gate_fidelity(ch), 1.0 - p / 2.0, 1e-14);
    EXPECT_NEAR(process_fidelity(ch), oracle::process_fidelity(ch.operators()), 1e-14);
  }
  // Coarse Haar check of the average-fidelity formula itself.
  const auto ch = depolarizing_channel(0.4, 1);
  EXPECT_NEAR(oracle::average_fidelity_mc(ch.operators(), 20000, 9), 0.8, 5e-3);
}

TEST(Channels, ThermalRelaxationDecayRates) {
  const double t1 = 50, t2 = 30, t = 7;
  const auto ch = thermal_relaxation_channel(t1, t2, t);
  oracle::Mat one = oracle::Mat::Zero(2, 2);
  one(1, 1) = 1.0;
  const auto out = ch.apply(DensityMatrix(1, one)).matrix();
  EXPECT_NEAR(out(1, 1).real(), std::exp(-t / t1), 1e-14);
  oracle::Mat plus = oracle::Mat::Constant(2, 2, 0.5);
  const auto out2 = ch.apply(DensityMatrix(1, plus)).matrix();
  EXPECT_NEAR(std::abs(out2(0, 1)), 0.5 * std::exp(-t / t2), 1e-14);
  EXPECT_THROW(thermal_relaxation_channel(10, 25, 1), std::invalid_argument);
  const auto ideal = thermal_relaxation_channel(INFINITY, INFINITY, 5);
  EXPECT_NEAR(process_fidelity(ideal), 1.0, 1e-15);
}

TEST(Channels, TracePreservingAndCompletelyPositive) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    const double t1 = 10 + 500 * u(rng), t2 = 2 * t1 * (0.05 + 0.95 * u(rng));
    const auto relax = thermal_relaxation_channel(t1, t2, 5 * u(rng));
    const auto dep = depolarizing_channel(u(rng), 1 + i % 2);
    const auto two = relax.tensor(thermal_relaxation_channel(t1, t2, 3 * u(rng)));
    for (const KrausChannel* ch : {&relax, &dep, &two}) {
      EXPECT_LT(ch->completeness_error(), 1e-9);
      EXPECT_GT(min_eig(ch->choi()), -1e-8);
    }
  }
}

TEST(Channels, SuperoperatorAgreesWithKraus) {
  std::mt19937_64 rng(43);
  const auto ch = thermal_relaxation_channel(40, 30, 6).compose_after(depolarizing_channel(0.1, 1));
  const oracle::Mat rho = oracle::random_density(rng, 1, 2);
  const auto s = ch.superoperator();
  Eigen::VectorXcd vec(4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) vec[r * 2 + c] = rho(r, c);
  const Eigen::VectorXcd out = s * vec;
  const oracle::Mat expect = oracle::apply_kraus(ch.operators(), rho);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) EXPECT_LT(std::abs(out[r * 2 + c] - expect(r, c)), 1e-14);
}

TEST(FitDepolarizing, RoundTripsAndBoundaries) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  while (checked < 40) {
    const double t1 = 20 + 300 * u(rng), t2 = 2 * t1 * (0.1 + 0.9 * u(rng));
    const int nq = 1 + checked % 2;
    KrausChannel relax = thermal_relaxation_channel(t1, t2, 0.5 * u(rng));
    if (nq == 2) relax = relax.tensor(thermal_relaxation_channel(t1, t2, 0.5 * u(rng)));
    const double floor_err = 1.0 - average_gate_fidelity(relax);
    const double e = floor_err + 0.05 * u(rng);
    const auto fit = fit_depolarizing(e, relax);
    ASSERT_TRUE(fit.feasible);
    const auto composite = relax.compose_after(depolarizing_channel(fit.p, nq));
    const double d = 1 << nq;
    const double f_avg = (d * oracle::process_fidelity(composite.operators()) + 1) / (d + 1);
    EXPECT_NEAR(1.0 - f_avg, e, 1e-9);
    ++checked;
  }
  EXPECT_EQ(fit_depolarizing(0.0, KrausChannel::identity(1)).p, 0.0);
  // Identity relaxation: 1 - F_avg = p (d - 1) / d, so p = 2 e on one qubit.
  EXPECT_NEAR(fit_depolarizing(0.01, KrausChannel::identity(1)).p, 0.02, 1e-14);
  const auto relax = thermal_relaxation_channel(10, 10, 2);
  EXPECT_NEAR(fit_depolarizing(1.0 - average_gate_fidelity(relax), relax).p, 0.0, 1e-12);
  const auto bad = fit_depolarizing(1e-6, relax);
  EXPECT_FALSE(bad.feasible);
  EXPECT_EQ(bad.p, 0.0);
  EXPECT_FALSE(bad.warning.empty());
}

TEST(Readout, ConfusionMaps) {
  Eigen::VectorXd zero(2);
  zero << 1.0, 0.0;
  const auto one_flip = apply_readout(zero, ReadoutError::asymmetric(1, 0.1, 0.0));
  EXPECT_NEAR(one_flip[0], 0.9, 1e-15);
  EXPECT_NEAR(one_flip[1], 0.1, 1e-15);
  Eigen::VectorXd p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  EXPECT_LT((apply_readout(p, ReadoutError::symmetric(2, 0.0)) - p).norm(), 1e-15);
  // Two qubits against a dense 4x4 stochastic matrix, qubit 0 the low bit.
  auto m = [](double p10, double p01) {
    Eigen::Matrix2d c;
    c << 1 - p10, p10, p01, 1 - p01;
    return c;
  };
  ReadoutError r;
  r.confusion = {m(0.1, 0.2), m(0.05, 0.3)};
  Eigen::Matrix4d big;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) big(i, j) = r.confusion[0](i & 1, j & 1) * r.confusion[1](i >> 1, j >> 1);
  const Eigen::VectorXd got = apply_readout(p, r);
  EXPECT_LT((got - big.transpose() * p).norm(), 1e-15);
  EXPECT_NEAR(got.sum(), 1.0, 1e-12);
  Eigen::VectorXd unnormalized = p * 2;
  EXPECT_THROW(apply_readout(unnormalized, r), std::invalid_argument);
}

TEST(NoisyCircuit, NoiseFreeLimitMatchesNoiseless) {
  std::mt19937_64 rng(45);
  for (int n = 2; n <= 5; ++n) {
    const QaoaParams p(2, oracle::random_theta(rng, 4));
    const auto rho = noisy_qaoa_evolve(p, n, CalibrationData::ideal());
    const auto psi = evolve(p, prepare_plus(n)).state;
    EXPECT_LT((rho.matrix() - psi.amplitudes() * psi.amplitudes().adjoint()).norm(), 1e-12) << n;
  }
}

TEST(NoisyCircuit, SingleGateCompositeMatchesDenseChannels) {
  // Depth 1 on two qubits with only the Rx gates noisy: compare to the dense
  // product of ideal gates and Kraus channels.
  CalibrationData cal = CalibrationData::ideal();
  cal.default_qubit.t1_us = 20;
  cal.default_qubit.t2_us = 15;
  cal.default_rx = {GateKind::kRx, {}, 0.02, 100.0};
  cal.default_zz = {GateKind::kZZ, {}, 0.0, 0.0};
  const QaoaParams p(1, (Eigen::VectorXd(2) << 0.4, 0.7).finished());
  const auto got = noisy_qaoa_evolve(p, 2, cal);
  const auto relax = thermal_relaxation_channel(20, 15, 0.1);
  const auto composite = relax.compose_after(depolarizing_channel(fit_depolarizing(0.02, relax).p, 1));
  oracle::Mat rho = oracle::plus_state(2) * oracle::plus_state(2).adjoint();
  const oracle::Mat zz = oracle::expm_herm(oracle::embed(2, {{0, oracle::pauli('Z')}, {1, oracle::pauli('Z')}}), 0.4);
  rho = zz * zz * rho * zz.adjoint() * zz.adjoint();  // both bonds of the two-site ring
  for (int q = 0; q < 2; ++q) {
    const oracle::Mat rx = oracle::embed(2, {{q, oracle::expm_herm(oracle::pauli('X'), 0.7)}});
    rho = rx * rho * rx.adjoint();
    std::vector<oracle::Mat> ks;
    for (const auto& k : composite.operators()) ks.push_back(oracle::embed(2, {{q, k}}));
    rho = oracle::apply_kraus(ks, rho);
  }
  EXPECT_LT((got.matrix() - rho).norm(), 1e-12);
}

TEST(NoisyCircuit, PurityNeverIncreasesLayerByLayer) {
  const auto cal = CalibrationData::reference();
  std::mt19937_64 rng(46);
  const Eigen::VectorXd theta = oracle::random_theta(rng, 8);
  double last = 1.0;
  for (int depth = 1; depth <= 4; ++depth) {
    const double purity = noisy_qaoa_evolve(QaoaParams(depth, theta.head(2 * depth)), 4, cal).purity();
    EXPECT_LE(purity, last + 1e-12);
    last = purity;
  }
  EXPECT_LT(last, 1.0);
}

TEST(DigitalNoiseBackend, AdjointGradientMatchesDifferences) {
  const TfimSpec spec{4, 1.0, 0.5};
  auto ground = std::make_shared<const GroundState>(exact_diagonalize(spec));
  CalibrationData cal = CalibrationData::reference();
  cal.default_zz.error = 0.05;  // make the noise visible
  DigitalNoiseBackend b(spec, cal, ground);
  std::mt19937_64 rng(47);
  const QaoaParams p(2, oracle::random_theta(rng, 4));
  EvalRequest req;
  req.gradient = true;
  const auto analytic = b.evaluate(p, req).gradient;
  req.gradient_mode = GradientMode::kFiniteDifference;
  const auto fd = b.evaluate(p, req).gradient;
  EXPECT_LT((analytic - fd).cwiseAbs().maxCoeff(), 1e-7);
  req.metric = MetricKind::kFull;
  const auto ev = b.evaluate(p, req);
  EXPECT_LT((ev.qfim - ev.qfim.transpose()).norm(), 1e-12);
  EXPECT_GT(ev.energy, ground->energy);
}
