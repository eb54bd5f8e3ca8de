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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qng/experiment.hpp"
#include "qng/random.hpp"

using namespace qng;

namespace {

constexpr const char* kSmall = R"(
id: unit
protocol: convergence
seed: 42
trials: 3
problem:
  n: [3, 2]
depth:
  rule: floor-half
optimizer:
  methods: [qng-full, vanilla]
  max_iters: 300
)";

}  // namespace

TEST(Manifest, ParsesAndResolvesDefaults) {
  const auto s = parse_manifest(kSmall);
  EXPECT_EQ(s.id, "unit");
  EXPECT_EQ(s.protocol, Protocol::kConvergence);
  EXPECT_EQ(s.backend, BackendKind::kNoiseless);
  EXPECT_EQ(s.master_seed, 42u);
  EXPECT_EQ(s.optimizer.eps_stop, 1e-12);
  EXPECT_EQ(s.success_threshold, 1e-9);
  EXPECT_EQ(s.planned_rows(), 2u * 2u * 3u);
  EXPECT_EQ(s.depths_for(3), std::vector<int>{1});
}

TEST(Manifest, NoisyBackendsTightenDefaultsDifferently) {
  const auto s = parse_manifest("id: x\nprotocol: convergence\nproblem: {n: 3}\nbackend: {kind: digital-noise}\n");
  EXPECT_EQ(s.optimizer.eps_stop, 1e-8);
  EXPECT_EQ(s.success_threshold, 1e-6);
}

TEST(Manifest, DepthRules) {
  auto s = parse_manifest(
      "protocol: fidelity-vs-depth\nproblem: {n: {from: 4, to: 6}}\ndepth: {rule: floor-half-plus-one, min: 2, "
      "extra_layers: 1}\n");
  EXPECT_EQ(s.n_values, (std::vector<int>{4, 5, 6}));
  EXPECT_EQ(s.depths_for(6), (std::vector<int>{2, 3, 4, 5}));
  s = parse_manifest("protocol: convergence\nproblem: {n: 4}\ndepth: {value: 3}\n");
  EXPECT_EQ(s.depth_rule, DepthRule::kExplicit);
  EXPECT_EQ(s.depths_for(4), std::vector<int>{3});
}

TEST(Manifest, AnalogSection) {
  const auto s = parse_manifest(R"(
protocol: fidelity-vs-depth
problem: {n: 4}
backend:
  kind: analog
  analog:
    n_traj: 7
    omega_min: 0.5
    noise: {temperature_uk: 0, amp_sigma: 0.1}
)");
  EXPECT_EQ(s.analog.n_traj, 7);
  EXPECT_EQ(s.analog.compile.omega_min, 0.5);
  EXPECT_EQ(s.analog.noise.doppler_sigma, 0.0);
  EXPECT_EQ(s.analog.noise.amp_sigma, 0.1);
  EXPECT_EQ(s.analog.noise.laser_waist, 175.0);  // untouched default
  const auto none = parse_manifest("protocol: convergence\nproblem: {n: 4}\nbackend: {kind: analog, analog: {noise: none}}\n");
  EXPECT_TRUE(none.analog.noise.is_noiseless());
}

TEST(Manifest, RejectsBadInput) {
  EXPECT_THROW(parse_manifest("protocol: convergence\n"), std::invalid_argument);                      // no problem
  EXPECT_THROW(parse_manifest("problem: {n: 4}\n"), std::invalid_argument);                            // no protocol
  EXPECT_THROW(parse_manifest("protocol: sweep\nproblem: {n: 4}\n"), std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: convergence\nproblem: {n: 4}\ntypo: 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: convergence\nproblem: {n: 13}\n"), std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: convergence\nproblem: {n: 11}\nbackend: {kind: digital-noise}\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: convergence\nproblem: {n: 4}\ntrials: 0\n"), std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: convergence\nproblem: {n: 4}\noptimizer: {methods: [adam]}\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: convergence\nproblem: {n: 4}\noptimizer: {learning_rate: -1}\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_manifest("protocol: [\n"), std::invalid_argument);
  EXPECT_THROW(
      parse_manifest("protocol: convergence\nproblem: {n: 4}\nbackend: {kind: digital-noise, calibration: nope.json}\n"),
      std::invalid_argument);
}

TEST(Seeds, TrialSeedIndependentOfMethodAndStable) {
  EXPECT_EQ(trial_seed(1, 4, 2, 0), derive_seed(1, {4, 2, 0}));
  EXPECT_NE(trial_seed(1, 4, 2, 0), trial_seed(1, 4, 2, 1));
  EXPECT_NE(trial_seed(1, 4, 2, 0), trial_seed(2, 4, 2, 0));
  const auto t = initial_theta(trial_seed(1, 4, 2, 0), 2, -1.0, 1.0);
  EXPECT_EQ(t.size(), 4);
  EXPECT_TRUE((t.array() >= -1.0).all() && (t.array() < 1.0).all());
  EXPECT_EQ(t, initial_theta(trial_seed(1, 4, 2, 0), 2, -1.0, 1.0));
}

TEST(Run, SortedPairedAndSerialEqualsParallel) {
  const auto spec = parse_manifest(kSmall);
  const auto serial = run_experiment(spec, {1, true});
  const auto parallel = run_experiment(spec, {3, true});
  ASSERT_EQ(serial.records.size(), 12u);
  EXPECT_EQ(to_csv(serial.records), to_csv(parallel.records));
  EXPECT_EQ(serial.records.front().n, 2);
  EXPECT_EQ(serial.records.front().method, "qng-full");
  EXPECT_EQ(serial.records[3].method, "vanilla");
  // Paired: the same trial index shares its seed across methods.
  EXPECT_EQ(serial.records[0].seed, serial.records[3].seed);
  for (const auto& r : serial.records) EXPECT_TRUE(r.error.empty()) << r.error;
  ASSERT_EQ(serial.summary.size(), 4u);
  EXPECT_EQ(serial.summary[0].trials, 3);
}

TEST(Run, RowFailuresAreRecorded) {
  auto spec = parse_manifest(kSmall);
  spec.backend = BackendKind::kAnalog;
  spec.analog.compile.max_segment_us = 1e-9;  // any nonzero angle overflows a segment
  spec.init_low = 0.5;
  spec.init_high = 0.6;
  const auto r = run_experiment(spec);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.stop_reason, "error");
    EXPECT_FALSE(rec.error.empty());
    EXPECT_FALSE(rec.success);
  }
  EXPECT_EQ(r.summary[0].failures, 3);
  EXPECT_NE(to_csv(r.records).find("nan"), std::string::npos);
}

TEST(Output, CsvHeaderAndJsonRoundTrip) {
  const auto spec = parse_manifest(kSmall);
  const auto res = run_experiment(spec);
  const std::string csv = to_csv(res.records);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(csv.find("wall"), std::string::npos);
  const auto back = read_results_json(to_json(res));
  ASSERT_EQ(back.records.size(), res.records.size());
  for (std::size_t i = 0; i < res.records.size(); ++i) EXPECT_TRUE(back.records[i] == res.records[i]) << i;
  EXPECT_EQ(back.spec.master_seed, spec.master_seed);
  EXPECT_EQ(summary_to_csv(back.summary), summary_to_csv(res.summary));
  EXPECT_THROW(read_results_json("{}"), std::invalid_argument);
}

TEST(Output, EmitWritesThreeFilesAndEnvDefault) {
  const auto dir = std::filesystem::temp_directory_path() / "qng_emit_test";
  std::filesystem::remove_all(dir);
  const auto res = run_experiment(parse_manifest(kSmall));
  const auto paths = emit(res, dir);
  ASSERT_EQ(paths.size(), 3u);
  for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p));
  std::filesystem::remove_all(dir);
  ::setenv(kOutputDirEnv, "/tmp/qng_env_dir", 1);
  EXPECT_EQ(default_output_dir(), std::filesystem::path("/tmp/qng_env_dir"));
  ::setenv(kOutputDirEnv, "", 1);
  EXPECT_EQ(default_output_dir(), std::filesystem::path("results"));
  ::unsetenv(kOutputDirEnv);
}
