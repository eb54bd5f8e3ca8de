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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qng/noise.hpp"
#include "qng/optimizer.hpp"
#include "qng/rydberg.hpp"

namespace qng {

enum class Protocol { kFidelityVsDepth, kConvergence, kAccuracyDistribution };
enum class BackendKind { kNoiseless, kDigitalNoise, kAnalog };
enum class DepthRule { kExplicit, kFloorHalf, kFloorHalfPlusOne };

std::string_view to_string(Protocol p);
std::string_view to_string(BackendKind b);
std::string_view to_string(DepthRule r);

struct AnalogSettings {
  std::string geometry = "ring";  // ring | chain
  double u_nn = 6.0;              // rad/us, sets the spacing
  double c6 = kDefaultC6;
  CompileOptions compile;
  AnalogNoiseConfig noise = AnalogNoiseConfig::defaults();
  std::optional<double> temperature_uk = 50.0;  // when set, overrides noise.doppler_sigma
  int n_traj = 50;

  AtomRegister make_register(int n_atoms) const;
};

/// Everything a run needs, resolved from a manifest.
struct ExperimentSpec {
  std::string id = "experiment";
  Protocol protocol = Protocol::kAccuracyDistribution;
  BackendKind backend = BackendKind::kNoiseless;
  double coupling = 1.0;
  double field = 0.5;
  std::vector<int> n_values;
  DepthRule depth_rule = DepthRule::kFloorHalf;
  int depth_value = 1;   // explicit depth
  int depth_min = 1;     // fidelity-vs-depth lower end
  int extra_layers = 0;  // fidelity-vs-depth upper end = rule + extra
  int trials = 50;
  std::vector<Method> methods{Method::kQngFull};
  OptimizerConfig optimizer;  // method field is overwritten per method
  double success_threshold = 1e-9;
  std::uint64_t master_seed = 0;
  double init_low = -3.141592653589793;
  double init_high = 3.141592653589793;
  std::string calibration_path;  // digital-noise; empty selects the built-in reference values
  AnalogSettings analog;
  std::string manifest_text;     // verbatim source, embedded in JSON output
  std::filesystem::path base_dir;

  /// Throws std::invalid_argument listing the first problem found.
  void validate() const;

  /// Depth(s) this spec runs for N.
  std::vector<int> depths_for(int n) const;
  int rule_depth(int n) const;

  /// Total rows the run will produce.
  std::size_t planned_rows() const;

  CalibrationData calibration() const;
};

/// Parses the YAML manifest format (see manifests/README.md).
ExperimentSpec parse_manifest(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentSpec load_manifest(const std::filesystem::path& path);

/// Per-trial seed: derive_seed(master, {N, P, trial}); identical across methods.
std::uint64_t trial_seed(std::uint64_t master_seed, int n, int p, int trial);

/// Uniform draw in [low, high) for each of the 2P angles.
Eigen::VectorXd initial_theta(std::uint64_t seed, int depth, double low, double high);

struct ResultRecord {
  std::string experiment_id;
  int n = 0;
  int p = 0;
  std::string method;
  int trial = 0;
  std::uint64_t seed = 0;
  int steps = 0;
  std::string stop_reason;  // converged | max-iters | error
  double final_energy = 0.0;
  double delta_e_opt = 0.0;
  double fidelity = 0.0;
  bool success = false;
  int indefinite_metric_steps = 0;
  double wall_time_s = 0.0;  // JSON only; excluded from CSV so tables stay bit-identical
  std::string error;

  friend bool operator==(const ResultRecord& a, const ResultRecord& b);
};

/// Aggregate per (N, P, method).
struct SummaryRow {
  int n = 0;
  int p = 0;
  std::string method;
  int trials = 0;
  int failures = 0;  // rows that ended in an error
  int successes = 0;
  double convergence_rate = 0.0;
  double mean_steps = 0.0;  // over successful trials
  double std_steps = 0.0;
  double median_delta_e = 0.0;
  double median_fidelity = 0.0;
  double max_fidelity = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ResultRecord> records;  // sorted by (N, P, method, trial)
  std::vector<SummaryRow> summary;
  std::vector<std::string> warnings;
};

struct RunOptions {
  int threads = 1;
  bool quiet = true;
};

/// Runs the protocol. Per-row failures are recorded, not thrown.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

/// Frozen CSV column order.
inline constexpr const char* kCsvHeader =
    "experiment_id,n,p,method,trial,seed,steps,stop_reason,final_energy,delta_e_opt,fidelity,success,error";
inline constexpr const char* kSummaryCsvHeader =
    "n,p,method,trials,failures,successes,convergence_rate,mean_steps,std_steps,median_delta_e,median_fidelity,"
    "max_fidelity";

std::string to_csv(const std::vector<ResultRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::string to_json(const ExperimentResult& result);

/// Reads a results JSON file back: spec (re-parsed from the embedded manifest
/// with the recorded seed) and records.
ExperimentResult read_results_json(const std::string& text);

/// Writes <id>.csv, <id>.summary.csv and <id>.json into `dir`; returns the paths.
std::vector<std::filesystem::path> emit(const ExperimentResult& result, const std::filesystem::path& dir);

/// QNG_OUTPUT_DIR if set and non-empty, else "results".
std::filesystem::path default_output_dir();

inline constexpr const char* kOutputDirEnv = "QNG_OUTPUT_DIR";

std::string_view software_version();

}  // namespace qng
