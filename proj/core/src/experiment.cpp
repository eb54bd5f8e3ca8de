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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "qng/experiment.hpp"
#include "qng/random.hpp"

namespace qng {

namespace {

// Label that separates the analog noise stream from the initial-angle stream.
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

struct Task {
  int n;
  int p;
  Method method;
  int trial;
};

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

bool operator==(const ResultRecord& a, const ResultRecord& b) {
  // wall_time_s is deliberately ignored.
  return a.experiment_id == b.experiment_id && a.n == b.n && a.p == b.p && a.method == b.method &&
         a.trial == b.trial && a.seed == b.seed && a.steps == b.steps && a.stop_reason == b.stop_reason &&
         same_double(a.final_energy, b.final_energy) && same_double(a.delta_e_opt, b.delta_e_opt) &&
         same_double(a.fidelity, b.fidelity) && a.success == b.success &&
         a.indefinite_metric_steps == b.indefinite_metric_steps && a.error == b.error;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int n, int p, int trial) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(p),
                                   static_cast<std::uint64_t>(trial)});
}

Eigen::VectorXd initial_theta(std::uint64_t seed, int depth, double low, double high) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(low, high);
  Eigen::VectorXd theta(2 * depth);
  for (Eigen::Index k = 0; k < theta.size(); ++k) theta[k] = dist(rng);
  return theta;
}

std::string_view software_version() { return QNG_VERSION; }

std::filesystem::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  if (env != nullptr && *env != '\0') return env;
  return "results";
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  ExperimentResult result;
  result.spec = spec;

  std::vector<Method> methods = spec.methods;
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return to_string(a) < to_string(b); });
  std::vector<int> ns = spec.n_values;
  std::sort(ns.begin(), ns.end());

  std::vector<Task> tasks;
  for (int n : ns)
    for (int p : spec.depths_for(n))
      for (Method m : methods)
        for (int t = 0; t < spec.trials; ++t) tasks.push_back({n, p, m, t});

  std::map<int, std::shared_ptr<const GroundState>> grounds;
  for (int n : ns) {
    grounds[n] = std::make_shared<const GroundState>(exact_diagonalize(TfimSpec{n, spec.coupling, spec.field}));
  }
  const CalibrationData cal =
      spec.backend == BackendKind::kDigitalNoise ? spec.calibration() : CalibrationData::ideal();

  result.records.resize(tasks.size());
  std::set<std::string> warnings;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};

  auto run_one = [&](const Task& task, ResultRecord& rec) {
    rec.experiment_id = spec.id;
    rec.n = task.n;
    rec.p = task.p;
    rec.method = std::string(to_string(task.method));
    rec.trial = task.trial;
    rec.seed = trial_seed(spec.master_seed, task.n, task.p, task.trial);
    const auto start = std::chrono::steady_clock::now();
    try {
      const TfimSpec tfim{task.n, spec.coupling, spec.field};
      const auto& ground = grounds.at(task.n);
      std::unique_ptr<Backend> backend;
      switch (spec.backend) {
        case BackendKind::kNoiseless:
          backend = std::make_unique<NoiselessBackend>(tfim, ground);
          break;
        case BackendKind::kDigitalNoise: {
          auto b = std::make_unique<DigitalNoiseBackend>(tfim, cal, ground);
          if (!b->circuit().warnings().empty()) {
            std::lock_guard lock(mu);
            warnings.insert(b->circuit().warnings().begin(), b->circuit().warnings().end());
          }
          backend = std::move(b);
          break;
        }
        case BackendKind::kAnalog:
          backend = std::make_unique<AnalogBackend>(tfim, spec.analog.make_register(task.n), spec.analog.compile,
                                                    spec.analog.noise, task.p, spec.analog.n_traj,
                                                    derive_seed(rec.seed, {kNoiseStream}), ground);
          break;
      }
      OptimizerConfig cfg = spec.optimizer;
      cfg.method = task.method;
      const RunResult run =
          optimize(initial_theta(rec.seed, task.p, spec.init_low, spec.init_high), cfg, *backend);
      rec.steps = run.steps_taken;
      rec.stop_reason = std::string(to_string(run.stop_reason));
      rec.final_energy = run.final_energy;
      rec.delta_e_opt = run.best_accuracy;
      rec.fidelity = run.best_fidelity;
      rec.success = run.success(spec.success_threshold);
      rec.indefinite_metric_steps = run.indefinite_metric_steps;
    } catch (const std::exception& e) {
      rec.stop_reason = "error";
      rec.error = e.what();
      rec.final_energy = rec.delta_e_opt = rec.fidelity = std::numeric_limits<double>::quiet_NaN();
      rec.success = false;
    }
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      run_one(tasks[i], result.records[i]);
      const std::size_t d = ++done;
      if (!options.quiet) {
        std::lock_guard lock(mu);
        const auto& r = result.records[i];
        std::cerr << "[" << d << "/" << tasks.size() << "] N=" << r.n << " P=" << r.p << " " << r.method
                  << " trial=" << r.trial << " steps=" << r.steps << " dE=" << r.delta_e_opt << "\n";
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.warnings.assign(warnings.begin(), warnings.end());
  result.summary = summarize(result.records);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  std::map<std::tuple<int, int, std::string>, std::vector<const ResultRecord*>> groups;
  for (const auto& r : records) groups[{r.n, r.p, r.method}].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [key, rows] : groups) {
    SummaryRow s;
    std::tie(s.n, s.p, s.method) = key;
    s.trials = static_cast<int>(rows.size());
    std::vector<double> de, fid, steps;
    s.max_fidelity = std::numeric_limits<double>::quiet_NaN();
    for (const auto* r : rows) {
      if (r->stop_reason == "error") {
        ++s.failures;
        continue;
      }
      de.push_back(r->delta_e_opt);
      fid.push_back(r->fidelity);
      if (std::isnan(s.max_fidelity) || r->fidelity > s.max_fidelity) s.max_fidelity = r->fidelity;
      if (r->success) {
        ++s.successes;
        steps.push_back(r->steps);
      }
    }
    s.convergence_rate = static_cast<double>(s.successes) / s.trials;
    if (steps.empty()) {
      s.mean_steps = s.std_steps = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double v : steps) sum += v;
      s.mean_steps = sum / static_cast<double>(steps.size());
      double var = 0.0;
      for (double v : steps) var += (v - s.mean_steps) * (v - s.mean_steps);
      s.std_steps = steps.size() > 1 ? std::sqrt(var / static_cast<double>(steps.size() - 1)) : 0.0;
    }
    s.median_delta_e = median(de);
    s.median_fidelity = median(fid);
    out.push_back(s);
  }
  return out;
}

}  // namespace qng
