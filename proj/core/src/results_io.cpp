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
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qng/experiment.hpp"

namespace qng {

namespace {

using nlohmann::json;

// Shortest text that round-trips the double exactly.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_jnum(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json record_to_json(const ResultRecord& r) {
  return json{{"experiment_id", r.experiment_id},
              {"n", r.n},
              {"p", r.p},
              {"method", r.method},
              {"trial", r.trial},
              {"seed", r.seed},
              {"steps", r.steps},
              {"stop_reason", r.stop_reason},
              {"final_energy", jnum(r.final_energy)},
              {"delta_e_opt", jnum(r.delta_e_opt)},
              {"fidelity", jnum(r.fidelity)},
              {"success", r.success},
              {"indefinite_metric_steps", r.indefinite_metric_steps},
              {"wall_time_s", r.wall_time_s},
              {"error", r.error}};
}

ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  r.experiment_id = j.at("experiment_id").get<std::string>();
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<int>();
  r.method = j.at("method").get<std::string>();
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.steps = j.at("steps").get<int>();
  r.stop_reason = j.at("stop_reason").get<std::string>();
  r.final_energy = from_jnum(j.at("final_energy"));
  r.delta_e_opt = from_jnum(j.at("delta_e_opt"));
  r.fidelity = from_jnum(j.at("fidelity"));
  r.success = j.at("success").get<bool>();
  r.indefinite_metric_steps = j.value("indefinite_metric_steps", 0);
  r.wall_time_s = j.value("wall_time_s", 0.0);
  r.error = j.value("error", std::string());
  return r;
}

json summary_to_json(const SummaryRow& s) {
  return json{{"n", s.n},
              {"p", s.p},
              {"method", s.method},
              {"trials", s.trials},
              {"failures", s.failures},
              {"successes", s.successes},
              {"convergence_rate", jnum(s.convergence_rate)},
              {"mean_steps", jnum(s.mean_steps)},
              {"std_steps", jnum(s.std_steps)},
              {"median_delta_e", jnum(s.median_delta_e)},
              {"median_fidelity", jnum(s.median_fidelity)},
              {"max_fidelity", jnum(s.max_fidelity)}};
}

json resolved_to_json(const ExperimentSpec& s) {
  json methods = json::array();
  for (Method m : s.methods) methods.push_back(std::string(to_string(m)));
  json j{{"id", s.id},
         {"protocol", std::string(to_string(s.protocol))},
         {"backend", std::string(to_string(s.backend))},
         {"coupling", s.coupling},
         {"field", s.field},
         {"n_values", s.n_values},
         {"depth_rule", std::string(to_string(s.depth_rule))},
         {"depth_value", s.depth_value},
         {"depth_min", s.depth_min},
         {"extra_layers", s.extra_layers},
         {"trials", s.trials},
         {"methods", methods},
         {"learning_rate", s.optimizer.learning_rate},
         {"max_iters", s.optimizer.max_iters},
         {"eps_stop", s.optimizer.eps_stop},
         {"pinv_rcond", s.optimizer.pinv_rcond},
         {"gradient", std::string(to_string(s.optimizer.gradient_mode))},
         {"fd_step", s.optimizer.fd_step},
         {"success_threshold", s.success_threshold},
         {"init_range", {s.init_low, s.init_high}}};
  if (s.backend == BackendKind::kDigitalNoise) {
    j["calibration"] = json::parse(calibration_to_json(s.calibration()));
  }
  if (s.backend == BackendKind::kAnalog) {
    const auto& a = s.analog;
    j["analog"] = json{{"geometry", a.geometry},
                       {"u_nn", a.u_nn},
                       {"c6", a.c6},
                       {"omega_min", a.compile.omega_min},
                       {"omega_max", a.compile.omega_max},
                       {"detuning", a.compile.detuning == DetuningRule::kMeanField ? "mean-field" : "nearest-neighbor"},
                       {"max_segment_us", a.compile.max_segment_us},
                       {"n_traj", a.n_traj},
                       {"doppler_sigma", a.noise.doppler_sigma},
                       {"laser_waist", a.noise.laser_waist},
                       {"amp_sigma", a.noise.amp_sigma},
                       {"spam_eta", a.noise.spam_eta},
                       {"spam_eps", a.noise.spam_eps},
                       {"spam_eps_prime", a.noise.spam_eps_prime}};
  }
  return j;
}

}  // namespace

std::string to_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << csv_field(r.experiment_id) << ',' << r.n << ',' << r.p << ',' << r.method << ',' << r.trial << ','
        << r.seed << ',' << r.steps << ',' << r.stop_reason << ',' << num(r.final_energy) << ','
        << num(r.delta_e_opt) << ',' << num(r.fidelity) << ',' << (r.success ? 1 : 0) << ',' << csv_field(r.error)
        << "\n";
  }
  return out.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << kSummaryCsvHeader << "\n";
  for (const auto& s : rows) {
    out << s.n << ',' << s.p << ',' << s.method << ',' << s.trials << ',' << s.failures << ',' << s.successes << ','
        << num(s.convergence_rate) << ',' << num(s.mean_steps) << ',' << num(s.std_steps) << ','
        << num(s.median_delta_e) << ',' << num(s.median_fidelity) << ',' << num(s.max_fidelity) << "\n";
  }
  return out.str();
}

std::string to_json(const ExperimentResult& result) {
  json records = json::array();
  for (const auto& r : result.records) records.push_back(record_to_json(r));
  json summary = json::array();
  for (const auto& s : result.summary) summary.push_back(summary_to_json(s));
  json j{{"software", {{"name", "qngbench"}, {"version", std::string(software_version())}}},
         {"experiment_id", result.spec.id},
         {"master_seed", result.spec.master_seed},
         {"manifest", result.spec.manifest_text},
         {"manifest_dir", result.spec.base_dir.string()},
         {"resolved", resolved_to_json(result.spec)},
         {"columns", kCsvHeader},
         {"records", records},
         {"summary", summary},
         {"warnings", result.warnings}};
  return j.dump(2) + "\n";
}

ExperimentResult read_results_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("results: invalid JSON: ") + e.what());
  }
  ExperimentResult out;
  try {
    out.spec = parse_manifest(j.at("manifest").get<std::string>(), j.value("manifest_dir", std::string(".")));
    out.spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& r : j.at("records")) out.records.push_back(record_from_json(r));
    out.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("results: missing or malformed field: ") + e.what());
  }
  out.summary = summarize(out.records);
  return out;
}

std::vector<std::filesystem::path> emit(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = result.spec.id;
  const std::vector<std::pair<std::filesystem::path, std::string>> files{
      {dir / (stem + ".csv"), to_csv(result.records)},
      {dir / (stem + ".summary.csv"), summary_to_csv(result.summary)},
      {dir / (stem + ".json"), to_json(result)}};
  std::vector<std::filesystem::path> paths;
  for (const auto& [path, body] : files) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    if (!f) throw std::runtime_error("write failed for " + path.string());
    paths.push_back(path);
  }
  return paths;
}

}  // namespace qng
