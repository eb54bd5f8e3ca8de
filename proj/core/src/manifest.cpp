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
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "qng/experiment.hpp"

namespace qng {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("manifest: " + where + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(where, "unknown key '" + key + "'");
    }
  }
}

double as_double(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a number");
  const auto s = node.as<std::string>();
  if (s == "pi") return std::numbers::pi;
  if (s == "-pi") return -std::numbers::pi;
  if (s == "inf" || s == ".inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(where, "not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(where, "not a number: '" + s + "'");
  }
}

int as_int(const YAML::Node& node, const std::string& where) {
  const double v = as_double(node, where);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(where, "expected an integer");
  return static_cast<int>(v);
}

std::string as_string(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a string");
  return node.as<std::string>();
}

template <class T, class F>
void read(const YAML::Node& parent, const char* key, const std::string& where, T& out, F conv) {
  if (const YAML::Node n = parent[key]; n) out = conv(n, where + "." + key);
}

Protocol parse_protocol(const std::string& s) {
  if (s == "fidelity-vs-depth") return Protocol::kFidelityVsDepth;
  if (s == "convergence") return Protocol::kConvergence;
  if (s == "accuracy-distribution") return Protocol::kAccuracyDistribution;
  fail("protocol", "unknown protocol '" + s + "'");
}

BackendKind parse_backend(const std::string& s) {
  if (s == "noiseless") return BackendKind::kNoiseless;
  if (s == "digital-noise") return BackendKind::kDigitalNoise;
  if (s == "analog") return BackendKind::kAnalog;
  fail("backend.kind", "unknown backend '" + s + "'");
}

DepthRule parse_depth_rule(const std::string& s) {
  if (s == "explicit") return DepthRule::kExplicit;
  if (s == "floor-half") return DepthRule::kFloorHalf;
  if (s == "floor-half-plus-one") return DepthRule::kFloorHalfPlusOne;
  fail("depth.rule", "unknown rule '" + s + "'");
}

DetuningRule parse_detuning(const std::string& s) {
  if (s == "mean-field") return DetuningRule::kMeanField;
  if (s == "nearest-neighbor") return DetuningRule::kNearestNeighbor;
  fail("backend.analog.detuning", "unknown rule '" + s + "'");
}

std::vector<int> parse_n_values(const YAML::Node& node) {
  std::vector<int> out;
  if (node.IsScalar()) {
    out.push_back(as_int(node, "problem.n"));
  } else if (node.IsSequence()) {
    for (const auto& v : node) out.push_back(as_int(v, "problem.n"));
  } else if (node.IsMap()) {
    check_keys(node, "problem.n", {"from", "to"});
    if (!node["from"] || !node["to"]) fail("problem.n", "range needs 'from' and 'to'");
    const int lo = as_int(node["from"], "problem.n.from");
    const int hi = as_int(node["to"], "problem.n.to");
    if (hi < lo) fail("problem.n", "empty range");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    fail("problem.n", "expected an integer, a list or {from, to}");
  }
  return out;
}

void parse_analog(const YAML::Node& node, AnalogSettings& a) {
  const std::string w = "backend.analog";
  check_keys(node, w,
             {"geometry", "u_nn", "c6", "omega_min", "omega_max", "detuning", "max_segment_us", "n_traj", "noise"});
  read(node, "geometry", w, a.geometry, as_string);
  read(node, "u_nn", w, a.u_nn, as_double);
  read(node, "c6", w, a.c6, as_double);
  read(node, "omega_min", w, a.compile.omega_min, as_double);
  read(node, "omega_max", w, a.compile.omega_max, as_double);
  read(node, "max_segment_us", w, a.compile.max_segment_us, as_double);
  read(node, "n_traj", w, a.n_traj, as_int);
  if (const auto d = node["detuning"]; d) a.compile.detuning = parse_detuning(as_string(d, w + ".detuning"));
  if (const auto n = node["noise"]; n) {
    const std::string wn = w + ".noise";
    if (n.IsScalar()) {
      const auto s = n.as<std::string>();
      if (s == "none") {
        a.noise = AnalogNoiseConfig{};
        a.temperature_uk.reset();
      } else if (s != "default") {
        fail(wn, "expected 'none', 'default' or a mapping");
      }
    } else {
      check_keys(n, wn,
                 {"temperature_uk", "doppler_sigma", "laser_waist", "amp_sigma", "spam_eta", "spam_eps",
                  "spam_eps_prime"});
      if (n["temperature_uk"] && n["doppler_sigma"]) fail(wn, "give temperature_uk or doppler_sigma, not both");
      if (n["doppler_sigma"]) {
        a.temperature_uk.reset();
        a.noise.doppler_sigma = as_double(n["doppler_sigma"], wn + ".doppler_sigma");
      }
      if (n["temperature_uk"]) a.temperature_uk = as_double(n["temperature_uk"], wn + ".temperature_uk");
      read(n, "laser_waist", wn, a.noise.laser_waist, as_double);
      read(n, "amp_sigma", wn, a.noise.amp_sigma, as_double);
      read(n, "spam_eta", wn, a.noise.spam_eta, as_double);
      read(n, "spam_eps", wn, a.noise.spam_eps, as_double);
      read(n, "spam_eps_prime", wn, a.noise.spam_eps_prime, as_double);
    }
  }
  if (a.temperature_uk) {
    if (!(*a.temperature_uk >= 0.0)) fail(w + ".noise.temperature_uk", "must be non-negative");
    a.noise.doppler_sigma = doppler_sigma_from_temperature(*a.temperature_uk);
  }
}

}  // namespace

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::kFidelityVsDepth: return "fidelity-vs-depth";
    case Protocol::kConvergence: return "convergence";
    case Protocol::kAccuracyDistribution: return "accuracy-distribution";
  }
  return "?";
}

std::string_view to_string(BackendKind b) {
  switch (b) {
    case BackendKind::kNoiseless: return "noiseless";
    case BackendKind::kDigitalNoise: return "digital-noise";
    case BackendKind::kAnalog: return "analog";
  }
  return "?";
}

std::string_view to_string(DepthRule r) {
  switch (r) {
    case DepthRule::kExplicit: return "explicit";
    case DepthRule::kFloorHalf: return "floor-half";
    case DepthRule::kFloorHalfPlusOne: return "floor-half-plus-one";
  }
  return "?";
}

AtomRegister AnalogSettings::make_register(int n_atoms) const {
  const double spacing = spacing_for_interaction(u_nn, c6);
  if (geometry == "ring") return AtomRegister::ring(n_atoms, spacing, c6);
  if (geometry == "chain") return AtomRegister::chain(n_atoms, spacing, c6);
  throw std::invalid_argument("analog geometry must be 'ring' or 'chain', got '" + geometry + "'");
}

ExperimentSpec parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("manifest: YAML error: ") + e.what());
  }
  check_keys(root, "<root>",
             {"id", "protocol", "seed", "trials", "problem", "depth", "backend", "optimizer", "success_threshold",
              "init_range"});
  ExperimentSpec s;
  s.manifest_text = text;
  s.base_dir = base_dir;
  read(root, "id", "", s.id, as_string);
  if (!root["protocol"]) fail("protocol", "required");
  s.protocol = parse_protocol(as_string(root["protocol"], "protocol"));
  if (const auto seed = root["seed"]; seed) {
    try {
      s.master_seed = seed.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail("seed", "expected a non-negative integer");
    }
  }
  read(root, "trials", "", s.trials, as_int);

  if (!root["problem"]) fail("problem", "required");
  const auto problem = root["problem"];
  check_keys(problem, "problem", {"n", "coupling", "field"});
  if (!problem["n"]) fail("problem.n", "required");
  s.n_values = parse_n_values(problem["n"]);
  read(problem, "coupling", "problem", s.coupling, as_double);
  read(problem, "field", "problem", s.field, as_double);

  if (const auto depth = root["depth"]; depth) {
    check_keys(depth, "depth", {"rule", "value", "min", "extra_layers"});
    if (depth["rule"]) s.depth_rule = parse_depth_rule(as_string(depth["rule"], "depth.rule"));
    if (depth["value"]) {
      s.depth_value = as_int(depth["value"], "depth.value");
      if (!depth["rule"]) s.depth_rule = DepthRule::kExplicit;
    }
    read(depth, "min", "depth", s.depth_min, as_int);
    read(depth, "extra_layers", "depth", s.extra_layers, as_int);
  }

  if (const auto backend = root["backend"]; backend) {
    check_keys(backend, "backend", {"kind", "calibration", "analog"});
    if (backend["kind"]) s.backend = parse_backend(as_string(backend["kind"], "backend.kind"));
    read(backend, "calibration", "backend", s.calibration_path, as_string);
    if (backend["analog"]) parse_analog(backend["analog"], s.analog);
  }
  const bool noisy = s.backend != BackendKind::kNoiseless;
  s.optimizer.eps_stop = noisy ? 1e-8 : 1e-12;
  s.success_threshold = noisy ? 1e-6 : 1e-9;

  if (const auto opt = root["optimizer"]; opt) {
    const std::string w = "optimizer";
    check_keys(opt, w, {"methods", "learning_rate", "max_iters", "eps_stop", "pinv_rcond", "gradient", "fd_step"});
    if (const auto m = opt["methods"]; m) {
      s.methods.clear();
      if (m.IsScalar()) {
        s.methods.push_back(parse_method(m.as<std::string>()));
      } else if (m.IsSequence()) {
        for (const auto& v : m) s.methods.push_back(parse_method(as_string(v, w + ".methods")));
      } else {
        fail(w + ".methods", "expected a name or a list");
      }
    }
    read(opt, "learning_rate", w, s.optimizer.learning_rate, as_double);
    read(opt, "max_iters", w, s.optimizer.max_iters, as_int);
    read(opt, "eps_stop", w, s.optimizer.eps_stop, as_double);
    read(opt, "pinv_rcond", w, s.optimizer.pinv_rcond, as_double);
    read(opt, "fd_step", w, s.optimizer.fd_step, as_double);
    if (opt["gradient"]) s.optimizer.gradient_mode = parse_gradient_mode(as_string(opt["gradient"], w + ".gradient"));
  }
  read(root, "success_threshold", "", s.success_threshold, as_double);
  if (const auto r = root["init_range"]; r) {
    if (!r.IsSequence() || r.size() != 2) fail("init_range", "expected [low, high]");
    s.init_low = as_double(r[0], "init_range[0]");
    s.init_high = as_double(r[1], "init_range[1]");
  }
  s.validate();
  return s;
}

ExperimentSpec load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), std::filesystem::absolute(path).parent_path());
}

int ExperimentSpec::rule_depth(int n) const {
  switch (depth_rule) {
    case DepthRule::kExplicit: return depth_value;
    case DepthRule::kFloorHalf: return std::max(1, n / 2);
    case DepthRule::kFloorHalfPlusOne: return n / 2 + 1;
  }
  return depth_value;
}

std::vector<int> ExperimentSpec::depths_for(int n) const {
  const int top = rule_depth(n);
  std::vector<int> out;
  if (protocol == Protocol::kFidelityVsDepth) {
    for (int p = std::min(depth_min, top + extra_layers); p <= top + extra_layers; ++p) out.push_back(p);
  } else {
    out.push_back(top + extra_layers);
  }
  return out;
}

std::size_t ExperimentSpec::planned_rows() const {
  std::size_t rows = 0;
  for (int n : n_values) rows += depths_for(n).size();
  return rows * methods.size() * static_cast<std::size_t>(trials);
}

CalibrationData ExperimentSpec::calibration() const {
  if (calibration_path.empty()) return CalibrationData::reference();
  if (calibration_path == "ideal") return CalibrationData::ideal();
  std::filesystem::path p(calibration_path);
  if (p.is_relative()) p = base_dir / p;
  return load_calibration(p.string());
}

void ExperimentSpec::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("manifest: " + what); };
  if (id.empty() || id.find_first_of("/\\") != std::string::npos) bad("id must be non-empty without path separators");
  if (n_values.empty()) bad("problem.n is empty");
  const int n_max = backend == BackendKind::kDigitalNoise ? kMaxDensityQubits : kMaxStateQubits;
  for (int n : n_values) {
    if (n < 2 || n > n_max) {
      bad("problem.n value " + std::to_string(n) + " outside [2, " + std::to_string(n_max) + "] for backend " +
          std::string(to_string(backend)));
    }
  }
  if (std::set<int>(n_values.begin(), n_values.end()).size() != n_values.size()) bad("problem.n has duplicates");
  TfimSpec{2, coupling, field}.validate();
  if (depth_rule == DepthRule::kExplicit && depth_value < 1) bad("depth.value must be at least 1");
  if (depth_min < 1) bad("depth.min must be at least 1");
  if (extra_layers < 0) bad("depth.extra_layers must be non-negative");
  if (trials < 1) bad("trials must be at least 1");
  if (methods.empty()) bad("optimizer.methods is empty");
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) bad("optimizer.methods has duplicates");
  optimizer.validate();
  if (!(success_threshold > 0.0)) bad("success_threshold must be positive");
  if (!(std::isfinite(init_low) && std::isfinite(init_high) && init_low < init_high)) bad("init_range must be finite with low < high");
  if (backend == BackendKind::kAnalog) {
    if (analog.geometry != "ring" && analog.geometry != "chain") bad("backend.analog.geometry must be ring or chain");
    if (!(analog.u_nn > 0.0) || !(analog.c6 > 0.0)) bad("backend.analog.u_nn and c6 must be positive");
    if (analog.n_traj < 1) bad("backend.analog.n_traj must be at least 1");
    analog.compile.validate();
    analog.noise.validate();
  }
  if (backend == BackendKind::kDigitalNoise) (void)calibration();
}

}  // namespace qng
