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

#include "qng/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qng {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void schema_error(const std::string& source, const std::string& what) {
  throw std::invalid_argument("calibration " + source + ": " + what);
}

// Times accept a number, null or "inf" (no decay).
double read_time(const json& j, const std::string& source, const char* key) {
  if (j.is_null()) return kInf;
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) return kInf;
  if (!j.is_number()) schema_error(source, std::string(key) + " must be a number, null or \"inf\"");
  return j.get<double>();
}

double read_number(const json& j, const std::string& source, const char* key) {
  if (!j.is_number()) schema_error(source, std::string(key) + " must be a number");
  return j.get<double>();
}

QubitCalibration read_qubit(const json& j, const QubitCalibration& base, const std::string& source) {
  if (!j.is_object()) schema_error(source, "qubit entry must be an object");
  QubitCalibration q = base;
  for (const auto& [key, value] : j.items()) {
    if (key == "t1_us") q.t1_us = read_time(value, source, "t1_us");
    else if (key == "t2_us") q.t2_us = read_time(value, source, "t2_us");
    else if (key == "readout_p10") q.readout_p10 = read_number(value, source, "readout_p10");
    else if (key == "readout_p01") q.readout_p01 = read_number(value, source, "readout_p01");
    else if (key == "index") continue;
    else schema_error(source, "unknown qubit key '" + key + "'");
  }
  return q;
}

GateKind read_kind(const json& j, const std::string& source) {
  if (!j.is_string()) schema_error(source, "gate kind must be a string");
  const auto s = j.get<std::string>();
  if (s == "rx") return GateKind::kRx;
  if (s == "zz") return GateKind::kZZ;
  schema_error(source, "gate kind must be rx or zz, got '" + s + "'");
}

const char* kind_name(GateKind k) { return k == GateKind::kRx ? "rx" : "zz"; }

void read_gate_fields(const json& j, GateCalibration& g, const std::string& source) {
  for (const auto& [key, value] : j.items()) {
    if (key == "error") g.error = read_number(value, source, "error");
    else if (key == "duration_ns") g.duration_ns = read_number(value, source, "duration_ns");
    else if (key == "kind" || key == "qubits") continue;
    else schema_error(source, "unknown gate key '" + key + "'");
  }
}

json time_json(double t) { return std::isinf(t) ? json("inf") : json(t); }

json qubit_json(const QubitCalibration& q) {
  return {{"t1_us", time_json(q.t1_us)},
          {"t2_us", time_json(q.t2_us)},
          {"readout_p10", q.readout_p10},
          {"readout_p01", q.readout_p01}};
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("calibration: " + what + " must lie in [0, 1]");
}

void check_qubit(const QubitCalibration& q, const std::string& where) {
  if (!(q.t1_us > 0.0)) throw std::invalid_argument("calibration: " + where + " T1 must be positive");
  if (!(q.t2_us > 0.0)) throw std::invalid_argument("calibration: " + where + " T2 must be positive");
  if (!std::isinf(q.t2_us) && q.t2_us > 2.0 * q.t1_us) {
    throw std::invalid_argument("calibration: " + where + " violates T2 <= 2 T1 (unphysical relaxation)");
  }
  if (std::isinf(q.t2_us) && !std::isinf(q.t1_us)) {
    throw std::invalid_argument("calibration: " + where + " has infinite T2 with finite T1 (violates T2 <= 2 T1)");
  }
  check_probability(q.readout_p10, where + " readout_p10");
  check_probability(q.readout_p01, where + " readout_p01");
}

void check_gate_cal(const GateCalibration& g, const std::string& where) {
  check_probability(g.error, where + " error");
  if (!(g.duration_ns >= 0.0) || std::isinf(g.duration_ns)) {
    throw std::invalid_argument("calibration: " + where + " duration must be finite and non-negative");
  }
}

const Eigen::Matrix2cd& pauli(int i) {
  static const std::array<Eigen::Matrix2cd, 4> p = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p[static_cast<std::size_t>(i)];
}

// Kronecker product; `high` acts on the more significant bits.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& high, const Eigen::MatrixXcd& low) {
  Eigen::MatrixXcd out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index i = 0; i < high.rows(); ++i) {
    for (Eigen::Index j = 0; j < high.cols(); ++j) {
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- calibration

const QubitCalibration& CalibrationData::qubit(int q) const {
  if (q < 0) throw std::invalid_argument("calibration: negative qubit index");
  const auto i = static_cast<std::size_t>(q);
  if (i < qubits.size() && qubits[i].has_value()) return *qubits[i];
  return default_qubit;
}

const GateCalibration& CalibrationData::gate(GateKind kind, std::span<const int> qs) const {
  for (const auto& g : gates) {
    if (g.kind != kind || g.qubits.size() != qs.size()) continue;
    bool match = std::equal(qs.begin(), qs.end(), g.qubits.begin());
    if (!match && kind == GateKind::kZZ && qs.size() == 2) match = qs[0] == g.qubits[1] && qs[1] == g.qubits[0];
    if (match) return g;
  }
  return kind == GateKind::kRx ? default_rx : default_zz;
}

void CalibrationData::validate() const {
  check_qubit(default_qubit, "defaults");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i]) check_qubit(*qubits[i], "qubit " + std::to_string(i));
  }
  check_gate_cal(default_rx, "default rx");
  check_gate_cal(default_zz, "default zz");
  for (const auto& g : gates) {
    const std::size_t want = g.kind == GateKind::kRx ? 1 : 2;
    if (g.qubits.size() != want) {
      throw std::invalid_argument(std::string("calibration: ") + kind_name(g.kind) + " override needs " +
                                  std::to_string(want) + " qubit(s)");
    }
    for (int q : g.qubits) {
      if (q < 0) throw std::invalid_argument("calibration: negative qubit in gate override");
    }
    if (want == 2 && g.qubits[0] == g.qubits[1]) throw std::invalid_argument("calibration: zz override on one qubit");
    check_gate_cal(g, std::string(kind_name(g.kind)) + " override");
  }
}

CalibrationData CalibrationData::ideal() {
  CalibrationData c;
  c.default_qubit = {kInf, kInf, 0.0, 0.0};
  c.default_rx = {GateKind::kRx, {}, 0.0, 35.0};
  c.default_zz = {GateKind::kZZ, {}, 0.0, 500.0};
  c.source = "ideal";
  return c;
}

CalibrationData CalibrationData::reference() {
  CalibrationData c;
  c.source = "reference";
  return c;
}

CalibrationData parse_calibration(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(source, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error(source, "top level must be an object");
  CalibrationData cal;
  cal.source = source;
  for (const auto& [key, value] : root.items()) {
    if (key != "defaults" && key != "qubits" && key != "gates" && key != "description") {
      schema_error(source, "unknown top-level key '" + key + "'");
    }
  }
  if (!root.contains("defaults")) schema_error(source, "missing 'defaults'");
  const json& d = root["defaults"];
  if (!d.is_object()) schema_error(source, "'defaults' must be an object");
  json qd = json::object();
  for (const auto& [key, value] : d.items()) {
    if (key == "rx" || key == "zz") {
      if (!value.is_object()) schema_error(source, "defaults." + key + " must be an object");
      read_gate_fields(value, key == "rx" ? cal.default_rx : cal.default_zz, source);
    } else {
      qd[key] = value;
    }
  }
  cal.default_qubit = read_qubit(qd, cal.default_qubit, source);

  if (root.contains("qubits")) {
    const json& qs = root["qubits"];
    if (!qs.is_array()) schema_error(source, "'qubits' must be an array");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      std::size_t index = i;
      if (qs[i].is_object() && qs[i].contains("index")) {
        if (!qs[i]["index"].is_number_unsigned()) schema_error(source, "qubit index must be a non-negative integer");
        index = qs[i]["index"].get<std::size_t>();
      }
      if (index >= cal.qubits.size()) cal.qubits.resize(index + 1);
      if (cal.qubits[index]) schema_error(source, "duplicate entry for qubit " + std::to_string(index));
      cal.qubits[index] = read_qubit(qs[i], cal.default_qubit, source);
    }
  }
  if (root.contains("gates")) {
    const json& gs = root["gates"];
    if (!gs.is_array()) schema_error(source, "'gates' must be an array");
    for (const auto& gj : gs) {
      if (!gj.is_object()) schema_error(source, "gate entry must be an object");
      if (!gj.contains("kind") || !gj.contains("qubits")) schema_error(source, "gate entry needs 'kind' and 'qubits'");
      GateCalibration g;
      g.kind = read_kind(gj["kind"], source);
      const GateCalibration& base = g.kind == GateKind::kRx ? cal.default_rx : cal.default_zz;
      g.error = base.error;
      g.duration_ns = base.duration_ns;
      if (!gj["qubits"].is_array()) schema_error(source, "gate 'qubits' must be an array");
      for (const auto& q : gj["qubits"]) {
        if (!q.is_number_integer()) schema_error(source, "gate qubit must be an integer");
        g.qubits.push_back(q.get<int>());
      }
      read_gate_fields(gj, g, source);
      cal.gates.push_back(std::move(g));
    }
  }
  try {
    cal.validate();
  } catch (const std::invalid_argument& e) {
    schema_error(source, e.what());
  }
  return cal;
}

CalibrationData load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("calibration: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str(), path);
}

std::string calibration_to_json(const CalibrationData& cal) {
  json root;
  json d = qubit_json(cal.default_qubit);
  d["rx"] = {{"error", cal.default_rx.error}, {"duration_ns", cal.default_rx.duration_ns}};
  d["zz"] = {{"error", cal.default_zz.error}, {"duration_ns", cal.default_zz.duration_ns}};
  root["defaults"] = d;
  json qs = json::array();
  for (std::size_t i = 0; i < cal.qubits.size(); ++i) {
    if (!cal.qubits[i]) continue;
    json q = qubit_json(*cal.qubits[i]);
    q["index"] = i;
    qs.push_back(q);
  }
  root["qubits"] = qs;
  json gs = json::array();
  for (const auto& g : cal.gates) {
    gs.push_back({{"kind", kind_name(g.kind)}, {"qubits", g.qubits}, {"error", g.error}, {"duration_ns", g.duration_ns}});
  }
  root["gates"] = gs;
  return root.dump(2);
}

// ------------------------------------------------------------------- channels

KrausChannel::KrausChannel(int n_qubits, std::vector<Eigen::MatrixXcd> operators)
    : n_qubits_(n_qubits), ops_(std::move(operators)) {
  if (n_qubits < 1 || n_qubits > 4) throw std::invalid_argument("KrausChannel: 1 to 4 qubits supported");
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: no operators");
  const int d = dim();
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d) throw std::invalid_argument("KrausChannel: operator size mismatch");
  }
  if (completeness_error() > 1e-9) throw std::invalid_argument("KrausChannel: operators are not trace preserving");
}

KrausChannel KrausChannel::identity(int n_qubits) {
  const int d = 1 << n_qubits;
  return KrausChannel(n_qubits, {Eigen::MatrixXcd::Identity(d, d)});
}

double KrausChannel::completeness_error() const {
  const int d = dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd KrausChannel::superoperator() const {
  const int d = dim();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& k : ops_) s += kron(k, k.conjugate());
  return s;
}

Eigen::MatrixXcd choi_from_superop(const Eigen::MatrixXcd& superop, int dim) {
  const int d = dim;
  if (superop.rows() != d * d || superop.cols() != d * d) throw std::invalid_argument("choi: superoperator size mismatch");
  // C[(i, r), (j, c)] = E(|i><j|)_{rc} = S[(r, c), (i, j)]
  Eigen::MatrixXcd c(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < d; ++r)
        for (int cc = 0; cc < d; ++cc) c(i * d + r, j * d + cc) = superop(r * d + cc, i * d + j);
  return c;
}

Eigen::MatrixXcd KrausChannel::choi() const { return choi_from_superop(superoperator(), dim()); }

KrausChannel KrausChannel::compose_after(const KrausChannel& first) const {
  if (first.n_qubits_ != n_qubits_) throw std::invalid_argument("KrausChannel::compose_after: size mismatch");
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto& k : ops_)
    for (const auto& l : first.ops_) ops.push_back(k * l);
  return KrausChannel(n_qubits_, std::move(ops));
}

KrausChannel KrausChannel::tensor(const KrausChannel& other) const {
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto& hi : other.ops_)
    for (const auto& lo : ops_) ops.push_back(kron(hi, lo));
  return KrausChannel(n_qubits_ + other.n_qubits_, std::move(ops));
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  if (rho.n_qubits() != n_qubits_) throw std::invalid_argument("KrausChannel::apply: qubit count mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : ops_) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix(n_qubits_, std::move(out));
}

KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double duration_us) {
  if (!(t1_us > 0.0) || !(t2_us > 0.0)) throw std::invalid_argument("thermal_relaxation: T1 and T2 must be positive");
  if (!(duration_us >= 0.0) || std::isinf(duration_us)) throw std::invalid_argument("thermal_relaxation: bad duration");
  if ((std::isinf(t2_us) && !std::isinf(t1_us)) || (!std::isinf(t2_us) && t2_us > 2.0 * t1_us)) {
    throw std::invalid_argument("thermal_relaxation: T2 must not exceed 2 T1");
  }
  const double gamma = std::isinf(t1_us) ? 0.0 : 1.0 - std::exp(-duration_us / t1_us);
  const double coherence = std::isinf(t2_us) ? 1.0 : std::exp(-duration_us / t2_us);
  // Amplitude damping alone leaves sqrt(1 - gamma) on the coherence.
  const double ad = std::sqrt(1.0 - gamma);
  const double lambda = ad > 0.0 ? std::min(1.0, coherence / ad) : 1.0;
  Eigen::MatrixXcd a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, ad;
  a1 << 0, std::sqrt(gamma), 0, 0;
  const Eigen::MatrixXcd p0 = std::sqrt((1.0 + lambda) / 2.0) * Eigen::MatrixXcd(pauli(0));
  const Eigen::MatrixXcd p1 = std::sqrt((1.0 - lambda) / 2.0) * Eigen::MatrixXcd(pauli(3));
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto* p : {&p0, &p1})
    for (const auto* a : {&a0, &a1}) {
      Eigen::MatrixXcd k = (*p) * (*a);
      if (k.cwiseAbs().maxCoeff() > 0.0) ops.push_back(std::move(k));
    }
  return KrausChannel(1, std::move(ops));
}

KrausChannel depolarizing_channel(double p, int n_qubits) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
  if (n_qubits != 1 && n_qubits != 2) throw std::invalid_argument("depolarizing_channel: 1 or 2 qubits only");
  const int d = 1 << n_qubits;
  const double d2 = static_cast<double>(d * d);
  std::vector<Eigen::MatrixXcd> ops;
  ops.push_back(std::sqrt(1.0 - p * (d2 - 1.0) / d2) * Eigen::MatrixXcd::Identity(d, d));
  if (p == 0.0) return KrausChannel(n_qubits, std::move(ops));
  const double w = std::sqrt(p / d2);
  for (int i = 1; i < d * d; ++i) {
    Eigen::MatrixXcd pm = n_qubits == 1 ? Eigen::MatrixXcd(pauli(i)) : kron(pauli(i / 4), pauli(i % 4));
    ops.push_back(w * pm);
  }
  return KrausChannel(n_qubits, std::move(ops));
}

double process_fidelity(const Eigen::MatrixXcd& superop, int dim) {
  // sum |Tr K|^2 = Tr(sum K (x) conj K)
  return superop.trace().real() / (static_cast<double>(dim) * dim);
}

double process_fidelity(const KrausChannel& channel) {
  double s = 0.0;
  for (const auto& k : channel.operators()) s += std::norm(k.trace());
  return s / (static_cast<double>(channel.dim()) * channel.dim());
}

double average_gate_fidelity(const KrausChannel& channel) {
  const double d = channel.dim();
  return (d * process_fidelity(channel) + 1.0) / (d + 1.0);
}

DepolarizingFit fit_depolarizing(double gate_error, const KrausChannel& relaxation) {
  if (!(gate_error >= 0.0 && gate_error <= 1.0)) throw std::invalid_argument("fit_depolarizing: gate_error outside [0, 1]");
  const int n = relaxation.n_qubits();
  const int d = relaxation.dim();
  const Eigen::MatrixXcd sr = relaxation.superoperator();
  const double a = process_fidelity(sr, d);
  const double b = process_fidelity(Eigen::MatrixXcd(sr * depolarizing_channel(1.0, n).superoperator()), d);
  const double target = ((d + 1.0) * (1.0 - gate_error) - 1.0) / d;
  DepolarizingFit fit;
  if (a - target <= 0.0) {
    fit.p = 0.0;
    if (a - target < -1e-12) {
      fit.feasible = false;
      fit.warning = "relaxation infidelity " + std::to_string(1.0 - (d * a + 1.0) / (d + 1.0)) +
                    " exceeds reported gate error " + std::to_string(gate_error) + "; depolarizing p clamped to 0";
    }
    return fit;
  }
  fit.p = (a - target) / (a - b);
  if (fit.p > 1.0) {
    fit.p = 1.0;
    fit.feasible = false;
    fit.warning = "gate error " + std::to_string(gate_error) + " needs p > 1; depolarizing p clamped to 1";
  }
  return fit;
}

// -------------------------------------------------------------------- readout

ReadoutError ReadoutError::asymmetric(int n_qubits, double p10, double p01) {
  ReadoutError r;
  Eigen::Matrix2d m;
  m << 1.0 - p10, p10, p01, 1.0 - p01;
  r.confusion.assign(static_cast<std::size_t>(n_qubits), m);
  r.validate();
  return r;
}

ReadoutError ReadoutError::symmetric(int n_qubits, double p) { return asymmetric(n_qubits, p, p); }

ReadoutError ReadoutError::from_calibration(const CalibrationData& cal, int n_qubits) {
  ReadoutError r;
  for (int q = 0; q < n_qubits; ++q) {
    const auto& qc = cal.qubit(q);
    Eigen::Matrix2d m;
    m << 1.0 - qc.readout_p10, qc.readout_p10, qc.readout_p01, 1.0 - qc.readout_p01;
    r.confusion.push_back(m);
  }
  r.validate();
  return r;
}

void ReadoutError::validate() const {
  for (const auto& m : confusion) {
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any()) throw std::invalid_argument("ReadoutError: entry outside [0, 1]");
    if (std::abs(m.row(0).sum() - 1.0) > 1e-12 || std::abs(m.row(1).sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("ReadoutError: rows must sum to 1");
    }
  }
}

Eigen::VectorXd apply_readout(const Eigen::VectorXd& probabilities, const ReadoutError& readout) {
  const auto n = static_cast<int>(readout.confusion.size());
  if (probabilities.size() != (Eigen::Index{1} << n)) throw std::invalid_argument("apply_readout: dimension mismatch");
  if (std::abs(probabilities.sum() - 1.0) > 1e-12 || (probabilities.array() < -1e-15).any()) {
    throw std::invalid_argument("apply_readout: input is not a normalized distribution");
  }
  Eigen::VectorXd p = probabilities;
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2d& m = readout.confusion[static_cast<std::size_t>(q)];
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index x = 0; x < p.size(); ++x) {
      if (x & bit) continue;
      const double p0 = p[x], p1 = p[x | bit];
      p[x] = m(0, 0) * p0 + m(1, 0) * p1;
      p[x | bit] = m(0, 1) * p0 + m(1, 1) * p1;
    }
  }
  return p;
}

Eigen::VectorXd basis_distribution(const DensityMatrix& rho) {
  Eigen::VectorXd p = rho.matrix().diagonal().real().cwiseMax(0.0);
  return p / p.sum();
}

namespace kernels {

void apply_superop(Eigen::MatrixXcd& rho, int n_qubits, const Eigen::MatrixXcd& superop, std::span<const int> targets) {
  const std::size_t k = targets.size();
  const std::size_t dk = std::size_t{1} << k;
  const auto d = static_cast<std::size_t>(rho.rows());
  std::vector<std::size_t> offsets(dk, 0);
  for (std::size_t j = 0; j < dk; ++j)
    for (std::size_t l = 0; l < k; ++l)
      if ((j >> l) & 1U) offsets[j] |= std::size_t{1} << targets[l];
  std::size_t tmask = 0;
  for (int t : targets) tmask |= std::size_t{1} << t;
  // Enumerate bases with all target bits clear.
  std::vector<std::size_t> bases;
  bases.reserve(d >> k);
  for (std::size_t x = 0; x < d; ++x)
    if ((x & tmask) == 0) bases.push_back(x);
  (void)n_qubits;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dk * dk)), w(static_cast<Eigen::Index>(dk * dk));
  for (std::size_t rb : bases) {
    for (std::size_t cb : bases) {
      for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b)
          v[static_cast<Eigen::Index>(a * dk + b)] =
              rho(static_cast<Eigen::Index>(rb | offsets[a]), static_cast<Eigen::Index>(cb | offsets[b]));
      w.noalias() = superop * v;
      for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b)
          rho(static_cast<Eigen::Index>(rb | offsets[a]), static_cast<Eigen::Index>(cb | offsets[b])) =
              w[static_cast<Eigen::Index>(a * dk + b)];
    }
  }
}

}  // namespace kernels

}  // namespace qng
