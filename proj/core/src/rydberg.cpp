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

#include "qng/rydberg.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qng/noise.hpp"
#include "qng/random.hpp"

namespace qng {

namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K

double wrap(double angle, double period) {
  double w = std::fmod(angle, period);
  if (w < 0.0) w += period;
  if (w >= period) w -= period;
  return w;
}

// Diagonal part and per-atom X coefficients of a segment Hamiltonian.
struct SparseSegment {
  Eigen::VectorXd diag;
  Eigen::VectorXd x_coeff;
};

SparseSegment sparse_segment(const AtomRegister& reg, const PulseSegment& seg, const NoiseRealization& noise,
                             std::size_t segment_index) {
  const int n = reg.size();
  if (noise.detuning_shift.size() != n || noise.omega_factor.size() != n ||
      noise.prep_error.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("segment_hamiltonian: realization does not match the register");
  }
  if (segment_index >= noise.segment_amp.size()) throw std::invalid_argument("segment_hamiltonian: segment out of range");
  const Eigen::Index dim = Eigen::Index{1} << n;
  SparseSegment s;
  s.diag = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!((x >> i) & 1)) continue;
      e -= seg.delta + noise.detuning_shift[i];
      for (int j = i + 1; j < n; ++j)
        if ((x >> j) & 1) e += reg.interaction(i, j);
    }
    s.diag[x] = e;
  }
  s.x_coeff.resize(n);
  for (int i = 0; i < n; ++i) {
    const bool frozen = noise.prep_error[static_cast<std::size_t>(i)];
    s.x_coeff[i] = frozen ? 0.0 : 0.5 * seg.omega * noise.segment_amp[segment_index] * noise.omega_factor[i];
  }
  return s;
}

void apply_sparse(const SparseSegment& h, const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
  out = h.diag.cast<cplx>().cwiseProduct(v);
  const auto n = static_cast<int>(h.x_coeff.size());
  for (int i = 0; i < n; ++i) {
    const double c = h.x_coeff[i];
    if (c == 0.0) continue;
    const Eigen::Index bit = Eigen::Index{1} << i;
    for (Eigen::Index x = 0; x < v.size(); ++x) out[x] += c * v[x ^ bit];
  }
}

// e^{-i H t} v by m Taylor substeps, each summed to machine precision.
Eigen::VectorXcd taylor_propagate(const SparseSegment& h, const Eigen::VectorXcd& v, double t, long m) {
  const double dt = t / static_cast<double>(m);
  Eigen::VectorXcd psi = v, term, next;
  for (long step = 0; step < m; ++step) {
    term = psi;
    Eigen::VectorXcd sum = psi;
    for (int k = 1; k < 200; ++k) {
      apply_sparse(h, term, next);
      term = next * cplx(0.0, -dt / k);
      sum += term;
      if (term.norm() < 1e-17 * sum.norm()) break;
    }
    psi = sum;
  }
  return psi;
}

}  // namespace

// ------------------------------------------------------------------- register

AtomRegister::AtomRegister(std::vector<Eigen::Vector2d> positions, double c6, std::string geometry)
    : positions_(std::move(positions)), c6_(c6), geometry_(std::move(geometry)) {
  const int n = size();
  if (n < 2) throw std::invalid_argument("AtomRegister: at least two atoms required");
  if (n > kMaxStateQubits) throw std::invalid_argument("AtomRegister: at most 12 atoms supported");
  if (!(c6 > 0.0)) throw std::invalid_argument("AtomRegister: C6 must be positive");
  u_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double r = distance(i, j);
      if (!(r > 0.0)) throw std::invalid_argument("AtomRegister: coincident atoms");
      u_(i, j) = u_(j, i) = c6_ / std::pow(r, 6);
    }
}

AtomRegister AtomRegister::chain(int n_atoms, double spacing, double c6) {
  if (n_atoms < 2) throw std::invalid_argument("chain register: at least two atoms required");
  if (!(spacing > 0.0)) throw std::invalid_argument("chain register: spacing must be positive");
  std::vector<Eigen::Vector2d> p;
  for (int i = 0; i < n_atoms; ++i) p.emplace_back(i * spacing, 0.0);
  return AtomRegister(std::move(p), c6, "chain");
}

AtomRegister AtomRegister::ring(int n_atoms, double spacing, double c6) {
  if (n_atoms < 2) throw std::invalid_argument("ring register: at least two atoms required");
  if (!(spacing > 0.0)) throw std::invalid_argument("ring register: spacing must be positive");
  const double radius = spacing / (2.0 * std::sin(std::numbers::pi / n_atoms));
  std::vector<Eigen::Vector2d> p;
  for (int i = 0; i < n_atoms; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n_atoms;
    p.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return AtomRegister(std::move(p), c6, "ring");
}

double AtomRegister::distance(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw std::invalid_argument("AtomRegister: atom index out of range");
  return (positions_[static_cast<std::size_t>(i)] - positions_[static_cast<std::size_t>(j)]).norm();
}

double AtomRegister::nearest_neighbor_interaction() const { return u_.maxCoeff(); }

Eigen::Vector2d AtomRegister::centroid() const {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : positions_) c += p;
  return c / static_cast<double>(size());
}

double blockade_radius(double omega, double c6) {
  if (!(omega > 0.0)) throw std::invalid_argument("blockade_radius: omega must be positive");
  if (!(c6 > 0.0)) throw std::invalid_argument("blockade_radius: C6 must be positive");
  return std::pow(c6 / omega, 1.0 / 6.0);
}

double spacing_for_interaction(double u_nn, double c6) {
  if (!(u_nn > 0.0)) throw std::invalid_argument("spacing_for_interaction: U must be positive");
  return std::pow(c6 / u_nn, 1.0 / 6.0);
}

double doppler_sigma_from_temperature(double temperature_uk, double k_eff, double mass) {
  if (!(temperature_uk >= 0.0)) throw std::invalid_argument("doppler_sigma: temperature must be non-negative");
  // m/s equals um/us, so k_eff in rad/um gives rad/us.
  return k_eff * std::sqrt(kBoltzmann * temperature_uk * 1e-6 / mass);
}

// ------------------------------------------------------------------- schedule

double PulseSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void CompileOptions::validate() const {
  if (!(omega_min > 0.0) || !(omega_max > 0.0)) throw std::invalid_argument("compile: Rabi frequencies must be positive");
  if (omega_min > omega_max) throw std::invalid_argument("compile: omega_min exceeds omega_max");
  if (!(max_segment_us > 0.0)) throw std::invalid_argument("compile: max_segment_us must be positive");
}

double compile_detuning(const AtomRegister& reg, DetuningRule rule) {
  if (rule == DetuningRule::kNearestNeighbor) return reg.nearest_neighbor_interaction();
  // Cancels the single-site Z field -1/4 sum_j U_ij Z_i on average.
  return 0.5 * reg.interactions().sum() / reg.size();
}

PulseSchedule compile_schedule(const QaoaParams& params, const AtomRegister& reg, const CompileOptions& opts) {
  params.validate();
  opts.validate();
  const double u_nn = reg.nearest_neighbor_interaction();
  const double delta = compile_detuning(reg, opts.detuning);
  PulseSchedule s;
  for (int k = 0; k < params.size(); ++k) {
    PulseSegment seg;
    seg.role = QaoaParams::generator(k);
    seg.delta = delta;
    if (seg.role == Generator::kZZ) {
      // U/4 Z_i Z_j from U n_i n_j, so e^{-i gamma H_zz} needs t = 4 gamma / U.
      seg.omega = opts.omega_min;
      seg.duration_per_radian = 4.0 / u_nn;
      seg.duration = seg.duration_per_radian * wrap(params.theta[k], std::numbers::pi / 2.0);
    } else {
      seg.omega = opts.omega_max;
      seg.duration_per_radian = 2.0 / opts.omega_max;
      seg.duration = seg.duration_per_radian * wrap(params.theta[k], std::numbers::pi);
    }
    if (seg.duration > opts.max_segment_us) {
      throw std::invalid_argument("compile_schedule: segment duration exceeds max_segment_us");
    }
    s.segments.push_back(seg);
  }
  return s;
}

// ---------------------------------------------------------------------- noise

void AnalogNoiseConfig::validate() const {
  if (!(doppler_sigma >= 0.0) || !(amp_sigma >= 0.0)) throw std::invalid_argument("analog noise: sigmas must be >= 0");
  if (!(laser_waist >= 0.0)) throw std::invalid_argument("analog noise: laser_waist must be >= 0");
  for (double p : {spam_eta, spam_eps, spam_eps_prime}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("analog noise: SPAM probabilities must lie in [0, 1]");
  }
}

bool AnalogNoiseConfig::is_noiseless() const {
  return doppler_sigma == 0.0 && laser_waist == 0.0 && amp_sigma == 0.0 && spam_eta == 0.0 && spam_eps == 0.0 &&
         spam_eps_prime == 0.0;
}

AnalogNoiseConfig AnalogNoiseConfig::defaults() {
  AnalogNoiseConfig c;
  c.doppler_sigma = doppler_sigma_from_temperature(50.0);
  c.laser_waist = 175.0;
  c.amp_sigma = 0.05;
  c.spam_eta = 0.005;
  c.spam_eps = 0.01;
  c.spam_eps_prime = 0.05;
  return c;
}

NoiseRealization NoiseRealization::identity(int n_atoms, int n_segments) {
  NoiseRealization r;
  r.detuning_shift = Eigen::VectorXd::Zero(n_atoms);
  r.omega_factor = Eigen::VectorXd::Ones(n_atoms);
  r.segment_amp.assign(static_cast<std::size_t>(n_segments), 1.0);
  r.prep_error.assign(static_cast<std::size_t>(n_atoms), false);
  return r;
}

NoiseRealization sample_noise(const AnalogNoiseConfig& config, const AtomRegister& reg, int n_segments,
                              std::uint64_t seed) {
  config.validate();
  if (n_segments < 0) throw std::invalid_argument("sample_noise: negative segment count");
  const int n = reg.size();
  NoiseRealization r = NoiseRealization::identity(n, n_segments);
  r.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Fixed draw order: Doppler per atom, amplitude per segment, prep per atom.
  for (int i = 0; i < n; ++i) {
    const double z = normal(rng);
    r.detuning_shift[i] = config.doppler_sigma * z;
  }
  for (int s = 0; s < n_segments; ++s) {
    const double z = normal(rng);
    r.segment_amp[static_cast<std::size_t>(s)] = 1.0 + config.amp_sigma * z;
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double u = uniform(rng);
    r.prep_error[static_cast<std::size_t>(i)] = u < config.spam_eta;
  }
  if (config.laser_waist > 0.0) {
    const Eigen::Vector2d c = reg.centroid();
    const double w2 = config.laser_waist * config.laser_waist;
    for (int i = 0; i < n; ++i) {
      r.omega_factor[i] = std::exp(-(reg.positions()[static_cast<std::size_t>(i)] - c).squaredNorm() / w2);
    }
  }
  return r;
}

Eigen::MatrixXd segment_hamiltonian(const AtomRegister& reg, const PulseSegment& seg, const NoiseRealization& noise,
                                    std::size_t segment_index) {
  const SparseSegment s = sparse_segment(reg, seg, noise, segment_index);
  const Eigen::Index dim = s.diag.size();
  Eigen::MatrixXd h = s.diag.asDiagonal();
  for (int i = 0; i < reg.size(); ++i) {
    const Eigen::Index bit = Eigen::Index{1} << i;
    for (Eigen::Index x = 0; x < dim; ++x) h(x ^ bit, x) += s.x_coeff[i];
  }
  return h;
}

StateVector analog_initial_state(const NoiseRealization& noise) {
  const auto n = static_cast<int>(noise.prep_error.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  int good = 0;
  Eigen::Index frozen_mask = 0;
  for (int i = 0; i < n; ++i) {
    if (noise.prep_error[static_cast<std::size_t>(i)]) frozen_mask |= Eigen::Index{1} << i;
    else ++good;
  }
  const double amp = std::pow(2.0, -0.5 * good);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index x = 0; x < dim; ++x)
    if ((x & frozen_mask) == 0) v[x] = amp;
  return StateVector(n, std::move(v));
}

StateVector evolve_schedule(const AtomRegister& reg, const PulseSchedule& schedule, const NoiseRealization& noise) {
  Eigen::VectorXcd psi = analog_initial_state(noise).amplitudes();
  constexpr double kTol = 1e-8;
  constexpr int kMaxDoublings = 12;
  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const PulseSegment& seg = schedule.segments[s];
    if (seg.duration < 0.0) throw std::invalid_argument("evolve_schedule: negative duration");
    if (seg.duration == 0.0) continue;
    const SparseSegment h = sparse_segment(reg, seg, noise, s);
    const double norm_bound = h.diag.cwiseAbs().maxCoeff() + h.x_coeff.cwiseAbs().sum();
    long m = std::max(1L, static_cast<long>(std::ceil(norm_bound * seg.duration / 0.5)));
    Eigen::VectorXcd coarse = taylor_propagate(h, psi, seg.duration, m);
    bool ok = false;
    for (int d = 0; d < kMaxDoublings; ++d) {
      m *= 2;
      Eigen::VectorXcd fine = taylor_propagate(h, psi, seg.duration, m);
      const double diff = (fine - coarse).norm();
      coarse = std::move(fine);
      if (diff < kTol) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("evolve_schedule: integration tolerance not met");
    psi = std::move(coarse);
  }
  psi.normalize();
  return StateVector(reg.size(), std::move(psi));
}

Eigen::VectorXd spam_measure(const Eigen::VectorXd& distribution, const AnalogNoiseConfig& config) {
  config.validate();
  int n = 0;
  while ((Eigen::Index{1} << n) < distribution.size()) ++n;
  return apply_readout(distribution, ReadoutError::asymmetric(n, config.spam_eps, config.spam_eps_prime));
}

MonteCarloResult monte_carlo_state(const QaoaParams& params, const TfimSpec& spec, const AtomRegister& reg,
                                   const CompileOptions& opts, const AnalogNoiseConfig& config, int n_traj,
                                   std::uint64_t seed, const GroundState* ground) {
  if (n_traj < 1) throw std::invalid_argument("monte_carlo_state: n_traj must be at least 1");
  if (reg.size() != spec.n_qubits) throw std::invalid_argument("monte_carlo_state: register and spec sizes differ");
  const PulseSchedule schedule = compile_schedule(params, reg, opts);
  const HamiltonianOperator hc = build_hc(spec);
  const int n = spec.n_qubits;
  const bool want_rho = n <= kMaxDensityQubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd sum, comp;
  if (want_rho) {
    sum = Eigen::MatrixXcd::Zero(dim, dim);
    comp = Eigen::MatrixXcd::Zero(dim, dim);
  }
  double e_sum = 0.0, e_sq = 0.0, f_sum = 0.0;
  for (int k = 0; k < n_traj; ++k) {
    const auto noise = sample_noise(config, reg, static_cast<int>(schedule.segments.size()),
                                    derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    const StateVector psi = evolve_schedule(reg, schedule, noise);
    const double e = expectation(psi, hc);
    e_sum += e;
    e_sq += e * e;
    if (ground != nullptr) f_sum += ground->fidelity(psi);
    if (want_rho) {
      // Kahan summation keeps the average independent of trajectory count drift.
      const Eigen::MatrixXcd y = psi.amplitudes() * psi.amplitudes().adjoint() - comp;
      const Eigen::MatrixXcd t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  MonteCarloResult r;
  r.n_traj = n_traj;
  r.energy = e_sum / n_traj;
  if (n_traj > 1) {
    const double var = std::max(0.0, (e_sq - n_traj * r.energy * r.energy) / (n_traj - 1));
    r.energy_stderr = std::sqrt(var / n_traj);
  }
  r.fidelity = f_sum / n_traj;
  if (want_rho) {
    Eigen::MatrixXcd rho = sum / static_cast<double>(n_traj);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    r.rho.emplace(n, std::move(rho));
  }
  return r;
}

}  // namespace qng
