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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qng/optimizer.hpp"
#include "qng/qaoa.hpp"
#include "qng/state.hpp"
#include "qng/tfim.hpp"

namespace qng {

// Units: distance in um, time in us, angular rates in rad/us.

/// C6 for a Rb 70S-like Rydberg state, rad um^6 / us.
inline constexpr double kDefaultC6 = 5.42e6;
/// Effective two-photon wavevector used for the Doppler conversion, rad / um.
inline constexpr double kDopplerKeff = 8.7;
/// Atomic mass used for the Doppler conversion, kg.
inline constexpr double kAtomMass = 1.45e-25;

/// Atom positions plus the cached U_ij = C6 / R_ij^6.
class AtomRegister {
 public:
  AtomRegister(std::vector<Eigen::Vector2d> positions, double c6, std::string geometry = "custom");

  /// Equally spaced line.
  static AtomRegister chain(int n_atoms, double spacing, double c6 = kDefaultC6);

  /// Regular polygon whose side (neighbour distance) is `spacing`.
  static AtomRegister ring(int n_atoms, double spacing, double c6 = kDefaultC6);

  int size() const noexcept { return static_cast<int>(positions_.size()); }
  const std::vector<Eigen::Vector2d>& positions() const noexcept { return positions_; }
  const std::string& geometry() const noexcept { return geometry_; }
  double c6() const noexcept { return c6_; }

  double distance(int i, int j) const;
  double interaction(int i, int j) const { return u_(i, j); }
  const Eigen::MatrixXd& interactions() const noexcept { return u_; }

  /// Number of cached pairs, N (N - 1) / 2.
  int pair_count() const noexcept { return size() * (size() - 1) / 2; }

  /// Largest pair interaction, i.e. the nearest-neighbour U.
  double nearest_neighbor_interaction() const;

  Eigen::Vector2d centroid() const;

 private:
  std::vector<Eigen::Vector2d> positions_;
  double c6_;
  std::string geometry_;
  Eigen::MatrixXd u_;
};

/// R_b = (C6 / omega)^(1/6)
double blockade_radius(double omega, double c6);

/// Spacing that gives nearest-neighbour interaction u_nn.
double spacing_for_interaction(double u_nn, double c6 = kDefaultC6);

/// sigma = k_eff sqrt(k_B T / m) in rad/us for T in microkelvin.
double doppler_sigma_from_temperature(double temperature_uk, double k_eff = kDopplerKeff, double mass = kAtomMass);

/// How the global detuning is chosen during both segment kinds.
enum class DetuningRule {
  kMeanField,        // delta = 1/2 sum_j U_ij, averaged over atoms
  kNearestNeighbor,  // delta = U_nn
};

struct PulseSegment {
  double omega = 0.0;
  double delta = 0.0;
  double duration = 0.0;
  Generator role = Generator::kZZ;  // which QAOA evolution this emulates
  double duration_per_radian = 0.0;  // d duration / d angle
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  double total_duration() const;
};

struct CompileOptions {
  double omega_min = 1.0;
  double omega_max = 15.0;
  DetuningRule detuning = DetuningRule::kMeanField;
  double max_segment_us = 10.0;

  void validate() const;
};

/// Global detuning the rule prescribes for this register.
double compile_detuning(const AtomRegister& reg, DetuningRule rule);

/// 2P segments: gamma -> (omega_min, 4 gamma / U_nn), beta -> (omega_max,
/// 2 beta / omega_max). Angles are first wrapped into [0, pi/2) for gamma and
/// [0, pi) for beta, which changes the ideal unitary only by a global phase.
PulseSchedule compile_schedule(const QaoaParams& params, const AtomRegister& reg, const CompileOptions& opts = {});

struct AnalogNoiseConfig {
  double doppler_sigma = 0.0;   // rad/us
  double laser_waist = 0.0;     // um; 0 disables the waist profile
  double amp_sigma = 0.0;
  double spam_eta = 0.0;        // preparation error
  double spam_eps = 0.0;        // false positive
  double spam_eps_prime = 0.0;  // false negative

  void validate() const;
  bool is_noiseless() const;

  /// 50 uK Doppler, 175 um waist, 5 % amplitude jitter, SPAM 0.005 / 0.01 / 0.05.
  static AnalogNoiseConfig defaults();
};

struct NoiseRealization {
  Eigen::VectorXd detuning_shift;  // per atom
  Eigen::VectorXd omega_factor;    // per atom, waist profile
  std::vector<double> segment_amp; // per segment
  std::vector<bool> prep_error;    // per atom
  std::uint64_t seed = 0;

  static NoiseRealization identity(int n_atoms, int n_segments);
};

NoiseRealization sample_noise(const AnalogNoiseConfig& config, const AtomRegister& reg, int n_segments,
                              std::uint64_t seed);

/// Dense real Hamiltonian of one segment under a realization.
Eigen::MatrixXd segment_hamiltonian(const AtomRegister& reg, const PulseSegment& seg, const NoiseRealization& noise,
                                    std::size_t segment_index);

/// |+> on atoms without a preparation error, |0> (ground) on the others.
StateVector analog_initial_state(const NoiseRealization& noise);

/// Time-ordered evolution by substepped Taylor expansion. The substep count is
/// doubled until halving it moves the state by less than 1e-8.
StateVector evolve_schedule(const AtomRegister& reg, const PulseSchedule& schedule, const NoiseRealization& noise);

/// Per-atom confusion P(read 1 | 0) = eps, P(read 0 | 1) = eps'.
Eigen::VectorXd spam_measure(const Eigen::VectorXd& distribution, const AnalogNoiseConfig& config);

struct MonteCarloResult {
  std::optional<DensityMatrix> rho;  // only for N <= 10
  double energy = 0.0;
  double energy_stderr = 0.0;
  double fidelity = 0.0;
  int n_traj = 0;
};

/// Averages n_traj independent realizations. Trajectory k uses seed
/// derive_seed(seed, {k}).
MonteCarloResult monte_carlo_state(const QaoaParams& params, const TfimSpec& spec, const AtomRegister& reg,
                                   const CompileOptions& opts, const AnalogNoiseConfig& config, int n_traj,
                                   std::uint64_t seed, const GroundState* ground = nullptr);

/// Fixed set of realizations (common random numbers) with cached
/// eigendecompositions of every segment Hamiltonian, so an evaluation costs two
/// dense matrix-vector products per segment and trajectory.
class AnalogBackend final : public Backend {
 public:
  AnalogBackend(const TfimSpec& spec, AtomRegister reg, CompileOptions opts, AnalogNoiseConfig noise, int depth,
                int n_traj, std::uint64_t seed, std::shared_ptr<const GroundState> ground);

  std::string_view name() const override { return "analog"; }
  int n_qubits() const override { return spec_.n_qubits; }
  const GroundState& ground() const override { return *ground_; }
  Evaluation evaluate(const QaoaParams& params, const EvalRequest& request) override;

  int n_traj() const noexcept { return static_cast<int>(realizations_.size()); }
  const AtomRegister& atom_register() const noexcept { return reg_; }

  /// Final states of every trajectory at theta.
  std::vector<StateVector> trajectory_states(const QaoaParams& params) const;

 private:
  struct Spectral {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
  };
  void propagate(Eigen::VectorXcd& psi, const Spectral& s, double t) const;
  void apply_h(const Eigen::VectorXcd& psi, const Spectral& s, Eigen::VectorXcd& out) const;

  TfimSpec spec_;
  HamiltonianOperator hc_;
  AtomRegister reg_;
  CompileOptions opts_;
  AnalogNoiseConfig noise_;
  int depth_;
  std::vector<NoiseRealization> realizations_;
  std::vector<std::vector<Spectral>> cache_;  // [trajectory][segment]
  std::shared_ptr<const GroundState> ground_;
};

}  // namespace qng
