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

// Acceptance checks. Prints one PASS/FAIL line per criterion; `--only K` runs a
// single criterion so ctest can time them separately.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qng/experiment.hpp"
#include "qng/metric.hpp"
#include "qng/noise.hpp"
#include "qng/optimizer.hpp"
#include "qng/rydberg.hpp"

using namespace qng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const SummaryRow* find_row(const std::vector<SummaryRow>& rows, int n, const std::string& method) {
  for (const auto& r : rows)
    if (r.n == n && r.method == method) return &r;
  return nullptr;
}

// 1. Closed-form ground energy against exact diagonalization.
Outcome exact_energy() {
  Outcome o;
  double worst = 0.0;
  for (int n = 3; n <= 12; ++n)
    for (double h : {0.3, 0.5, 1.0}) {
      const TfimSpec spec{n, 1.0, h};
      worst = std::max(worst, std::abs(exact_ground_energy(spec) - exact_diagonalize(spec).energy));
    }
  o.pass = worst <= 1e-9;
  o.detail = "max |closed - ED| = " + fmt("%.2e", worst) + " over N=3..12, h in {0.3,0.5,1}";
  return o;
}

// 2. Pure QFIM against the overlap oracle; mixed formula on pure embeddings.
Outcome qfim() {
  Outcome o;
  std::mt19937_64 rng(2002);
  double worst_fd = 0.0, worst_mixed = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 3, depth = 1 + (k / 3) % 2;
    const Eigen::VectorXd theta = oracle::random_theta(rng, 2 * depth);
    const QaoaParams p(depth, theta);
    const auto trace = *evolve(p, prepare_plus(n), true).trace;
    const auto f = qfim_pure_full(trace, p);
    const auto fd =
        oracle::fubini_study_fd([&](const Eigen::VectorXd& t) { return oracle::qaoa_state(n, t); }, theta);
    worst_fd = std::max(worst_fd, (f - fd).cwiseAbs().maxCoeff());
    AnsatzTrace<DensityMatrix> mixed;
    for (const auto& s : trace.states) mixed.states.push_back(DensityMatrix::pure(s));
    mixed.generators = trace.generators;
    worst_mixed = std::max(worst_mixed, (qfim_mixed_full(mixed, p) - f).cwiseAbs().maxCoeff());
  }
  o.pass = worst_fd <= 1e-5 && worst_mixed <= 1e-10;
  o.detail = "max |F - F_fd| = " + fmt("%.2e", worst_fd) + ", max |F_mixed - F_pure| = " + fmt("%.2e", worst_mixed) +
             " over 50 draws";
  return o;
}

// 3. Analytic gradient against central differences of the dense oracle.
Outcome gradient() {
  Outcome o;
  std::mt19937_64 rng(3003);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 4, depth = 1 + (k / 4) % 3;
    const TfimSpec spec{n, 1.0, 0.5};
    const oracle::Mat h = oracle::tfim(n, 1.0, 0.5);
    const Eigen::VectorXd theta = oracle::random_theta(rng, 2 * depth);
    const auto fd = gradient_fd(
        theta, [&](const Eigen::VectorXd& t) { return oracle::energy(h, oracle::qaoa_state(n, t)); }, 1e-5);
    worst = std::max(worst, (gradient_analytic(QaoaParams(depth, theta), spec) - fd).cwiseAbs().maxCoeff());
  }
  o.pass = worst <= 1e-6;
  o.detail = "max |analytic - fd| = " + fmt("%.2e", worst) + " over 100 cases";
  return o;
}

// 4. Noiseless optimization reaches the ground state at P = floor(N/2).
Outcome noiseless_depth() {
  Outcome o;
  std::ostringstream d;
  for (int n : {4, 6, 8}) {
    const TfimSpec spec{n, 1.0, 0.5};
    NoiselessBackend b(spec);
    OptimizerConfig cfg;
    double best_f = 0.0, best_de = 1.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto r = optimize(initial_theta(trial_seed(4004, n, n / 2, trial), n / 2, -M_PI, M_PI), cfg, b);
      if (r.best_accuracy < best_de) {
        best_de = r.best_accuracy;
        best_f = r.best_fidelity;
      }
    }
    const bool ok = best_f >= 1.0 - 1e-9 && best_de < 1e-9;
    o.pass = o.pass && ok;
    d << "N=" << n << " F=" << fmt("%.12f", best_f) << " dE=" << fmt("%.1e", best_de) << "; ";
  }
  o.detail = d.str();
  return o;
}

ExperimentSpec convergence_spec() {
  ExperimentSpec s;
  s.id = "acceptance-convergence";
  s.protocol = Protocol::kConvergence;
  s.backend = BackendKind::kNoiseless;
  s.n_values = {2, 3, 4, 5, 6, 7, 8};
  s.depth_rule = DepthRule::kFloorHalf;
  s.trials = 50;
  s.methods = {Method::kVanilla, Method::kQngFull};
  s.master_seed = 5005;
  return s;
}

// 5. Optimizer comparison on the noiseless chain.
Outcome optimizer_comparison() {
  Outcome o;
  const auto res = run_experiment(convergence_spec());
  std::ostringstream d;
  for (int n = 2; n <= 8; ++n) {
    const auto* q = find_row(res.summary, n, "qng-full");
    const auto* v = find_row(res.summary, n, "vanilla");
    bool ok = q->successes >= 48;
    if (n >= 6) ok = ok && v->convergence_rate < q->convergence_rate && q->mean_steps < v->mean_steps;
    o.pass = o.pass && ok;
    d << "N=" << n << " qng " << q->successes << "/50 (" << fmt("%.0f", q->mean_steps) << " steps) vanilla "
      << v->successes << "/50 (" << fmt("%.0f", v->mean_steps) << " steps)" << (ok ? "" : " <-") << "; ";
  }
  o.detail = d.str();
  return o;
}

// 6. Digital noise model in the noise-free limit equals the statevector path.
Outcome noise_free_limit() {
  Outcome o;
  std::mt19937_64 rng(6006);
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const TfimSpec spec{n, 1.0, 0.5};
    auto ground = std::make_shared<const GroundState>(exact_diagonalize(spec));
    DigitalNoiseBackend digital(spec, CalibrationData::ideal(), ground);
    NoiselessBackend pure(spec, ground);
    for (int depth = 1; depth <= 3; ++depth) {
      const QaoaParams p(depth, oracle::random_theta(rng, 2 * depth));
      worst = std::max(worst, std::abs(digital.evaluate(p, {}).energy - pure.evaluate(p, {}).energy));
    }
  }
  o.pass = worst <= 1e-10;
  o.detail = "max |E_digital - E_noiseless| = " + fmt("%.2e", worst) + " for N=2..6, P=1..3";
  return o;
}

// 7. Physicality of every channel built from random calibrations, and the fit round trip.
Outcome channel_physicality() {
  Outcome o;
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_tp = 0.0, worst_cp = 0.0, worst_fit = 0.0;
  int fits = 0;
  auto min_eig = [](const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
    return es.eigenvalues()[0];
  };
  for (int draw = 0; draw < 200; ++draw) {
    const double t1 = 5.0 + 500.0 * u(rng);
    const double t2 = 2.0 * t1 * (0.01 + 0.99 * u(rng));
    const double t1b = 5.0 + 500.0 * u(rng);
    const double t2b = 2.0 * t1b * (0.01 + 0.99 * u(rng));
    const double dur = 2.0 * u(rng);
    const int nq = 1 + draw % 2;
    KrausChannel relax = thermal_relaxation_channel(t1, t2, dur);
    if (nq == 2) relax = relax.tensor(thermal_relaxation_channel(t1b, t2b, dur));
    const double floor_err = 1.0 - average_gate_fidelity(relax);
    const double e = floor_err + 0.1 * u(rng);
    const auto fit = fit_depolarizing(e, relax);
    const auto dep = depolarizing_channel(fit.p, nq);
    const auto composite = relax.compose_after(dep);
    for (const KrausChannel* ch : std::vector<const KrausChannel*>{&relax, &dep, &composite}) {
      worst_tp = std::max(worst_tp, ch->completeness_error());
      worst_cp = std::max(worst_cp, -min_eig(ch->choi()));
    }
    if (fit.feasible) {
      const double dim = 1 << nq;
      const double f_avg = (dim * oracle::process_fidelity(composite.operators()) + 1.0) / (dim + 1.0);
      worst_fit = std::max(worst_fit, std::abs((1.0 - f_avg) - e));
      ++fits;
    }
  }
  o.pass = worst_tp <= 1e-9 && worst_cp <= 1e-8 && worst_fit <= 1e-9 && fits == 200;
  o.detail = "max completeness error " + fmt("%.1e", worst_tp) + ", most negative Choi eigenvalue " +
             fmt("%.1e", -worst_cp) + ", max fit error " + fmt("%.1e", worst_fit) + " (" + std::to_string(fits) +
             " fits)";
  return o;
}

// 8. Reference calibration: no method reaches the ground state, and methods agree.
Outcome noisy_digital() {
  Outcome o;
  ExperimentSpec s;
  s.id = "acceptance-digital";
  s.protocol = Protocol::kAccuracyDistribution;
  s.backend = BackendKind::kDigitalNoise;
  s.n_values = {4, 5, 6};
  s.trials = 8;
  s.methods = {Method::kVanilla, Method::kQngDiag, Method::kQngFull};
  s.optimizer.eps_stop = 1e-8;
  s.success_threshold = 1e-6;
  s.master_seed = 8008;
  s.base_dir = QNG_SOURCE_DIR;
  s.calibration_path = "data/reference_calibration.json";
  const auto res = run_experiment(s);
  int reached = 0, errors = 0;
  for (const auto& r : res.records) {
    reached += r.delta_e_opt < 1e-6;
    errors += r.stop_reason == "error";
  }
  std::ostringstream d;
  bool agree = true;
  for (int n : s.n_values) {
    double lo = INFINITY, hi = 0.0;
    d << "N=" << n;
    for (const char* m : {"vanilla", "qng-diag", "qng-full"}) {
      const double med = find_row(res.summary, n, m)->median_delta_e;
      lo = std::min(lo, med);
      hi = std::max(hi, med);
      d << " " << m << "=" << fmt("%.3g", med);
    }
    agree = agree && hi <= 3.0 * lo;
    d << "; ";
  }
  o.pass = reached == 0 && agree && errors == 0;
  o.detail = std::to_string(reached) + " rows below 1e-6; medians " + d.str();
  return o;
}

// 9. Analog compilation quality and the Omega_min trend of the gamma segment.
Outcome analog_compile() {
  Outcome o;
  const int n = 4;
  const auto reg = AtomRegister::ring(n, spacing_for_interaction(6.0));
  const auto noise = NoiseRealization::identity(n, 4);
  std::mt19937_64 rng(9009);
  double worst = 1.0;
  for (int k = 0; k < 10; ++k) {
    const QaoaParams p(2, oracle::random_theta(rng, 4, 0.0, 0.05));
    const auto analog = evolve_schedule(reg, compile_schedule(p, reg), noise);
    const auto ideal = evolve(p, prepare_plus(n)).state;
    worst = std::min(worst, fidelity(analog, ideal));
  }
  // Single gamma segment error for a sweep of Omega_min.
  const QaoaParams one(1, (Eigen::VectorXd(2) << 0.4, 0.0).finished());
  const auto ideal = evolve(one, prepare_plus(n)).state;
  std::vector<double> errs;
  for (double om : {2.0, 1.0, 0.5}) {
    CompileOptions opts;
    opts.omega_min = om;
    const auto sched = compile_schedule(one, reg, opts);
    PulseSchedule gamma_only;
    gamma_only.segments = {sched.segments[0]};
    errs.push_back(1.0 - fidelity(evolve_schedule(reg, gamma_only, NoiseRealization::identity(n, 1)), ideal));
  }
  const bool monotone = errs[0] > errs[1] && errs[1] > errs[2];
  o.pass = worst >= 0.99 && monotone;
  o.detail = "min compile fidelity " + fmt("%.5f", worst) + " (angles in [0, 0.05)); gamma-segment error at Omega_min " +
             "2/1/0.5: " + fmt("%.2e", errs[0]) + "/" + fmt("%.2e", errs[1]) + "/" + fmt("%.2e", errs[2]);
  return o;
}

// 10. Analog depth ordering under the default noise model. The first property
// compares the best optimized fidelity over trials, the second the median.
Outcome analog_depth() {
  Outcome o;
  ExperimentSpec s;
  s.id = "acceptance-analog";
  s.protocol = Protocol::kConvergence;
  s.backend = BackendKind::kAnalog;
  s.n_values = {6};
  s.depth_rule = DepthRule::kExplicit;
  s.trials = 12;
  s.methods = {Method::kQngFull};
  s.optimizer.eps_stop = 1e-8;
  s.success_threshold = 1e-6;
  s.master_seed = 10010;
  s.analog.n_traj = 50;
  std::map<int, double> best, median;
  for (int p : {3, 4, 6}) {
    s.depth_value = p;
    const auto res = run_experiment(s);
    best[p] = res.summary.front().max_fidelity;
    median[p] = res.summary.front().median_fidelity;
  }
  o.pass = best[4] > best[3] && median[6] <= median[4];
  o.detail = "best F at P=3/4/6: " + fmt("%.4f", best[3]) + "/" + fmt("%.4f", best[4]) + "/" + fmt("%.4f", best[6]) +
             ", median F: " + fmt("%.4f", median[3]) + "/" + fmt("%.4f", median[4]) + "/" + fmt("%.4f", median[6]) +
             " (" + std::to_string(s.trials) + " trials, 50 trajectories)";
  return o;
}

// 11. Serial and parallel runs write identical CSV for every backend.
Outcome determinism() {
  Outcome o;
  std::vector<ExperimentSpec> specs;
  auto conv = convergence_spec();
  conv.n_values = {2, 4, 6};
  conv.trials = 10;
  conv.methods = {Method::kVanilla, Method::kQngDiag, Method::kQngFull};
  specs.push_back(conv);
  ExperimentSpec dig = conv;
  dig.backend = BackendKind::kDigitalNoise;
  dig.n_values = {3, 4};
  dig.trials = 2;
  dig.optimizer.max_iters = 60;
  specs.push_back(dig);
  ExperimentSpec ana = conv;
  ana.backend = BackendKind::kAnalog;
  ana.n_values = {4};
  ana.trials = 2;
  ana.analog.n_traj = 5;
  ana.optimizer.max_iters = 60;
  specs.push_back(ana);
  std::ostringstream d;
  for (const auto& s : specs) {
    const auto a = to_csv(run_experiment(s, {1, true}).records);
    const auto b = to_csv(run_experiment(s, {4, true}).records);
    const auto c = to_csv(run_experiment(s, {1, true}).records);
    const bool same = a == b && a == c;
    o.pass = o.pass && same;
    d << to_string(s.backend) << (same ? " identical" : " DIFFERS") << "; ";
  }
  o.detail = d.str();
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<Criterion> all{
      {1, "exact energy oracle", 60, exact_energy},
      {2, "QFIM correctness", 120, qfim},
      {3, "gradient correctness", 60, gradient},
      {4, "noiseless depth", 600, noiseless_depth},
      {5, "optimizer comparison", 1800, optimizer_comparison},
      {6, "noise-free limit", 60, noise_free_limit},
      {7, "channel physicality", 60, channel_physicality},
      {8, "noisy digital behavior", 1800, noisy_digital},
      {9, "analog compilation", 300, analog_compile},
      {10, "analog depth property", 3600, analog_depth},
      {11, "determinism", 1800, determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double t = seconds_since(t0);
    const bool in_time = t <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %-24s %s  %.1fs/%.0fs  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", t, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
