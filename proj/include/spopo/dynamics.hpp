// Copyright 2026 The spopo Authors
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

// Time evolution of open-system models: Lindblad master equation, steady
// states, homodyne spectra, stochastic Schrodinger trajectories under
// homodyne unraveling, and the classical mean-field flow of the supermode
// amplitudes.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spopo/hilbert.hpp"
#include "spopo/model.hpp"
#include "spopo/supermode.hpp"

namespace spopo {

struct Observable {
  std::string name;
  LinearOperator op;
};

/// Photon number of every mode, named n1, n2, ... (1-based supermode labels).
std::vector<Observable> photon_number_observables(const FockSpace& space);

struct SimulationRecord {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<cplx>> series;  ///< aligned with names, one entry per time
  std::optional<DensityOperator> final_density;
  std::optional<StateVector> final_state;
  std::optional<std::uint64_t> seed;
  std::string config_hash;

  const std::vector<cplx>& series_for(const std::string& name) const;
  /// Columns t, then the real part of every series.
  std::string to_csv() const;
};

/// Superoperator L(rho) = -i[H, rho] + sum_k (L_k rho L_k^+ - {L_k^+ L_k, rho}/2).
class Liouvillian {
 public:
  Liouvillian(const SparseMat& H, const std::vector<SparseMat>& jumps, bool compress = true);
  explicit Liouvillian(const OpenSystemModel& model, bool compress = true);

  Eigen::Index dim() const { return H_.rows(); }
  std::size_t jump_count() const { return jumps_.size(); }
  const std::vector<SparseMat>& jumps() const { return jumps_; }

  DenseMat apply(const DenseMat& rho) const;
  /// Same as apply() for Hermitian input, using only left sparse products.
  DenseMat apply_hermitian(const DenseMat& rho) const;

  /// Column-stacked matrix of the map: vec(L(rho)) = S vec(rho).
  SparseMat superoperator() const;

 private:
  SparseMat H_;
  SparseMat H_eff_;  // H - (i/2) sum L^+ L
  std::vector<SparseMat> jumps_;
};

/// Unitary remixing of jump operators that leaves the master equation
/// unchanged and drops the combinations with vanishing norm.
std::vector<SparseMat> compress_lindblads(const std::vector<SparseMat>& jumps, double rel_tol = 1e-14);

/// Residual ||L(rho)||_F.
double liouvillian_residual(const Liouvillian& L, const DenseMat& rho);

struct MasterOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;
  bool compress = true;
  double trace_tol = 1e-8;
  double positivity_tol = 1e-8;
  /// Positivity is checked by full diagonalization up to this dimension.
  Eigen::Index positivity_check_max_dim = 600;
};

/// Master-equation evolution; records tr(O rho(t)) for every observable.
/// Throws ConvergenceError on trace drift or a negative eigenvalue beyond
/// tolerance.
SimulationRecord evolve_master(const OpenSystemModel& model, const DensityOperator& rho0,
                               const std::vector<double>& t_grid, const std::vector<Observable>& observables,
                               const MasterOptions& options = {});

enum class SteadyStateMethod { automatic, long_time, null_space };

struct SteadyStateOptions {
  SteadyStateMethod method = SteadyStateMethod::automatic;
  std::optional<DensityOperator> initial;  ///< long-time start, vacuum when absent
  double residual_tol = 1e-8;
  double chunk = 2.0;
  double t_max = 5000.0;
  double rtol = 1e-10;
  double atol = 1e-13;
  /// automatic picks null_space up to this Hilbert-space dimension.
  Eigen::Index null_space_max_dim = 80;
};

struct SteadyStateResult {
  DensityOperator rho;
  double residual = 0.0;
  SteadyStateMethod method = SteadyStateMethod::long_time;
  double elapsed_time = 0.0;  ///< model time integrated (long-time method)
};

SteadyStateResult steady_state(const OpenSystemModel& model, const SteadyStateOptions& options = {});

struct SpectrumOptions {
  double tau_max = 60.0;
  double dtau = 0.01;
  /// |F(tau_max)| must fall below decay_tol * max |F|.
  double decay_tol = 1e-5;
  double rtol = 1e-10;
  double atol = 1e-13;
  std::optional<DensityOperator> rho_ss;
  SteadyStateOptions steady;
};

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> S;
  std::string normalization = "vacuum = 1";
  std::vector<double> tau;
  std::vector<cplx> correlation;  ///< connected part of F_hom(tau) without the delta term
  std::string to_csv() const;
};

/// Steady-state homodyne spectrum of the output port `channel`,
/// S(w) = 1 + 2 Re int_0^tau_max exp(-i w tau) F(tau) dtau, where F is the
/// regular (connected) part of tr[(L + L^+) A(tau)], A(0) = L rho + rho L^+.
SpectrumResult homodyne_spectrum(const OpenSystemModel& model, const LinearOperator& channel,
                                 const std::vector<double>& omega, const SpectrumOptions& options = {});

struct SseOptions {
  double dt = 1e-3;
  std::uint64_t seed = 1;
  std::uint64_t trajectory = 0;
  /// Number of unit Wiener increments (each of length dt / noise_substeps)
  /// summed per step. Only the step-halving self-test uses values > 1.
  int noise_substeps = 1;
  /// Largest tolerated | ||psi'|| - 1 | before normalization.
  double norm_drift_threshold = 0.25;
  std::vector<Observable> observables;
  std::function<void(std::size_t, double, const StateVector&)> on_output;
};

/// Euler-Maruyama integration of the homodyne stochastic Schrodinger
/// equation, normalized every step. Records each observable and, per
/// Lindblad channel, the mean homodyne current over each output interval
/// ("J<i>" for channel i in model order; at t0 it is <L + L^+>).
SimulationRecord sse_trajectory(const OpenSystemModel& model, const StateVector& psi0,
                                const std::vector<double>& t_grid, const SseOptions& options);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> standard_error;
  int n_trajectories = 0;
  std::uint64_t seed = 0;
  std::string to_csv() const;
};

/// Runs trajectories 0..n-1 with independent noise streams and averages
/// the real parts of the observables. `threads` = 0 uses the hardware count.
EnsembleResult sse_ensemble(const OpenSystemModel& model, const StateVector& psi0, const std::vector<double>& t_grid,
                            const SseOptions& options, int n_trajectories, int threads = 0);

/// Half-step self-test: largest observable difference between runs with dt
/// and dt/2 driven by the same Wiener path.
double sse_step_convergence(const OpenSystemModel& model, const StateVector& psi0, const std::vector<double>& t_grid,
                            const SseOptions& options);

struct MeanFieldOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
};

struct MeanFieldRecord {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> S;
};

/// Classical flow of the supermode amplitudes with all noise dropped,
///   dS_i/dt = -kappa (K^+K)_ij S_j - 2 A G^(1)_ij S_j^* - sum_k G^(k)_ij G^(k)_mn S_j^* S_m S_n,
/// driven with amplitude A on pump label 1.
MeanFieldRecord mean_field(const SupermodeSet& sm, double drive, double kappa, const Eigen::VectorXcd& S0,
                           const std::vector<double>& t_grid, const MeanFieldOptions& options = {});

}  // namespace spopo
