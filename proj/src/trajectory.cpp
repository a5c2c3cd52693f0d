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

#include <cmath>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "spopo/dynamics.hpp"
#include "spopo/io.hpp"

namespace spopo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One unit-variance normal stream per (seed, trajectory, channel).
class NoiseStreams {
 public:
  NoiseStreams(std::uint64_t seed, std::uint64_t trajectory, std::size_t channels) {
    for (std::size_t c = 0; c < channels; ++c) {
      engines_.emplace_back(splitmix64(splitmix64(splitmix64(seed) ^ trajectory) + c));
    }
  }
  double draw(std::size_t channel) { return normal_(engines_[channel]); }

 private:
  std::vector<std::mt19937_64> engines_;
  std::normal_distribution<double> normal_;
};

cplx expect(const SparseMat& op, const CVec& psi) { return psi.dot(op * psi); }

}  // namespace

SimulationRecord sse_trajectory(const OpenSystemModel& model, const StateVector& psi0,
                                const std::vector<double>& t_grid, const SseOptions& options) {
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }
  if (!(psi0.space == model.space())) throw std::invalid_argument("initial state lives on a different space");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");
  if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (options.noise_substeps < 1) throw std::invalid_argument("noise_substeps must be >= 1");

  std::vector<SparseMat> jumps;
  for (const auto& ch : model.lindblads()) jumps.push_back(ch.op.matrix());
  const std::size_t nc = jumps.size();
  SparseMat drift = -kI * model.hamiltonian().matrix();
  for (const auto& L : jumps) drift -= 0.5 * (SparseMat(L.adjoint()) * L);
  drift.prune(cplx(0.0));

  SimulationRecord rec;
  rec.times = t_grid;
  rec.seed = options.seed;
  for (const auto& ob : options.observables) rec.names.push_back(ob.name);
  for (std::size_t c = 0; c < nc; ++c) rec.names.push_back("J" + std::to_string(c + 1));
  rec.series.assign(rec.names.size(), {});

  NoiseStreams noise(options.seed, options.trajectory, nc);
  CVec psi = psi0.amplitudes;
  std::vector<double> x(nc);
  std::vector<double> current(nc, 0.0);
  std::vector<CVec> lpsi(nc);

  auto record = [&](std::size_t idx, double t, const std::vector<double>& j) {
    for (std::size_t k = 0; k < options.observables.size(); ++k) {
      rec.series[k].push_back(expect(options.observables[k].op.matrix(), psi));
    }
    for (std::size_t c = 0; c < nc; ++c) rec.series[options.observables.size() + c].push_back(j[c]);
    if (options.on_output) options.on_output(idx, t, StateVector(model.space(), psi));
  };

  for (std::size_t c = 0; c < nc; ++c) current[c] = 2.0 * expect(jumps[c], psi).real();
  record(0, t_grid.front(), current);

  for (std::size_t idx = 1; idx < t_grid.size(); ++idx) {
    const double span = t_grid[idx] - t_grid[idx - 1];
    const long steps = std::max(1L, std::lround(span / options.dt));
    const double dt = span / static_cast<double>(steps);
    const double sub = std::sqrt(dt / options.noise_substeps);
    std::fill(current.begin(), current.end(), 0.0);
    for (long s = 0; s < steps; ++s) {
      CVec next = psi + dt * (drift * psi);
      for (std::size_t c = 0; c < nc; ++c) {
        lpsi[c] = jumps[c] * psi;
        x[c] = 2.0 * psi.dot(lpsi[c]).real();
        double dw = 0.0;
        for (int q = 0; q < options.noise_substeps; ++q) dw += sub * noise.draw(c);
        const double dy = x[c] * dt + dw;
        current[c] += dy;
        next += dy * lpsi[c];
      }
      const double nrm = next.norm();
      if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > options.norm_drift_threshold) {
        std::ostringstream msg;
        msg << "norm drift " << std::abs(nrm - 1.0) << " before normalization at t = "
            << t_grid[idx - 1] + dt * static_cast<double>(s) << "; reduce dt";
        throw ConvergenceError(msg.str());
      }
      psi = next / nrm;
    }
    for (double& j : current) j /= span;
    record(idx, t_grid[idx], current);
  }
  rec.final_state = StateVector(model.space(), std::move(psi));
  return rec;
}

std::string EnsembleResult::to_csv() const {
  std::vector<std::string> header{"t"};
  for (const auto& n : names) {
    header.push_back(n);
    header.push_back(n + "_stderr");
  }
  CsvTable table(header);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (std::size_t k = 0; k < names.size(); ++k) {
      row.push_back(mean[k][i]);
      row.push_back(standard_error[k][i]);
    }
    table.add_row(row);
  }
  return table.str();
}

EnsembleResult sse_ensemble(const OpenSystemModel& model, const StateVector& psi0, const std::vector<double>& t_grid,
                            const SseOptions& options, int n_trajectories, int threads) {
  if (n_trajectories < 2) throw std::invalid_argument("an ensemble needs at least two trajectories");
  SseOptions base = options;
  base.on_output = nullptr;
  const int workers = std::max(1, std::min(n_trajectories, threads > 0 ? threads
                                                                        : static_cast<int>(std::thread::hardware_concurrency())));

  std::vector<SimulationRecord> records(static_cast<std::size_t>(n_trajectories));
  auto run_range = [&](int first) {
    for (int i = first; i < n_trajectories; i += workers) {
      SseOptions o = base;
      o.trajectory = static_cast<std::uint64_t>(i);
      SimulationRecord r = sse_trajectory(model, psi0, t_grid, o);
      r.final_state.reset();
      records[static_cast<std::size_t>(i)] = std::move(r);
    }
  };
  std::vector<std::future<void>> jobs;
  for (int w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, run_range, w));
  run_range(0);
  for (auto& j : jobs) j.get();

  EnsembleResult out;
  out.times = t_grid;
  out.names = records.front().names;
  out.n_trajectories = n_trajectories;
  out.seed = options.seed;
  const std::size_t nt = t_grid.size();
  const double n = n_trajectories;
  for (std::size_t k = 0; k < out.names.size(); ++k) {
    std::vector<double> sum(nt, 0.0), sq(nt, 0.0);
    for (const auto& r : records) {  // fixed trajectory order keeps the merge deterministic
      for (std::size_t i = 0; i < nt; ++i) {
        const double v = r.series[k][i].real();
        sum[i] += v;
        sq[i] += v * v;
      }
    }
    std::vector<double> mean(nt), se(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      mean[i] = sum[i] / n;
      const double var = std::max(0.0, (sq[i] - n * mean[i] * mean[i]) / (n - 1.0));
      se[i] = std::sqrt(var / n);
    }
    out.mean.push_back(std::move(mean));
    out.standard_error.push_back(std::move(se));
  }
  return out;
}

double sse_step_convergence(const OpenSystemModel& model, const StateVector& psi0, const std::vector<double>& t_grid,
                            const SseOptions& options) {
  SseOptions coarse = options;
  coarse.on_output = nullptr;
  coarse.noise_substeps = 2;
  SseOptions fine = coarse;
  fine.dt = options.dt / 2.0;
  fine.noise_substeps = 1;
  const SimulationRecord a = sse_trajectory(model, psi0, t_grid, coarse);
  const SimulationRecord b = sse_trajectory(model, psi0, t_grid, fine);
  double worst = 0.0;
  for (std::size_t k = 0; k < options.observables.size(); ++k) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      worst = std::max(worst, std::abs(a.series[k][i].real() - b.series[k][i].real()));
    }
  }
  return worst;
}

}  // namespace spopo
