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

#include "spopo/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>

#include "spopo/analysis.hpp"
#include "spopo/dynamics.hpp"
#include "spopo/io.hpp"

namespace spopo {

using nlohmann::json;

namespace {

class Session {
 public:
  explicit Session(const RunConfig& config) : c_(config), dir_(config.outputs.directory) {}

  void write(const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    files_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  const std::vector<std::string>& files() const { return files_; }

  const CouplingMatrix& coupling() {
    if (!coupling_) {
      c_.dispersion.validate();
      coupling_ = std::make_unique<CouplingMatrix>(coupling_matrix(c_.dispersion));
    }
    return *coupling_;
  }

  const SupermodeSet& supermodes() {
    if (!supermodes_) {
      supermodes_ = std::make_unique<SupermodeSet>(c_.multimode() ? build_supermodes(coupling(), c_.supermode)
                                                                  : single_mode_supermodes(1.0));
    }
    return *supermodes_;
  }

  const OpenSystemModel& model() {
    if (!model_) model_ = std::make_unique<OpenSystemModel>(build_model(c_.model, supermodes()));
    return *model_;
  }

  const SteadyStateResult& steady() {
    if (!steady_) steady_ = std::make_unique<SteadyStateResult>(steady_state(model()));
    return *steady_;
  }

  const SimulationRecord& evolution() {
    if (!evolution_) {
      MasterOptions o;
      o.rtol = c_.dynamics.rtol;
      o.atol = c_.dynamics.atol;
      const auto rho0 = DensityOperator::pure(StateVector::vacuum(model().space()));
      evolution_ = std::make_unique<SimulationRecord>(
          evolve_master(model(), rho0, c_.dynamics.time_grid(), photon_number_observables(model().space()), o));
      evolution_->config_hash = c_.hash();
    }
    return *evolution_;
  }

  void artifact(const std::string& name) {
    if (name == "build") return build();
    if (name == "evolve") return evolve();
    if (name == "steady") return steady_artifact();
    if (name == "spectrum") return spectrum();
    if (name == "trajectories") return trajectories();
    if (name == "wigner") return wigner_artifact();
    if (name == "fluxes") return fluxes();
    throw std::invalid_argument("unknown artifact '" + name + "'");
  }

 private:
  json mode_summary(const DensityOperator& rho) {
    json j;
    std::vector<double> n;
    for (int i = 0; i < rho.space.mode_count(); ++i) n.push_back(expectation(number(rho.space, i), rho).real());
    j["mean_photon_number"] = n;
    j["purity"] = purity(rho);
    const int keep = c_.analysis.wigner_mode - 1;
    const DensityOperator reduced = partial_trace(rho, std::span(&keep, 1));
    j["reduced_purity"] = purity(reduced);
    if (c_.model.family != ModelFamily::lossy) {
      try {
        j["reduced_cat_fidelity"] = cat_fidelity(reduced, c_.model.p);
      } catch (const TruncationError&) {
        j["reduced_cat_fidelity"] = nullptr;
      }
    }
    return j;
  }

  void build() {
    if (c_.multimode()) {
      write("coupling.csv", coupling().to_csv());
      json sm;
      to_json(sm, supermodes());
      sm["pump_reconstruction_residual"] =
          pump_reconstruction_residual(coupling(), supermodes().R, supermodes().q_min, supermodes().labels);
      write_json("supermodes.json", sm);
    }
    write_json("model.json", model_summary(model(), c_.multimode() ? &supermodes() : nullptr));
  }

  void evolve() {
    const SimulationRecord& rec = evolution();
    write("evolve.csv", rec.to_csv());
    json j = mode_summary(*rec.final_density);
    j["t"] = rec.times.back();
    j["config_hash"] = rec.config_hash;
    write_json("evolve.json", j);
  }

  void steady_artifact() {
    const SteadyStateResult& ss = steady();
    json j = mode_summary(ss.rho);
    j["method"] = ss.method == SteadyStateMethod::null_space ? "null-space" : "long-time";
    j["residual"] = ss.residual;
    j["elapsed_time"] = ss.elapsed_time;
    write_json("steady.json", j);
  }

  void spectrum() {
    const OpenSystemModel& m = model();
    const auto& a = c_.analysis;
    const LindbladChannel* ch = a.spectrum_channel == "linear" ? m.linear_channel(a.spectrum_index)
                                                               : m.nonlinear_channel(a.spectrum_index);
    if (ch == nullptr) {
      throw ConfigValidationError("analysis.spectrum_index: model has no " + a.spectrum_channel + " channel " +
                                  std::to_string(a.spectrum_index));
    }
    SpectrumOptions o;
    o.tau_max = c_.dynamics.tau_max;
    o.dtau = c_.dynamics.dtau;
    o.rho_ss = steady().rho;
    const LinearOperator channel = ch->op * std::exp(cplx(0.0, -a.spectrum_phase));
    const SpectrumResult s = homodyne_spectrum(m, channel, c_.dynamics.omega_grid, o);
    write("spectrum.csv", s.to_csv());
    json j = {{"normalization", s.normalization},
              {"channel", a.spectrum_channel},
              {"index", a.spectrum_index},
              {"phase", a.spectrum_phase},
              {"tau_max", c_.dynamics.tau_max},
              {"dtau", c_.dynamics.dtau}};
    if (m.params().family == ModelFamily::lossy) {
      j["linearized_reference"] = linearized_spectrum(m.params().r, 1.0, c_.dynamics.omega_grid);
    }
    write_json("spectrum.json", j);
  }

  void trajectories() {
    const OpenSystemModel& m = model();
    SseOptions o;
    o.dt = c_.dynamics.dt;
    o.seed = c_.dynamics.seed;
    o.observables = photon_number_observables(m.space());
    const auto psi0 = StateVector::vacuum(m.space());
    const auto grid = c_.dynamics.time_grid();
    if (c_.dynamics.n_trajectories == 1) {
      SimulationRecord rec = sse_trajectory(m, psi0, grid, o);
      rec.config_hash = c_.hash();
      write("trajectory.csv", rec.to_csv());
      json j = mode_summary(DensityOperator::pure(*rec.final_state));
      j["seed"] = c_.dynamics.seed;
      write_json("trajectory.json", j);
    } else {
      const EnsembleResult e = sse_ensemble(m, psi0, grid, o, c_.dynamics.n_trajectories, c_.dynamics.threads);
      write("ensemble.csv", e.to_csv());
      write_json("ensemble.json", {{"n_trajectories", e.n_trajectories}, {"seed", e.seed}});
    }
  }

  void wigner_artifact() {
    const SimulationRecord& rec = evolution();
    const int keep = c_.analysis.wigner_mode - 1;
    const DensityOperator reduced = partial_trace(*rec.final_density, std::span(&keep, 1));
    const double ext = c_.analysis.wigner_extent;
    const auto axis = linspace(-ext, ext, c_.analysis.wigner_points);
    const WignerGrid g = wigner(reduced, axis, axis);
    if (g.warning) std::cerr << "warning: " << *g.warning << "\n";
    write("wigner.csv", matrix_csv(g.W));
    CsvTable x({"x"}), p({"p"});
    for (double v : g.x) x.add_row({v});
    for (double v : g.p) p.add_row({v});
    write("wigner_x.csv", x.str());
    write("wigner_p.csv", p.str());
    json j = {{"t", rec.times.back()},
              {"mode", c_.analysis.wigner_mode},
              {"integral", g.integral},
              {"min", g.min_value()},
              {"max", g.max_value()},
              {"convention", "a = (x + i p)/sqrt(2), vacuum exp(-x^2 - p^2)/pi"}};
    j["warning"] = g.warning ? json(*g.warning) : json(nullptr);
    write_json("wigner.json", j);
  }

  void fluxes() {
    const SteadyStateResult& ss = steady();
    const FluxSpectrum sig = flux_spectrum_signal(ss.rho, supermodes());
    write("flux_signal.csv", sig.to_csv());
    json j = {{"signal", sig.metadata}};
    if (model().nonlinear_channel(1) != nullptr) {
      const FluxSpectrum pump = flux_spectrum_pump(ss.rho, model(), supermodes());
      write("flux_pump.csv", pump.to_csv());
      j["pump"] = pump.metadata;
    }
    write_json("fluxes.json", j);
  }

  const RunConfig& c_;
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  std::unique_ptr<CouplingMatrix> coupling_;
  std::unique_ptr<SupermodeSet> supermodes_;
  std::unique_ptr<OpenSystemModel> model_;
  std::unique_ptr<SteadyStateResult> steady_;
  std::unique_ptr<SimulationRecord> evolution_;
};

}  // namespace

RunReport run(const RunConfig& config, const std::vector<std::string>& artifacts, const std::string& command) {
  const auto start = std::chrono::steady_clock::now();
  Session s(config);
  for (const auto& a : artifacts) s.artifact(a);

  json echo = {{"config", config.source}, {"config_hash", config.hash()}, {"seed", config.dynamics.seed}};
  s.write_json("config.json", echo);

  RunReport report;
  report.files = s.files();
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json files = json::array();
  const std::filesystem::path dir(config.outputs.directory);
  for (const auto& f : report.files) {
    const std::string bytes = read_text(dir / f);
    files.push_back({{"path", f}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a_hex(bytes)}});
  }
  json manifest = {{"command", command},
                   {"artifacts", artifacts},
                   {"config_hash", config.hash()},
                   {"seed", config.dynamics.seed},
                   {"versions", {{"spopo", kVersion}, {"compiler", __VERSION__}, {"eigen",
                     std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                     std::to_string(EIGEN_MINOR_VERSION)}}},
                   {"wall_time_seconds", report.wall_time_seconds},
                   {"files", files}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return report;
}

}  // namespace spopo
