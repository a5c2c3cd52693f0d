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

// Command-line front end. Exit status: 0 success, 2 config parse error,
// 3 validation error, 4 numerical convergence failure, 1 anything else.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "spopo/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulation engine for synchronously pumped optical parametric oscillators"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  struct Command {
    std::string name;
    std::string help;
  };
  const std::vector<Command> commands{
      {"run", "all artifacts listed in outputs.artifacts"},
      {"build", "coupling matrix, supermodes and model summary"},
      {"evolve", "master-equation evolution from vacuum"},
      {"steady", "steady state and its summary"},
      {"spectrum", "homodyne squeezing spectrum"},
      {"trajectories", "stochastic Schrodinger trajectories"},
      {"wigner", "Wigner function of one supermode at t_max"},
      {"fluxes", "steady-state signal and pump output flux spectra"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override dynamics.seed");
    sub->add_option("--out", out_dir, "override outputs.directory");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const spopo::RunConfig config = spopo::with_overrides(spopo::load_config(config_path), seed, out_dir);
    std::vector<std::string> artifacts{command};
    if (command == "run") {
      artifacts = config.outputs.artifacts;
      if (artifacts.empty()) throw spopo::ConfigValidationError("outputs.artifacts: run needs at least one artifact");
    }
    const spopo::RunReport report = spopo::run(config, artifacts, command);
    for (const auto& f : report.files) std::cout << config.outputs.directory << "/" << f << "\n";
    return 0;
  } catch (const spopo::ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const spopo::ConfigValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const spopo::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
