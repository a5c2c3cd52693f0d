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

// Run configuration: a JSON document with the sections dispersion,
// supermode, model, dynamics, analysis and outputs. Unknown keys are
// rejected; see README.md for the full grammar.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spopo/model.hpp"
#include "spopo/phasematch.hpp"
#include "spopo/supermode.hpp"

namespace spopo {

/// Malformed configuration text (exit status 2).
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed configuration that violates the schema (exit status 3).
class ConfigValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DynamicsConfig {
  double t_max = 10.0;
  int n_times = 101;
  double dt = 1e-3;
  double rtol = 1e-8;
  double atol = 1e-10;
  int n_trajectories = 1;
  std::uint64_t seed = 1;
  int threads = 0;
  double tau_max = 60.0;
  double dtau = 0.01;
  std::vector<double> omega_grid;

  std::vector<double> time_grid() const;
};

struct AnalysisConfig {
  std::string spectrum_channel = "linear";  ///< "linear" or "nonlinear"
  int spectrum_index = 1;
  double spectrum_phase = 0.0;  ///< channel multiplied by exp(-i phase)
  int wigner_mode = 1;
  double wigner_extent = 5.0;
  int wigner_points = 101;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> artifacts;
};

struct RunConfig {
  DispersionParams dispersion;
  SupermodeOptions supermode;
  ModelSpec model;
  DynamicsConfig dynamics;
  AnalysisConfig analysis;
  OutputConfig outputs;
  nlohmann::json source;  ///< the document as parsed, after overrides

  bool multimode() const { return model.family != ModelFamily::cw_single; }
  /// FNV-1a of the canonical dump of `source`.
  std::string hash() const;
};

/// Artifact names accepted in outputs.artifacts (also the CLI subcommands).
const std::vector<std::string>& artifact_names();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Re-validates after replacing dynamics.seed / outputs.directory.
RunConfig with_overrides(const RunConfig& config, std::optional<std::uint64_t> seed,
                         std::optional<std::string> out_dir);

}  // namespace spopo
