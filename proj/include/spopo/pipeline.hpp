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

// Pipeline orchestration: phasematch -> supermode -> model -> dynamics ->
// analysis for the requested artifacts, with deterministic file output.

#pragma once

#include <string>
#include <vector>

#include "spopo/config.hpp"

namespace spopo {

inline constexpr const char* kVersion = "0.1.0";

struct RunReport {
  std::vector<std::string> files;  ///< written paths relative to the output directory
  double wall_time_seconds = 0.0;
};

/// Runs each artifact in order and writes config.json (echo with hash and
/// seed) and manifest.json (checksums, versions, wall time) into
/// config.outputs.directory.
RunReport run(const RunConfig& config, const std::vector<std::string>& artifacts, const std::string& command);

}  // namespace spopo
