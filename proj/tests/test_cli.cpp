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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include "spopo/io.hpp"
#include "spopo/pipeline.hpp"

using namespace spopo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(SPOPO_TEST_SCRATCH) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

nlohmann::json example(const std::string& name) {
  return nlohmann::json::parse(slurp(fs::path(SPOPO_CONFIG_DIR) / (name + ".json")));
}

std::string validation_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigValidationError& e) {
    return e.what();
  }
  return "";
}

int cli(const std::string& args) {
  const std::string cmd = std::string(SPOPO_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  SUBCASE("missing family names the field") {
    const std::string msg = validation_message(R"({"model": {"p": 2.0, "cutoffs": [10]}})");
    CHECK(msg.find("model.family") != std::string::npos);
  }
  SUBCASE("unknown keys are rejected") {
    const std::string msg = validation_message(R"({"model": {"family": "cw-single", "p": 2.0, "cutoffs": [10], "gain": 1}})");
    CHECK(msg.find("model.gain") != std::string::npos);
    CHECK(!validation_message(R"({"model": {"family": "cw-single", "p": 1, "cutoffs": [4]}, "extra": {}})").empty());
  }
  SUBCASE("family-specific requirements") {
    CHECK(!validation_message(R"({"model": {"family": "lossy", "r": 0.5, "cutoffs": [4]}, "dispersion": {"M": 3}})").empty());
    CHECK(!validation_message(R"({"model": {"family": "lossless", "p": 1.0, "cutoffs": [4]}})").empty());
    CHECK(!validation_message(R"({"model": {"family": "cw-single", "p": 1.0}})").empty());
    CHECK(!validation_message(R"({"model": {"family": "cw-single", "p": 1.0, "cutoffs": [1]}})").empty());
    CHECK(!validation_message(R"({"model": {"family": "cw-single", "p": 1.0, "cutoffs": [4]}, "outputs": {"artifacts": ["plot"]}})").empty());
  }
  SUBCASE("malformed text") { CHECK_THROWS_AS(parse_config("{\"model\": "), ConfigParseError); }
  SUBCASE("examples parse") {
    for (const char* name : {"cw_cat", "lossy_spectrum", "desk_multimode"}) {
      const RunConfig c = parse_config(example(name).dump());
      CHECK(!c.outputs.artifacts.empty());
      CHECK(c.hash().size() == 16);
    }
    const RunConfig c = parse_config(example("lossy_spectrum").dump());
    CHECK(c.dynamics.omega_grid.size() == 101);
    CHECK(c.model.family == ModelFamily::lossy);
    CHECK(c.dispersion.half_width == 10);
  }
  SUBCASE("overrides") {
    const RunConfig c = parse_config(example("cw_cat").dump());
    const RunConfig o = with_overrides(c, 42, std::string("elsewhere"));
    CHECK(o.dynamics.seed == 42);
    CHECK(o.outputs.directory == "elsewhere");
    CHECK(o.hash() != c.hash());
    CHECK(with_overrides(c, std::nullopt, std::nullopt).hash() == c.hash());
  }
}

TEST_CASE("cat run is reproducible byte for byte") {
  const fs::path dir = scratch("cat");
  nlohmann::json j = example("cw_cat");
  j["outputs"]["directory"] = dir.string();
  const RunConfig c = parse_config(j.dump());

  run(c, c.outputs.artifacts, "run");
  const auto first = snapshot(dir);
  run(c, c.outputs.artifacts, "run");
  const auto second = snapshot(dir);
  REQUIRE(first.size() == second.size());
  for (const auto& [name, bytes] : first) {
    if (name == "manifest.json") continue;  // carries the wall time
    CHECK_MESSAGE(second.at(name) == bytes, name);
  }

  const nlohmann::json manifest = nlohmann::json::parse(first.at("manifest.json"));
  CHECK(manifest["config_hash"] == c.hash());
  CHECK(manifest["seed"] == 1);
  for (const auto& f : manifest["files"]) {
    const std::string bytes = first.at(f["path"].get<std::string>());
    CHECK(f["bytes"] == bytes.size());
    CHECK(f["fnv1a64"] == fnv1a_hex(bytes));
  }
  const nlohmann::json w = nlohmann::json::parse(first.at("wigner.json"));
  CHECK(w["min"].get<double>() < -0.01);
  const nlohmann::json echo = nlohmann::json::parse(first.at("config.json"));
  CHECK(echo["config_hash"] == c.hash());

  nlohmann::json k = j;
  k["dynamics"]["seed"] = 2;
  const RunConfig c2 = parse_config(k.dump());
  run(c2, {"trajectories"}, "trajectories");
  CHECK(slurp(dir / "trajectory.csv") != first.at("trajectory.csv"));
}

TEST_CASE("lossy spectrum reproduces the linearized limit") {
  const fs::path dir = scratch("spectrum");
  nlohmann::json j = example("lossy_spectrum");
  j["outputs"]["directory"] = dir.string();
  j["dynamics"]["omega_grid"] = {0.0, 2.0};
  const RunConfig amplified = parse_config(j.dump());
  run(amplified, {"spectrum"}, "spectrum");
  const nlohmann::json s = nlohmann::json::parse(slurp(dir / "spectrum.json"));
  const double ref0 = linearized_spectrum(0.5, 1.0, {0.0})[0];
  const auto csv = slurp(dir / "spectrum.csv");
  CHECK(csv.rfind("omega,S", 0) == 0);
  const double s0 = std::stod(csv.substr(csv.find('\n') + 3));
  CHECK(std::abs(s0 / ref0 - 1.0) < 0.05);
  CHECK(s.contains("linearized_reference"));

  j["analysis"]["spectrum_phase"] = 0.0;
  run(parse_config(j.dump()), {"spectrum"}, "spectrum");
  const auto csv2 = slurp(dir / "spectrum.csv");
  const double q0 = std::stod(csv2.substr(csv2.find('\n') + 3));
  CHECK(std::abs(q0 * ref0 - 1.0) < 0.05);
}

TEST_CASE("command-line exit status") {
  const fs::path dir = scratch("cli");
  const std::string out = " --out " + dir.string();
  CHECK(cli("steady --config " + (fs::path(SPOPO_CONFIG_DIR) / "desk_multimode.json").string() + out) == 0);
  CHECK(fs::exists(dir / "steady.json"));
  CHECK(fs::exists(dir / "manifest.json"));

  const auto bad_json = write_config(dir, "bad.json", "{ not json");
  CHECK(cli("run --config " + bad_json.string()) == 2);
  const auto no_family = write_config(dir, "nofamily.json", R"({"model": {"p": 2.0, "cutoffs": [10]}})");
  CHECK(cli("build --config " + no_family.string()) == 3);
  const auto short_tau = write_config(
      dir, "short.json",
      R"({"dispersion": {"M": 10, "beta2s": 0.08}, "supermode": {"Np": 12.0, "n_signal": 3, "k_max": 10},
          "model": {"family": "lossy", "r": 0.8, "eta": 1.0, "cutoffs": [6]},
          "dynamics": {"tau_max": 0.5, "omega_grid": [0.0]}})");
  CHECK(cli("spectrum --config " + short_tau.string() + out) == 4);
  CHECK(cli("run --config " + (dir / "missing.json").string()) != 0);
  CHECK(cli("") != 0);
}
