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

#include "spopo/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spopo/io.hpp"

namespace spopo {

using nlohmann::json;

const std::vector<std::string>& artifact_names() {
  static const std::vector<std::string> names{"build",        "evolve", "steady", "spectrum",
                                              "trajectories", "wigner", "fluxes"};
  return names;
}

std::vector<double> DynamicsConfig::time_grid() const {
  std::vector<double> t(static_cast<std::size_t>(n_times));
  for (int i = 0; i < n_times; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (n_times - 1);
  return t;
}

std::string RunConfig::hash() const { return fnv1a_hex(source.dump()); }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigValidationError(path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const std::string& key, std::optional<double> fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (!fallback) fail(path + "." + key, "required field is missing");
    return *fallback;
  }
  if (!v->is_number()) fail(path + "." + key, "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
  return d;
}

long long get_int(const json& obj, const std::string& path, const std::string& key, std::optional<long long> fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (!fallback) fail(path + "." + key, "required field is missing");
    return *fallback;
  }
  if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
  return v->get<long long>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) fail(path + "." + key, "expected true or false");
  return v->get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       std::optional<std::string> fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) {
    if (!fallback) fail(path + "." + key, "required field is missing");
    return *fallback;
  }
  if (!v->is_string()) fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

const json& section(const json& root, const std::string& key, const json& empty) {
  const json* s = find(root, key);
  return s == nullptr ? empty : *s;
}

void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) fail(path, msg);
}

RunConfig build(const json& root) {
  static const json empty = json::object();
  reject_unknown(root, "", {"dispersion", "supermode", "model", "dynamics", "analysis", "outputs"});
  RunConfig c;
  c.source = root;

  const json& model = section(root, "model", empty);
  if (find(root, "model") == nullptr) fail("model.family", "required field is missing");
  reject_unknown(model, "model", {"family", "r", "eta", "p", "cutoffs"});
  const std::string family = get_string(model, "model", "family", std::nullopt);
  try {
    c.model.family = parse_family(family);
  } catch (const std::invalid_argument& e) {
    fail("model.family", e.what());
  }
  if (c.model.family == ModelFamily::lossy) {
    c.model.r = get_number(model, "model", "r", std::nullopt);
    c.model.eta = get_number(model, "model", "eta", std::nullopt);
    require(c.model.r >= 0.0, "model.r", "must be >= 0");
    require(c.model.eta > 0.0, "model.eta", "must be > 0");
    if (find(model, "p") != nullptr) fail("model.p", "only used by lossless and cw-single families");
  } else {
    c.model.p = get_number(model, "model", "p", std::nullopt);
    require(c.model.p >= 0.0, "model.p", "must be >= 0");
    if (find(model, "r") != nullptr || find(model, "eta") != nullptr) {
      fail(find(model, "r") != nullptr ? "model.r" : "model.eta", "only used by the lossy family");
    }
  }
  const json* cut = find(model, "cutoffs");
  if (cut == nullptr) fail("model.cutoffs", "required field is missing");
  if (!cut->is_array() || cut->empty()) fail("model.cutoffs", "expected a non-empty list of integers");
  for (const auto& v : *cut) {
    if (!v.is_number_integer() || v.get<long long>() < 2 || v.get<long long>() > 4096) {
      fail("model.cutoffs", "every cutoff must be an integer in [2, 4096]");
    }
    c.model.cutoffs.push_back(v.get<int>());
  }
  if (c.model.family == ModelFamily::cw_single) require(c.model.cutoffs.size() == 1, "model.cutoffs", "cw-single takes one cutoff");

  const json& disp = section(root, "dispersion", empty);
  reject_unknown(disp, "dispersion", {"beta1", "beta2s", "beta2p", "g0", "M"});
  if (c.multimode() && find(root, "dispersion") == nullptr) fail("dispersion.M", "required field is missing");
  c.dispersion.beta1 = get_number(disp, "dispersion", "beta1", 0.0);
  c.dispersion.beta2s = get_number(disp, "dispersion", "beta2s", 0.0);
  c.dispersion.beta2p = get_number(disp, "dispersion", "beta2p", 0.0);
  c.dispersion.g0 = get_number(disp, "dispersion", "g0", 1.0);
  const long long M = get_int(disp, "dispersion", "M", c.multimode() ? std::nullopt : std::optional<long long>(0));
  require(M >= 0 && M <= 2000, "dispersion.M", "must be in [0, 2000]");
  c.dispersion.half_width = static_cast<int>(M);
  require(c.dispersion.g0 > 0.0, "dispersion.g0", "must be > 0");

  const json& sup = section(root, "supermode", empty);
  reject_unknown(sup, "supermode", {"Np", "n_signal", "k_max", "odd_only"});
  c.supermode.Np = get_number(sup, "supermode", "Np", c.supermode.Np);
  c.supermode.n_signal = static_cast<int>(get_int(sup, "supermode", "n_signal", c.supermode.n_signal));
  c.supermode.k_max = static_cast<int>(get_int(sup, "supermode", "k_max", c.supermode.k_max));
  c.supermode.odd_only = get_bool(sup, "supermode", "odd_only", c.supermode.odd_only);
  require(c.supermode.Np > 0.0, "supermode.Np", "must be > 0");
  if (c.multimode()) {
    const int comb = c.dispersion.comb_size();
    require(c.supermode.n_signal >= 1 && c.supermode.n_signal <= comb, "supermode.n_signal",
            "must be between 1 and the comb size 2M+1");
    require(c.supermode.k_max >= 1 && c.supermode.k_max <= 2 * comb - 1, "supermode.k_max",
            "must be between 1 and the pump grid size 4M+1");
    require(static_cast<int>(c.model.cutoffs.size()) <= c.supermode.n_signal, "model.cutoffs",
            "more cutoffs than supermode.n_signal");
  }

  const json& dyn = section(root, "dynamics", empty);
  reject_unknown(dyn, "dynamics", {"t_max", "n_times", "dt", "rtol", "atol", "n_trajectories", "seed", "threads",
                                   "tau_max", "dtau", "omega_grid"});
  DynamicsConfig& d = c.dynamics;
  d.t_max = get_number(dyn, "dynamics", "t_max", d.t_max);
  d.n_times = static_cast<int>(get_int(dyn, "dynamics", "n_times", d.n_times));
  d.dt = get_number(dyn, "dynamics", "dt", d.dt);
  d.rtol = get_number(dyn, "dynamics", "rtol", d.rtol);
  d.atol = get_number(dyn, "dynamics", "atol", d.atol);
  d.n_trajectories = static_cast<int>(get_int(dyn, "dynamics", "n_trajectories", d.n_trajectories));
  const long long seed = get_int(dyn, "dynamics", "seed", 1);
  require(seed >= 0, "dynamics.seed", "must be >= 0");
  d.seed = static_cast<std::uint64_t>(seed);
  d.threads = static_cast<int>(get_int(dyn, "dynamics", "threads", d.threads));
  d.tau_max = get_number(dyn, "dynamics", "tau_max", d.tau_max);
  d.dtau = get_number(dyn, "dynamics", "dtau", d.dtau);
  require(d.t_max > 0.0, "dynamics.t_max", "must be > 0");
  require(d.n_times >= 2, "dynamics.n_times", "must be >= 2");
  require(d.dt > 0.0 && d.dt <= d.t_max, "dynamics.dt", "must be in (0, t_max]");
  require(d.rtol > 0.0 && d.atol > 0.0, "dynamics.rtol", "tolerances must be > 0");
  require(d.n_trajectories >= 1, "dynamics.n_trajectories", "must be >= 1");
  require(d.threads >= 0, "dynamics.threads", "must be >= 0");
  require(d.tau_max > 0.0, "dynamics.tau_max", "must be > 0");
  require(d.dtau > 0.0 && d.dtau < d.tau_max, "dynamics.dtau", "must be in (0, tau_max)");
  if (const json* w = find(dyn, "omega_grid")) {
    if (w->is_array()) {
      for (const auto& v : *w) {
        if (!v.is_number()) fail("dynamics.omega_grid", "expected numbers");
        d.omega_grid.push_back(v.get<double>());
      }
    } else if (w->is_object()) {
      reject_unknown(*w, "dynamics.omega_grid", {"min", "max", "count"});
      const double lo = get_number(*w, "dynamics.omega_grid", "min", std::nullopt);
      const double hi = get_number(*w, "dynamics.omega_grid", "max", std::nullopt);
      const long long n = get_int(*w, "dynamics.omega_grid", "count", std::nullopt);
      require(n >= 2 && hi > lo, "dynamics.omega_grid", "needs count >= 2 and max > min");
      for (long long i = 0; i < n; ++i) d.omega_grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    } else {
      fail("dynamics.omega_grid", "expected a list or {min, max, count}");
    }
  } else {
    for (int i = 0; i <= 100; ++i) d.omega_grid.push_back(-5.0 + 0.1 * i);
  }

  const json& ana = section(root, "analysis", empty);
  reject_unknown(ana, "analysis", {"spectrum_channel", "spectrum_index", "spectrum_phase", "wigner_mode",
                                   "wigner_extent", "wigner_points"});
  AnalysisConfig& a = c.analysis;
  a.spectrum_channel = get_string(ana, "analysis", "spectrum_channel", a.spectrum_channel);
  require(a.spectrum_channel == "linear" || a.spectrum_channel == "nonlinear", "analysis.spectrum_channel",
          "expected \"linear\" or \"nonlinear\"");
  a.spectrum_index = static_cast<int>(get_int(ana, "analysis", "spectrum_index", a.spectrum_index));
  a.spectrum_phase = get_number(ana, "analysis", "spectrum_phase", a.spectrum_phase);
  a.wigner_mode = static_cast<int>(get_int(ana, "analysis", "wigner_mode", a.wigner_mode));
  a.wigner_extent = get_number(ana, "analysis", "wigner_extent", a.wigner_extent);
  a.wigner_points = static_cast<int>(get_int(ana, "analysis", "wigner_points", a.wigner_points));
  require(a.wigner_mode >= 1 && a.wigner_mode <= static_cast<int>(c.model.cutoffs.size()), "analysis.wigner_mode",
          "must name a simulated supermode (1-based)");
  require(a.wigner_extent > 0.0, "analysis.wigner_extent", "must be > 0");
  require(a.wigner_points >= 2, "analysis.wigner_points", "must be >= 2");
  require(a.spectrum_index >= 1, "analysis.spectrum_index", "must be >= 1");

  const json& out = section(root, "outputs", empty);
  reject_unknown(out, "outputs", {"directory", "artifacts"});
  c.outputs.directory = get_string(out, "outputs", "directory", c.outputs.directory);
  require(!c.outputs.directory.empty(), "outputs.directory", "must not be empty");
  if (const json* arts = find(out, "artifacts")) {
    if (!arts->is_array()) fail("outputs.artifacts", "expected a list of artifact names");
    for (const auto& v : *arts) {
      if (!v.is_string()) fail("outputs.artifacts", "expected strings");
      const std::string name = v.get<std::string>();
      const auto& known = artifact_names();
      if (std::find(known.begin(), known.end(), name) == known.end()) fail("outputs.artifacts", "unknown artifact '" + name + "'");
      c.outputs.artifacts.push_back(name);
    }
  }
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigParseError("config must be a JSON object");
  return build(root);
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const std::exception& e) {
    throw ConfigParseError("cannot read config '" + path + "': " + e.what());
  }
  return parse_config(text);
}

RunConfig with_overrides(const RunConfig& config, std::optional<std::uint64_t> seed,
                         std::optional<std::string> out_dir) {
  json root = config.source;
  if (seed) root["dynamics"]["seed"] = *seed;
  if (out_dir) root["outputs"]["directory"] = *out_dir;
  return build(root);
}

}  // namespace spopo
