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

// Concrete SPOPO open-system models in dimensionless units, plus the
// linearized squeezing spectrum used as an analytic reference.
//
// Lindblad ordering contract: linear channels first (supermode i
// ascending), then nonlinear channels (pump label k ascending).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spopo/hilbert.hpp"
#include "spopo/supermode.hpp"

namespace spopo {

enum class ModelFamily { lossy, lossless, cw_single };

std::string to_string(ModelFamily family);
ModelFamily parse_family(const std::string& text);

enum class ChannelKind { linear, nonlinear };

struct LindbladChannel {
  LinearOperator op;
  ChannelKind kind;
  int index;          ///< signal supermode i (linear, 1-based) or pump label k (nonlinear)
  cplx displacement;  ///< constant part of op (pump drive), zero for undriven channels
};

struct ModelParams {
  ModelFamily family = ModelFamily::lossy;
  double r = 0.0;
  double eta = 1.0;
  double p = 0.0;
  std::optional<double> kappa;  ///< present for lossy models (time unit 1/kappa)
  double Lambda1 = 1.0;         ///< physical leading eigenvalue; model operators are scaled by it
};

class OpenSystemModel {
 public:
  OpenSystemModel(FockSpace space, LinearOperator H, std::vector<LindbladChannel> lindblads, ModelParams params);

  const FockSpace& space() const { return space_; }
  const LinearOperator& hamiltonian() const { return H_; }
  const std::vector<LindbladChannel>& lindblads() const { return lindblads_; }
  const ModelParams& params() const { return params_; }
  int mode_count() const { return space_.mode_count(); }

  std::vector<LinearOperator> jump_operators() const;
  /// First nonlinear channel with the given pump label, or nullptr.
  const LindbladChannel* nonlinear_channel(int label) const;
  const LindbladChannel* linear_channel(int mode) const;

 private:
  FockSpace space_;
  LinearOperator H_;
  std::vector<LindbladChannel> lindblads_;
  ModelParams params_;
};

/// Lossy SPOPO in units kappa = 1:
///   H = (i r/4) sum_i (Lambda_i/Lambda_1) S_i^2 + h.c.
///   L_lin^(i) = sqrt(2) S_i
///   L_nl^(k)  = sqrt(eta) sum_ij (G^(k)_ij/Lambda_1) S_i S_j + (r / 2 sqrt(eta)) delta_k1
/// The number of signal supermodes is cutoffs.size().
OpenSystemModel build_spopo(const SupermodeSet& sm, double r, double eta, const std::vector<int>& cutoffs);

/// Lossless SPOPO in units Lambda_1^2 = 1:
///   H = (i p/4) sum_i (Lambda_i/Lambda_1) S_i^2 + h.c.
///   L_nl^(k) = sum_ij (G^(k)_ij/Lambda_1) S_i S_j + (p/2) delta_k1
OpenSystemModel build_lossless(const SupermodeSet& sm, double p, const std::vector<int>& cutoffs);

struct ModelSpec {
  ModelFamily family = ModelFamily::lossless;
  double r = 0.0;
  double eta = 1.0;
  double p = 0.0;
  std::vector<int> cutoffs;
};

/// Single-mode restriction i = j = k = 1 of the given parameterization.
/// cw_single is the lossless restriction.
OpenSystemModel restrict_single_mode(const ModelSpec& spec);

/// Builds the model named by `spec` from a supermode set (multimode
/// families) or directly (cw_single).
OpenSystemModel build_model(const ModelSpec& spec, const SupermodeSet& sm);

/// Amplified-quadrature output spectrum of the linearized OPO,
/// (w^2 + kappa^2 (1+r)^2) / (w^2 + kappa^2 (1-r)^2). Returns +inf at the pole.
std::vector<double> linearized_spectrum(double r, double kappa, const std::vector<double>& omega);

/// Squeezed-quadrature counterpart, (w^2 + kappa^2 (1-r)^2) / (w^2 + kappa^2 (1+r)^2).
std::vector<double> linearized_spectrum_squeezed(double r, double kappa, const std::vector<double>& omega);

/// Parameters, operator norms and Lambda spectrum.
nlohmann::json model_summary(const OpenSystemModel& model, const SupermodeSet* sm = nullptr);

}  // namespace spopo
