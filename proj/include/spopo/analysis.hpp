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

// Observables derived from states: Wigner functions, comb-resolved output
// photon fluxes, purity and cat-state fidelity.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spopo/hilbert.hpp"
#include "spopo/model.hpp"
#include "spopo/supermode.hpp"

namespace spopo {

/// Phase-space grid with quadratures a = (x + i p)/sqrt(2), normalized to
/// unit integral over dx dp, so vacuum is exp(-x^2 - p^2)/pi.
struct WignerGrid {
  std::vector<double> x;
  std::vector<double> p;
  RMat W;  ///< W(i, j) at (x[j], p[i])
  double integral = 0.0;
  std::optional<std::string> warning;  ///< set when the grid misses probability mass

  double min_value() const { return W.minCoeff(); }
  double max_value() const { return W.maxCoeff(); }
};

std::vector<double> linspace(double lo, double hi, int count);

/// Single-mode Wigner function by the Laguerre recursion over Fock elements.
WignerGrid wigner(const DensityOperator& rho, const std::vector<double>& x, const std::vector<double>& p,
                  double integral_tol = 1e-3);

/// Closed form for a finite superposition of coherent states
/// sum_i c_i |beta_i>, normalized internally; used as a reference.
double wigner_coherent_superposition(const std::vector<cplx>& coeffs, const std::vector<cplx>& betas, double x,
                                     double p);

/// (int |W| - 1) / 2 by the trapezoid rule.
double negative_volume(const WignerGrid& grid);

double purity(const DensityOperator& rho);

/// Normalized |i sqrt(p)> + |-i sqrt(p)> on the given single-mode space.
StateVector cat_state(const FockSpace& space, double p, double tolerance = kTruncationTolerance);

/// <cat|rho|cat>. Throws TruncationError if the cutoff cannot hold the cat.
double cat_fidelity(const DensityOperator& rho, double p, double tolerance = kTruncationTolerance);

struct FluxSpectrum {
  std::vector<int> index;      ///< comb line (signal m or pump q)
  std::vector<double> flux;    ///< output photon flux in units of kappa
  std::vector<double> input;   ///< free-field drive profile (pump only)
  std::vector<double> coverage;  ///< sum over retained labels of R_kq^2 (pump only)
  nlohmann::json metadata;

  std::string to_csv() const;
};

/// Signal output flux 2 <s_m^+ s_m> per comb line, with
/// s_m = sum_i T*_im S_i over the modes present in rho.
FluxSpectrum flux_spectrum_signal(const DensityOperator& rho, const SupermodeSet& sm);

/// Pump output flux <L^(q)+ L^(q)> per pump line, L^(q) = sum_k R_kq L'^(k)
/// over the model's nonlinear channels (drive displacement included).
FluxSpectrum flux_spectrum_pump(const DensityOperator& rho, const OpenSystemModel& model, const SupermodeSet& sm);

}  // namespace spopo
