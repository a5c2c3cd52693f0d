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

// Nonlinear coupling over the signal comb, F_mn = sqrt(g0) sinc(Phi_mn),
// with Phi_mn expanded to second order in the dispersion.

#pragma once

#include <string>

#include "spopo/common.hpp"

namespace spopo {

struct DispersionParams {
  double beta1 = 0.0;   ///< group-velocity mismatch term, (m+n) coefficient
  double beta2s = 0.0;  ///< (m^2+n^2) coefficient, limits phase-matching bandwidth
  double beta2p = 0.0;  ///< (m+n)^2 coefficient
  double g0 = 1.0;      ///< coupling-rate scale, F_00 = sqrt(g0)
  int half_width = 0;   ///< signal indices m in [-M, M]

  int comb_size() const { return 2 * half_width + 1; }
  void validate() const;
};

/// sin(x)/x with a series branch near zero.
double sinc(double x);

/// Phi_mn = beta1 (m+n) + beta2p (m+n)^2 - beta2s (m^2+n^2).
double phase_mismatch(const DispersionParams& params, int m, int n);

/// F over comb indices; matrix row/column r corresponds to m = r - M.
struct CouplingMatrix {
  RMat F;
  DispersionParams params;

  int half_width() const { return params.half_width; }
  double at(int m, int n) const { return F(m + params.half_width, n + params.half_width); }

  /// CSV with header "m,n,value", rows in (m, n) lexicographic order.
  std::string to_csv() const;
};

CouplingMatrix coupling_matrix(const DispersionParams& params);

}  // namespace spopo
