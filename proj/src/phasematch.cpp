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

#include "spopo/phasematch.hpp"

#include <cmath>
#include <sstream>

#include "spopo/io.hpp"

namespace spopo {

void DispersionParams::validate() const {
  if (half_width < 0) throw std::invalid_argument("comb half-width M must be >= 0");
  if (!(g0 > 0.0)) throw std::invalid_argument("coupling scale g0 must be > 0");
  if (!std::isfinite(beta1) || !std::isfinite(beta2s) || !std::isfinite(beta2p)) {
    throw std::invalid_argument("dispersion coefficients must be finite");
  }
}

double sinc(double x) {
  const double x2 = x * x;
  // Taylor series through x^6; truncation error below 1e-17 for |x| < 1e-2.
  if (std::abs(x) < 1e-2) return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
  return std::sin(x) / x;
}

double phase_mismatch(const DispersionParams& params, int m, int n) {
  const int M = params.half_width;
  if (std::abs(m) > M || std::abs(n) > M) {
    throw std::out_of_range("comb index outside [-M, M]");
  }
  const double s = static_cast<double>(m) + static_cast<double>(n);
  const double sq = static_cast<double>(m) * m + static_cast<double>(n) * n;
  return params.beta1 * s + params.beta2p * s * s - params.beta2s * sq;
}

CouplingMatrix coupling_matrix(const DispersionParams& params) {
  params.validate();
  const int M = params.half_width;
  const int N = params.comb_size();
  const double scale = std::sqrt(params.g0);
  RMat F(N, N);
  for (int r = 0; r < N; ++r) {
    for (int c = r; c < N; ++c) {
      const double v = scale * sinc(phase_mismatch(params, r - M, c - M));
      F(r, c) = v;
      F(c, r) = v;
    }
  }
  return {std::move(F), params};
}

std::string CouplingMatrix::to_csv() const {
  std::ostringstream out;
  out << "m,n,value\n";
  const int M = params.half_width;
  for (int m = -M; m <= M; ++m) {
    for (int n = -M; n <= M; ++n) out << m << ',' << n << ',' << format_double(at(m, n)) << '\n';
  }
  return out.str();
}

}  // namespace spopo
