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

// Adaptive Dormand-Prince 5(4) stepping for Eigen-valued states. Internal.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "spopo/common.hpp"

namespace spopo::detail {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.0;  ///< 0 = unbounded
  long max_steps = 5'000'000;
};

// Scaled max-norm of the embedded error estimate.
template <class State>
double error_norm(const State& err, const State& y0, const State& y1, const OdeOptions& o) {
  const auto scale = (o.atol + o.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array());
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

/// Integrates dy/dt = f(t, y) from t0 through each time in `outputs`
/// (ascending, all >= t0), calling observe(index, t, y) at each. `after_step`
/// may project y after every accepted step (e.g. re-symmetrize).
template <class State, class Rhs, class Observe, class AfterStep>
void integrate_dopri5(Rhs&& f, State& y, double t0, std::span<const double> outputs, const OdeOptions& o,
                      Observe&& observe, AfterStep&& after_step) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  double h_prop = o.initial_step;
  long steps = 0;
  State k1 = f(t, y);
  State k2, k3, k4, k5, k6, k7, ynew, err;

  for (std::size_t idx = 0; idx < outputs.size(); ++idx) {
    const double target = outputs[idx];
    if (target < t - 1e-14 * std::max(1.0, std::abs(t))) throw std::invalid_argument("output times must be ascending");
    while (t < target) {
      if (++steps > o.max_steps) throw ConvergenceError("ODE integration exceeded the step budget");
      double h = o.max_step > 0.0 ? std::min(h_prop, o.max_step) : h_prop;
      bool last = false;
      if (t + h >= target || target - (t + h) < 1e-12 * std::max(1.0, std::abs(target))) {
        h = target - t;
        last = true;
      }
      const bool truncated = h < h_prop;
      k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
      k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
      k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
      k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = f(t + h, ynew);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en = error_norm(err, y, ynew, o);
      if (!std::isfinite(en) || en > 1.0) {
        h_prop = h * (std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.1);
        if (h_prop < 1e-14 * std::max(1.0, std::abs(t))) throw ConvergenceError("ODE step size underflow");
        continue;
      }
      t = last ? target : t + h;
      y = std::move(ynew);
      after_step(y);  // only rounding-level projections, so k7 stays valid (FSAL)
      k1 = std::move(k7);
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (!truncated) h_prop = h * fac;
    }
    observe(idx, t, y);
  }
}

}  // namespace spopo::detail
