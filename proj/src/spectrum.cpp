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

#include <cmath>
#include <sstream>

#include "ode.hpp"
#include "spopo/dynamics.hpp"
#include "spopo/io.hpp"

namespace spopo {

std::string SpectrumResult::to_csv() const {
  CsvTable table({"omega", "S"});
  for (std::size_t i = 0; i < omega.size(); ++i) table.add_row({omega[i], S[i]});
  return table.str();
}

SpectrumResult homodyne_spectrum(const OpenSystemModel& model, const LinearOperator& channel,
                                 const std::vector<double>& omega, const SpectrumOptions& options) {
  if (!(channel.space() == model.space())) throw std::invalid_argument("channel lives on a different space");
  if (!(options.tau_max > 0.0) || !(options.dtau > 0.0)) throw std::invalid_argument("tau_max and dtau must be positive");
  const DensityOperator rho_ss = options.rho_ss ? *options.rho_ss : steady_state(model, options.steady).rho;
  if (!(rho_ss.space == model.space())) throw std::invalid_argument("steady state lives on a different space");

  const Liouvillian L(model);
  const SparseMat& c = channel.matrix();
  const SparseMat x = c + SparseMat(c.adjoint());
  const DenseMat& rho = rho_ss.matrix;

  const cplx mean_x = (x * rho).trace();
  DenseMat a = c * rho;
  a += a.adjoint().eval();

  // Simpson's rule needs an even number of intervals.
  auto n = static_cast<long>(std::ceil(options.tau_max / options.dtau - 1e-9));
  if (n % 2 != 0) ++n;
  const double h = options.tau_max / static_cast<double>(n);
  std::vector<double> tau(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) tau[static_cast<std::size_t>(i)] = h * static_cast<double>(i);

  std::vector<cplx> f(tau.size());
  detail::OdeOptions ode;
  ode.rtol = options.rtol;
  ode.atol = options.atol;
  ode.initial_step = std::min(1e-3, h);
  detail::integrate_dopri5(
      [&](double, const DenseMat& y) { return L.apply_hermitian(y); }, a, 0.0, std::span(tau), ode,
      [&](std::size_t i, double, const DenseMat& y) { f[i] = (x * y).trace() - mean_x * mean_x; },
      [](DenseMat& y) { y = (0.5 * (y + y.adjoint())).eval(); });

  double peak = 0.0;
  for (const auto& v : f) peak = std::max(peak, std::abs(v));
  const double tail = std::abs(f.back());
  if (tail > options.decay_tol * peak && tail > 1e-12) {
    std::ostringstream msg;
    msg << "correlation not decayed at tau_max = " << options.tau_max << " (|F| = " << tail << ", peak " << peak
        << "); increase tau_max";
    throw ConvergenceError(msg.str());
  }

  SpectrumResult out;
  out.omega = omega;
  out.S.reserve(omega.size());
  for (double w : omega) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double weight = (i == 0 || i + 1 == tau.size()) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += weight * std::exp(cplx(0.0, -w * tau[i])) * f[i];
    }
    out.S.push_back(1.0 + 2.0 * (acc * (h / 3.0)).real());
  }
  out.tau = std::move(tau);
  out.correlation = std::move(f);
  return out;
}

}  // namespace spopo
