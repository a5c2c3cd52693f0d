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

#include "ode.hpp"
#include "spopo/dynamics.hpp"

namespace spopo {

MeanFieldRecord mean_field(const SupermodeSet& sm, double drive, double kappa, const Eigen::VectorXcd& S0,
                           const std::vector<double>& t_grid, const MeanFieldOptions& options) {
  const Eigen::Index n = S0.size();
  if (n == 0 || n > sm.n_signal()) throw std::invalid_argument("S0 length must be between 1 and the retained supermode count");
  if (sm.G.empty() || sm.labels.front() != 1) throw std::invalid_argument("supermode set must retain pump label 1");
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }

  const Eigen::MatrixXcd K = sm.K.topLeftCorner(n, n);
  const Eigen::MatrixXcd loss = kappa * (K.adjoint() * K);
  std::vector<Eigen::MatrixXcd> G;
  for (const auto& g : sm.G) G.push_back(g.topLeftCorner(n, n));

  auto rhs = [&](double, const Eigen::VectorXcd& s) {
    const Eigen::VectorXcd sc = s.conjugate();
    Eigen::VectorXcd d = -loss * s - (2.0 * drive) * (G.front() * sc);
    for (const auto& g : G) d -= (s.transpose() * g * s).value() * (g * sc);
    return d;
  };

  detail::OdeOptions ode;
  ode.rtol = options.rtol;
  ode.atol = options.atol;
  MeanFieldRecord rec;
  rec.times = t_grid;
  Eigen::VectorXcd s = S0;
  detail::integrate_dopri5(rhs, s, t_grid.front(), std::span(t_grid), ode,
                           [&](std::size_t, double, const Eigen::VectorXcd& y) { rec.S.push_back(y); },
                           [](Eigen::VectorXcd&) {});
  return rec;
}

}  // namespace spopo
