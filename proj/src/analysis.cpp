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

#include "spopo/analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spopo/io.hpp"

namespace spopo {

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

namespace {

double trapezoid_2d(const RMat& f, const std::vector<double>& x, const std::vector<double>& p) {
  auto weights = [](const std::vector<double>& v) {
    std::vector<double> w(v.size(), 0.0);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double h = v[i + 1] - v[i];
      w[i] += h / 2;
      w[i + 1] += h / 2;
    }
    return w;
  };
  const auto wx = weights(x);
  const auto wp = weights(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) acc += wp[i] * wx[j] * f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return acc;
}

}  // namespace

WignerGrid wigner(const DensityOperator& rho, const std::vector<double>& x, const std::vector<double>& p,
                  double integral_tol) {
  if (rho.space.mode_count() != 1) throw std::invalid_argument("wigner needs a single-mode state; reduce with partial_trace first");
  if (x.size() < 2 || p.size() < 2) throw std::invalid_argument("Wigner grid needs at least two points per axis");
  const Eigen::Index n = rho.matrix.rows();
  const Eigen::Index rows = static_cast<Eigen::Index>(p.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(x.size());

  WignerGrid g;
  g.x = x;
  g.p = p;
  g.W = RMat::Zero(rows, cols);
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const cplx a = cplx(x[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(i)]) / std::numbers::sqrt2;
      const cplx ac = std::conj(a);
      w[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
      double acc = rho.matrix(0, 0).real() * w[0].real();
      for (Eigen::Index k = 1; k < n; ++k) {
        w[k] = 2.0 * a * w[k - 1] / std::sqrt(static_cast<double>(k));
        acc += 2.0 * (rho.matrix(0, k) * w[k]).real();
      }
      for (Eigen::Index m = 1; m < n; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        cplx temp = w[m];
        w[m] = (2.0 * ac * temp - sm * w[m - 1]) / sm;
        acc += (rho.matrix(m, m) * w[m]).real();
        for (Eigen::Index k = m + 1; k < n; ++k) {
          const cplx next = (2.0 * a * w[k - 1] - sm * temp) / std::sqrt(static_cast<double>(k));
          temp = w[k];
          w[k] = next;
          acc += 2.0 * (rho.matrix(m, k) * w[k]).real();
        }
      }
      g.W(i, j) = acc;
    }
  }
  g.integral = trapezoid_2d(g.W, x, p);
  if (std::abs(g.integral - 1.0) > integral_tol) {
    std::ostringstream msg;
    msg << "Wigner grid integral is " << g.integral << "; widen or refine the grid";
    g.warning = msg.str();
  }
  return g;
}

double wigner_coherent_superposition(const std::vector<cplx>& coeffs, const std::vector<cplx>& betas, double x,
                                     double p) {
  if (coeffs.size() != betas.size() || coeffs.empty()) throw std::invalid_argument("coefficient and amplitude lists must match");
  auto overlap = [](cplx g, cplx b) { return std::exp(-0.5 * std::norm(g) - 0.5 * std::norm(b) + std::conj(g) * b); };
  const cplx a = cplx(x, p) / std::numbers::sqrt2;
  cplx norm = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    for (std::size_t j = 0; j < betas.size(); ++j) {
      const cplx c = coeffs[i] * std::conj(coeffs[j]);
      const cplx ov = overlap(betas[j], betas[i]);  // <beta_j|beta_i>
      norm += c * ov;
      acc += c * ov * std::exp(-2.0 * (std::conj(a) - std::conj(betas[j])) * (a - betas[i]));
    }
  }
  return (acc / norm).real() / std::numbers::pi;
}

double negative_volume(const WignerGrid& grid) { return (trapezoid_2d(grid.W.cwiseAbs(), grid.x, grid.p) - 1.0) / 2.0; }

double purity(const DensityOperator& rho) { return (rho.matrix * rho.matrix).trace().real(); }

StateVector cat_state(const FockSpace& space, double p, double tolerance) {
  if (!(p >= 0.0)) throw std::invalid_argument("cat amplitude p must be >= 0");
  const cplx alpha(0.0, std::sqrt(p));
  const StateVector plus = coherent_state(space, alpha, tolerance);
  const StateVector minus = coherent_state(space, -alpha, tolerance);
  return StateVector(space, plus.amplitudes + minus.amplitudes).normalized();
}

double cat_fidelity(const DensityOperator& rho, double p, double tolerance) {
  if (rho.space.mode_count() != 1) throw std::invalid_argument("cat fidelity needs a single-mode state");
  const StateVector cat = cat_state(rho.space, p, tolerance);
  return cat.amplitudes.dot(rho.matrix * cat.amplitudes).real();
}

std::string FluxSpectrum::to_csv() const {
  const bool pump = !input.empty();
  CsvTable table(pump ? std::vector<std::string>{"index", "flux", "input", "coverage"}
                      : std::vector<std::string>{"index", "flux"});
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (pump) {
      table.add_row({static_cast<double>(index[i]), flux[i], input[i], coverage[i]});
    } else {
      table.add_row({static_cast<double>(index[i]), flux[i]});
    }
  }
  return table.str();
}

FluxSpectrum flux_spectrum_signal(const DensityOperator& rho, const SupermodeSet& sm) {
  const int n = rho.space.mode_count();
  if (n > sm.n_signal()) throw std::invalid_argument("state has more modes than retained supermodes");
  Eigen::MatrixXcd corr(n, n);  // <S_i^+ S_j>
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) corr(i, j) = expectation(creation(rho.space, i) * annihilation(rho.space, j), rho);
  }
  FluxSpectrum out;
  const Eigen::Index lines = sm.T.cols();
  for (Eigen::Index m = 0; m < lines; ++m) {
    const Eigen::VectorXcd t = sm.T.col(m).head(n);
    out.index.push_back(static_cast<int>(m) - sm.half_width);
    out.flux.push_back(2.0 * t.dot(corr.transpose() * t).real());
  }
  out.metadata = {{"retained_supermodes", n}, {"units", "kappa"}};
  return out;
}

FluxSpectrum flux_spectrum_pump(const DensityOperator& rho, const OpenSystemModel& model, const SupermodeSet& sm) {
  if (!(rho.space == model.space())) throw std::invalid_argument("state and model live on different spaces");
  std::vector<const LindbladChannel*> channels;
  for (const auto& ch : model.lindblads()) {
    if (ch.kind == ChannelKind::nonlinear) channels.push_back(&ch);
  }
  const auto nk = static_cast<Eigen::Index>(channels.size());
  for (const auto* ch : channels) {
    if (ch->index < 1 || ch->index > sm.R.rows()) throw std::out_of_range("pump label outside the pump basis");
  }
  Eigen::MatrixXcd M(nk, nk);  // <L_k^+ L_l>
  for (Eigen::Index k = 0; k < nk; ++k) {
    for (Eigen::Index l = 0; l < nk; ++l) M(k, l) = expectation(channels[k]->op.adjoint() * channels[l]->op, rho);
  }
  FluxSpectrum out;
  const double kappa = model.params().kappa.value_or(1.0);
  double total_coverage = 0.0;
  for (Eigen::Index q = 0; q < sm.R.cols(); ++q) {
    Eigen::VectorXd r(nk);
    cplx drive = 0.0;
    double cover = 0.0;
    for (Eigen::Index k = 0; k < nk; ++k) {
      r(k) = sm.R(channels[k]->index - 1, q);
      drive += r(k) * channels[k]->displacement;
      cover += r(k) * r(k);
    }
    out.index.push_back(static_cast<int>(q) + sm.q_min);
    out.flux.push_back((r.cast<cplx>().dot(M * r.cast<cplx>())).real() / kappa);
    out.input.push_back(std::norm(drive) / kappa);
    out.coverage.push_back(cover);
    total_coverage += cover;
  }
  std::vector<int> labels;
  for (const auto* ch : channels) labels.push_back(ch->index);
  out.metadata = {{"retained_labels", labels},
                  {"units", "kappa"},
                  {"mean_line_coverage", total_coverage / static_cast<double>(sm.R.cols())}};
  return out;
}

}  // namespace spopo
