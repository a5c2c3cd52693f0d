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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "ode.hpp"
#include "spopo/dynamics.hpp"
#include "spopo/io.hpp"

namespace spopo {

std::vector<Observable> photon_number_observables(const FockSpace& space) {
  std::vector<Observable> out;
  for (int i = 0; i < space.mode_count(); ++i) out.push_back({"n" + std::to_string(i + 1), number(space, i)});
  return out;
}

const std::vector<cplx>& SimulationRecord::series_for(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("no series named '" + name + "'");
  return series[static_cast<std::size_t>(it - names.begin())];
}

std::string SimulationRecord::to_csv() const {
  std::vector<std::string> header{"t"};
  header.insert(header.end(), names.begin(), names.end());
  CsvTable table(header);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (const auto& s : series) row.push_back(s[i].real());
    table.add_row(row);
  }
  return table.str();
}

namespace {

SparseMat kron(const SparseMat& a, const SparseMat& b) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseMat::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseMat::InnerIterator ib(b, kb); ib; ++ib) {
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
        }
      }
    }
  }
  SparseMat out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SparseMat sparse_identity(Eigen::Index n) {
  SparseMat id(n, n);
  id.setIdentity();
  return id;
}

// tr(O rho) without forming the product.
cplx trace_product(const SparseMat& op, const DenseMat& rho) {
  cplx acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(op, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
  }
  return acc;
}

}  // namespace

std::vector<SparseMat> compress_lindblads(const std::vector<SparseMat>& jumps, double rel_tol) {
  const auto n = static_cast<Eigen::Index>(jumps.size());
  if (n == 0) return {};
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k; l < n; ++l) {
      const cplx g = jumps[k].conjugate().cwiseProduct(jumps[l]).sum();
      gram(k, l) = g;
      gram(l, k) = std::conj(g);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const RVec& w = es.eigenvalues();
  const double top = w.maxCoeff();
  std::vector<SparseMat> out;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    if (!(w(j) > rel_tol * top)) continue;
    SparseMat acc(jumps.front().rows(), jumps.front().cols());
    for (Eigen::Index k = 0; k < n; ++k) acc += es.eigenvectors()(k, j) * jumps[k];
    acc.prune(cplx(0.0));
    out.push_back(std::move(acc));
  }
  return out;
}

Liouvillian::Liouvillian(const SparseMat& H, const std::vector<SparseMat>& jumps, bool compress)
    : H_(H), jumps_(compress ? compress_lindblads(jumps) : jumps) {
  SparseMat damp(H.rows(), H.cols());
  for (const auto& L : jumps_) damp += SparseMat(L.adjoint()) * L;
  H_eff_ = H_ - cplx(0.0, 0.5) * damp;
  H_eff_.prune(cplx(0.0));
}

namespace {
std::vector<SparseMat> model_jumps(const OpenSystemModel& model) {
  std::vector<SparseMat> out;
  for (const auto& ch : model.lindblads()) out.push_back(ch.op.matrix());
  return out;
}
}  // namespace

Liouvillian::Liouvillian(const OpenSystemModel& model, bool compress)
    : Liouvillian(model.hamiltonian().matrix(), model_jumps(model), compress) {}

DenseMat Liouvillian::apply(const DenseMat& rho) const {
  DenseMat out = -kI * (H_eff_ * rho) + kI * (rho * SparseMat(H_eff_.adjoint()));
  for (const auto& L : jumps_) out.noalias() += L * rho * SparseMat(L.adjoint());
  return out;
}

DenseMat Liouvillian::apply_hermitian(const DenseMat& rho) const {
  DenseMat x;
  x.noalias() = H_eff_ * rho;
  DenseMat out = -kI * x;
  out += kI * x.adjoint();
  DenseMat lr, y;
  for (const auto& L : jumps_) {
    lr.noalias() = L * rho;
    y = lr.adjoint();  // rho L^+
    out.noalias() += L * y;
  }
  return out;
}

SparseMat Liouvillian::superoperator() const {
  const SparseMat id = sparse_identity(dim());
  SparseMat s = cplx(0.0, -1.0) * kron(id, H_eff_) + kI * kron(SparseMat(H_eff_.conjugate()), id);
  for (const auto& L : jumps_) s += kron(SparseMat(L.conjugate()), L);
  s.prune(cplx(0.0));
  return s;
}

double liouvillian_residual(const Liouvillian& L, const DenseMat& rho) { return L.apply(rho).norm(); }

namespace {

void hermitize(DenseMat& m) { m = (0.5 * (m + m.adjoint())).eval(); }

void check_output_state(const DenseMat& rho, double t, const MasterOptions& o) {
  const double drift = std::abs(rho.trace() - cplx(1.0));
  if (drift > o.trace_tol) {
    std::ostringstream msg;
    msg << "trace drift " << drift << " at t = " << t << "; tighten rtol/atol";
    throw ConvergenceError(msg.str());
  }
  if (rho.rows() <= o.positivity_check_max_dim) {
    const double low = Eigen::SelfAdjointEigenSolver<DenseMat>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (low < -o.positivity_tol) {
      std::ostringstream msg;
      msg << "density matrix eigenvalue " << low << " at t = " << t
          << " violates positivity; tighten the step tolerances or raise the Fock cutoffs";
      throw ConvergenceError(msg.str());
    }
  }
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }
}

}  // namespace

SimulationRecord evolve_master(const OpenSystemModel& model, const DensityOperator& rho0,
                               const std::vector<double>& t_grid, const std::vector<Observable>& observables,
                               const MasterOptions& options) {
  check_grid(t_grid);
  if (!(rho0.space == model.space())) throw std::invalid_argument("initial state lives on a different space");
  rho0.validate();
  for (const auto& ob : observables) {
    if (!(ob.op.space() == model.space())) throw std::invalid_argument("observable '" + ob.name + "' lives on a different space");
  }
  const Liouvillian L(model, options.compress);

  SimulationRecord rec;
  rec.times = t_grid;
  for (const auto& ob : observables) {
    rec.names.push_back(ob.name);
    rec.series.emplace_back();
    rec.series.back().reserve(t_grid.size());
  }

  detail::OdeOptions ode;
  ode.rtol = options.rtol;
  ode.atol = options.atol;
  ode.max_step = options.max_step;
  DenseMat rho = rho0.matrix;
  detail::integrate_dopri5(
      [&](double, const DenseMat& y) { return L.apply_hermitian(y); }, rho, t_grid.front(), std::span(t_grid), ode,
      [&](std::size_t, double t, const DenseMat& y) {
        check_output_state(y, t, options);
        for (std::size_t k = 0; k < observables.size(); ++k) {
          rec.series[k].push_back(trace_product(observables[k].op.matrix(), y));
        }
      },
      hermitize);
  rec.final_density = DensityOperator(model.space(), std::move(rho));
  return rec;
}

namespace {

SteadyStateResult steady_long_time(const OpenSystemModel& model, const Liouvillian& L, const SteadyStateOptions& o) {
  DenseMat rho = o.initial ? o.initial->matrix : DensityOperator::pure(StateVector::vacuum(model.space())).matrix;
  detail::OdeOptions ode;
  ode.rtol = o.rtol;
  ode.atol = o.atol;
  double t = 0.0;
  double res = liouvillian_residual(L, rho);
  double h = ode.initial_step;
  while (res >= o.residual_tol) {
    if (t >= o.t_max) {
      std::ostringstream msg;
      msg << "steady state not reached by t = " << t << " (residual " << res << ")";
      throw ConvergenceError(msg.str());
    }
    const std::vector<double> out{t + o.chunk};
    ode.initial_step = h;
    detail::integrate_dopri5([&](double, const DenseMat& y) { return L.apply_hermitian(y); }, rho, t,
                             std::span(out), ode, [](std::size_t, double, const DenseMat&) {}, hermitize);
    t = out.front();
    rho /= rho.trace();
    res = liouvillian_residual(L, rho);
    h = std::min(o.chunk, 0.1);
  }
  SteadyStateResult r{DensityOperator(model.space(), std::move(rho)), res, SteadyStateMethod::long_time, t};
  return r;
}

SteadyStateResult steady_null_space(const OpenSystemModel& model, const Liouvillian& L, const SteadyStateOptions& o) {
  const Eigen::Index d = L.dim();
  SparseMat s = L.superoperator();
  // Replace the equation for rho(0,0) by the trace condition.
  SparseMat sr = s.transpose();  // column 0 of sr is row 0 of s
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int k = 0; k < sr.outerSize(); ++k) {
    if (k == 0) continue;
    for (SparseMat::InnerIterator it(sr, k); it; ++it) trip.emplace_back(it.col(), it.row(), it.value());
  }
  for (Eigen::Index i = 0; i < d; ++i) trip.emplace_back(0, i * d + i, 1.0);
  SparseMat a(d * d, d * d);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  CVec rhs = CVec::Zero(d * d);
  rhs(0) = 1.0;

  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw ConvergenceError("Liouvillian null space is degenerate or the factorization failed; use the long-time method");
  }
  const CVec v = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !v.allFinite()) throw ConvergenceError("null-space solve failed");
  DenseMat rho = Eigen::Map<const DenseMat>(v.data(), d, d);
  hermitize(rho);
  rho /= rho.trace();
  const double res = liouvillian_residual(L, rho);
  if (!(res < o.residual_tol)) {
    std::ostringstream msg;
    msg << "null-space steady state has residual " << res << "; the steady state may not be unique";
    throw ConvergenceError(msg.str());
  }
  return {DensityOperator(model.space(), std::move(rho)), res, SteadyStateMethod::null_space, 0.0};
}

}  // namespace

SteadyStateResult steady_state(const OpenSystemModel& model, const SteadyStateOptions& options) {
  if (model.lindblads().empty()) throw ConvergenceError("a model without Lindblad operators has no attracting steady state");
  const Liouvillian L(model);
  SteadyStateMethod m = options.method;
  if (m == SteadyStateMethod::automatic) {
    // Lossless models conserve photon-number parity, so their kernel is degenerate.
    const bool has_linear = model.linear_channel(1) != nullptr;
    m = (has_linear && model.space().dim() <= options.null_space_max_dim) ? SteadyStateMethod::null_space
                                                                            : SteadyStateMethod::long_time;
  }
  return m == SteadyStateMethod::null_space ? steady_null_space(model, L, options)
                                            : steady_long_time(model, L, options);
}

}  // namespace spopo
