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

#include "spopo/model.hpp"

#include <cmath>
#include <limits>

namespace spopo {

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::lossy: return "lossy";
    case ModelFamily::lossless: return "lossless";
    case ModelFamily::cw_single: return "cw-single";
  }
  return "unknown";
}

ModelFamily parse_family(const std::string& text) {
  if (text == "lossy") return ModelFamily::lossy;
  if (text == "lossless") return ModelFamily::lossless;
  if (text == "cw-single") return ModelFamily::cw_single;
  throw std::invalid_argument("unknown model family '" + text + "' (expected lossy, lossless or cw-single)");
}

OpenSystemModel::OpenSystemModel(FockSpace space, LinearOperator H, std::vector<LindbladChannel> lindblads,
                                 ModelParams params)
    : space_(std::move(space)), H_(std::move(H)), lindblads_(std::move(lindblads)), params_(params) {
  if (!(H_.space() == space_)) throw std::invalid_argument("Hamiltonian acts on a different space");
  const SparseMat anti = H_.matrix() - SparseMat(H_.matrix().adjoint());
  if (anti.nonZeros() > 0 && SparseMat(anti).coeffs().cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("Hamiltonian is not Hermitian");
  }
  for (const auto& ch : lindblads_) {
    if (!(ch.op.space() == space_)) throw std::invalid_argument("Lindblad operator acts on a different space");
  }
}

std::vector<LinearOperator> OpenSystemModel::jump_operators() const {
  std::vector<LinearOperator> out;
  out.reserve(lindblads_.size());
  for (const auto& ch : lindblads_) out.push_back(ch.op);
  return out;
}

const LindbladChannel* OpenSystemModel::nonlinear_channel(int label) const {
  for (const auto& ch : lindblads_) {
    if (ch.kind == ChannelKind::nonlinear && ch.index == label) return &ch;
  }
  return nullptr;
}

const LindbladChannel* OpenSystemModel::linear_channel(int mode) const {
  for (const auto& ch : lindblads_) {
    if (ch.kind == ChannelKind::linear && ch.index == mode) return &ch;
  }
  return nullptr;
}

namespace {

struct Ladder {
  std::vector<LinearOperator> S;
  // pair[i][j] = S_i S_j for i <= j
  std::vector<std::vector<LinearOperator>> pair;
};

Ladder ladder_products(const FockSpace& space) {
  Ladder l;
  const int n = space.mode_count();
  for (int i = 0; i < n; ++i) l.S.push_back(annihilation(space, i));
  l.pair.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      l.pair[static_cast<std::size_t>(i)].push_back(j >= i ? l.S[static_cast<std::size_t>(i)] * l.S[static_cast<std::size_t>(j)]
                                                           : LinearOperator::zero(space));
    }
  }
  return l;
}

// sum_ij c_ij S_i S_j for symmetric c.
LinearOperator quadratic_form(const Ladder& l, const FockSpace& space, const Eigen::MatrixXcd& c) {
  const int n = space.mode_count();
  SparseMat acc(space.dim(), space.dim());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx w = (i == j) ? c(i, j) : c(i, j) + c(j, i);
      if (w != cplx(0.0)) acc += w * l.pair[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].matrix();
    }
  }
  acc.prune(cplx(0.0));
  return {space, std::move(acc)};
}

// (i drive/4) sum_i (Lambda_i/Lambda_1) S_i^2 + h.c.
LinearOperator squeezing_hamiltonian(const Ladder& l, const FockSpace& space, const RVec& ratios, double drive) {
  SparseMat half(space.dim(), space.dim());
  for (int i = 0; i < space.mode_count(); ++i) {
    half += (kI * drive / 4.0 * ratios(i)) * l.pair[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].matrix();
  }
  SparseMat H = half + SparseMat(half.adjoint());
  H.prune(cplx(0.0));
  return {space, std::move(H)};
}

void check_supermodes(const SupermodeSet& sm, const std::vector<int>& cutoffs) {
  if (cutoffs.empty()) throw std::invalid_argument("at least one signal supermode cutoff is required");
  if (static_cast<int>(cutoffs.size()) > sm.n_signal()) {
    throw std::invalid_argument("more cutoffs (" + std::to_string(cutoffs.size()) + ") than retained signal supermodes (" +
                                std::to_string(sm.n_signal()) + ")");
  }
  if (sm.G.size() != sm.labels.size() || sm.labels.empty() || sm.labels.front() != 1) {
    throw std::invalid_argument("supermode set must retain pump label 1 first");
  }
  if (!(sm.Lambda1() > 0.0)) throw std::invalid_argument("Lambda_1 must be positive");
}

OpenSystemModel assemble(const SupermodeSet& sm, const std::vector<int>& cutoffs, ModelParams params, double drive,
                         double nl_scale, double displacement, bool with_linear) {
  check_supermodes(sm, cutoffs);
  FockSpace space(cutoffs);
  const int n = space.mode_count();
  const Ladder l = ladder_products(space);
  const double L1 = sm.Lambda1();
  RVec ratios(n);
  for (int i = 0; i < n; ++i) ratios(i) = sm.G.front()(i, i).real() / L1;

  LinearOperator H = squeezing_hamiltonian(l, space, ratios, drive);
  std::vector<LindbladChannel> channels;
  if (with_linear) {
    for (int i = 0; i < n; ++i) {
      channels.push_back({l.S[static_cast<std::size_t>(i)] * cplx(std::sqrt(2.0)), ChannelKind::linear, i + 1, 0.0});
    }
  }
  for (std::size_t k = 0; k < sm.labels.size(); ++k) {
    const Eigen::MatrixXcd c = sm.G[k].topLeftCorner(n, n) * (nl_scale / L1);
    LinearOperator op = quadratic_form(l, space, c);
    const cplx disp = sm.labels[k] == 1 ? cplx(displacement) : cplx(0.0);
    if (disp != cplx(0.0)) op = op + LinearOperator::identity(space) * disp;
    channels.push_back({std::move(op), ChannelKind::nonlinear, sm.labels[k], disp});
  }
  params.Lambda1 = L1;
  return {space, std::move(H), std::move(channels), params};
}

}  // namespace

OpenSystemModel build_spopo(const SupermodeSet& sm, double r, double eta, const std::vector<int>& cutoffs) {
  if (!(r >= 0.0)) throw std::invalid_argument("pump parameter r must be >= 0");
  if (!(eta > 0.0)) throw std::invalid_argument("nonlinearity eta must be > 0");
  ModelParams params;
  params.family = ModelFamily::lossy;
  params.r = r;
  params.eta = eta;
  params.kappa = 1.0;
  return assemble(sm, cutoffs, params, r, std::sqrt(eta), r / (2.0 * std::sqrt(eta)), true);
}

OpenSystemModel build_lossless(const SupermodeSet& sm, double p, const std::vector<int>& cutoffs) {
  if (!(p >= 0.0)) throw std::invalid_argument("pump parameter p must be >= 0");
  ModelParams params;
  params.family = ModelFamily::lossless;
  params.p = p;
  return assemble(sm, cutoffs, params, p, 1.0, p / 2.0, false);
}

OpenSystemModel restrict_single_mode(const ModelSpec& spec) {
  if (spec.cutoffs.empty()) throw std::invalid_argument("single-mode restriction needs a cutoff");
  const std::vector<int> cut{spec.cutoffs.front()};
  const SupermodeSet one = single_mode_supermodes(1.0);
  if (spec.family == ModelFamily::lossy) return build_spopo(one, spec.r, spec.eta, cut);
  OpenSystemModel m = build_lossless(one, spec.p, cut);
  if (spec.family == ModelFamily::cw_single) {
    ModelParams params = m.params();
    params.family = ModelFamily::cw_single;
    return {m.space(), m.hamiltonian(), m.lindblads(), params};
  }
  return m;
}

OpenSystemModel build_model(const ModelSpec& spec, const SupermodeSet& sm) {
  switch (spec.family) {
    case ModelFamily::lossy: return build_spopo(sm, spec.r, spec.eta, spec.cutoffs);
    case ModelFamily::lossless: return build_lossless(sm, spec.p, spec.cutoffs);
    case ModelFamily::cw_single: return restrict_single_mode(spec);
  }
  throw std::invalid_argument("unknown model family");
}

std::vector<double> linearized_spectrum(double r, double kappa, const std::vector<double>& omega) {
  if (!(r >= 0.0)) throw std::invalid_argument("pump parameter r must be >= 0");
  std::vector<double> out;
  out.reserve(omega.size());
  const double up = kappa * kappa * (1.0 + r) * (1.0 + r);
  const double down = kappa * kappa * (1.0 - r) * (1.0 - r);
  for (double w : omega) {
    const double den = w * w + down;
    out.push_back(den == 0.0 ? std::numeric_limits<double>::infinity() : (w * w + up) / den);
  }
  return out;
}

std::vector<double> linearized_spectrum_squeezed(double r, double kappa, const std::vector<double>& omega) {
  std::vector<double> out = linearized_spectrum(r, kappa, omega);
  for (double& v : out) v = std::isinf(v) ? 0.0 : 1.0 / v;
  return out;
}

nlohmann::json model_summary(const OpenSystemModel& model, const SupermodeSet* sm) {
  const ModelParams& p = model.params();
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& ch : model.lindblads()) {
    channels.push_back({{"kind", ch.kind == ChannelKind::linear ? "linear" : "nonlinear"},
                        {"index", ch.index},
                        {"displacement", {ch.displacement.real(), ch.displacement.imag()}},
                        {"frobenius_norm", ch.op.matrix().norm()}});
  }
  nlohmann::json j = {{"family", to_string(p.family)},
                      {"r", p.r},
                      {"eta", p.eta},
                      {"p", p.p},
                      {"Lambda1", p.Lambda1},
                      {"cutoffs", std::vector<int>(model.space().cutoffs().begin(), model.space().cutoffs().end())},
                      {"dimension", model.space().dim()},
                      {"hamiltonian_norm", model.hamiltonian().matrix().norm()},
                      {"lindblads", channels}};
  j["kappa"] = p.kappa ? nlohmann::json(*p.kappa) : nlohmann::json(nullptr);
  if (sm != nullptr) {
    j["Lambda"] = std::vector<double>(sm->Lambda.data(), sm->Lambda.data() + sm->Lambda.size());
  }
  return j;
}

}  // namespace spopo
