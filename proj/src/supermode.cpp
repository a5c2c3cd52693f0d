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

#include "spopo/supermode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spopo {

RMat hermite_gaussian_samples(double Np, int q_min, int q_max, int count) {
  if (!(Np > 0.0)) throw std::invalid_argument("Hermite-Gaussian width Np must be > 0");
  if (q_max < q_min) throw std::invalid_argument("empty pump grid");
  const int Q = q_max - q_min + 1;
  if (count < 1 || count > Q) {
    throw std::invalid_argument("Hermite-Gaussian count " + std::to_string(count) + " exceeds pump grid size " +
                                std::to_string(Q));
  }
  // Normalized Hermite functions via the stable three-term recurrence
  //   psi_n = sqrt(2/n) x psi_{n-1} - sqrt((n-1)/n) psi_{n-2},
  // scaled by Np^{-1/2} for the q/Np argument.
  RMat out(count, Q);
  const double pref = std::pow(M_PI, -0.25) / std::sqrt(Np);
  for (int c = 0; c < Q; ++c) {
    const double x = (q_min + c) / Np;
    double prev = 0.0;
    double cur = pref * std::exp(-0.5 * x * x);
    out(0, c) = cur;
    for (int n = 1; n < count; ++n) {
      const double next = std::sqrt(2.0 / n) * x * cur - std::sqrt((n - 1.0) / n) * prev;
      prev = cur;
      cur = next;
      out(n, c) = cur;
    }
  }
  return out;
}

RMat hermite_gaussian_basis(double Np, int q_min, int q_max, int count) {
  const RMat raw = hermite_gaussian_samples(Np, q_min, q_max, count);
  // Modified Gram-Schmidt in row order, twice, so row i is the normalized
  // component of raw row i orthogonal to rows 0..i-1.
  RMat basis = raw;
  for (int i = 0; i < count; ++i) {
    const double original = raw.row(i).norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) basis.row(i) -= basis.row(j).dot(basis.row(i)) * basis.row(j);
    }
    const double remaining = basis.row(i).norm();
    if (!(remaining > 1e-10 * original)) {
      throw std::invalid_argument("Hermite-Gaussian rows are numerically dependent on this grid (order " +
                                  std::to_string(i) + "); adjust Np or the supermode count");
    }
    basis.row(i) /= remaining;
  }
  return basis;
}

std::vector<RMat> transform_pump(const CouplingMatrix& F, const RMat& R, int q_min) {
  const int M = F.half_width();
  if (q_min > -2 * M || q_min + R.cols() - 1 < 2 * M) {
    throw std::invalid_argument("pump basis does not cover q in [-2M, 2M]");
  }
  const int N = 2 * M + 1;
  std::vector<RMat> out;
  out.reserve(static_cast<std::size_t>(R.rows()));
  for (Eigen::Index k = 0; k < R.rows(); ++k) {
    RMat Fp(N, N);
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) Fp(a, b) = R(k, (a - M) + (b - M) - q_min) * F.F(a, b);
    }
    out.push_back(std::move(Fp));
  }
  return out;
}

SignalDiagonalization diagonalize_signal(const RMat& Fp1) {
  if (Fp1.rows() != Fp1.cols() || Fp1.rows() == 0) throw std::invalid_argument("k=1 matrix must be square");
  const double scale = std::max(1.0, Fp1.cwiseAbs().maxCoeff());
  if ((Fp1 - Fp1.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("k=1 coupling matrix is not symmetric");
  }
  const RMat sym = 0.5 * (Fp1 + Fp1.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> eig(sym);
  if (eig.info() != Eigen::Success) throw ConvergenceError("signal eigensolver failed");
  const Eigen::Index N = sym.rows();

  RMat vecs = eig.eigenvectors();
  std::vector<Eigen::Index> lead(static_cast<std::size_t>(N));
  for (Eigen::Index c = 0; c < N; ++c) {
    Eigen::Index idx = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < N; ++r) {
      // strict comparison with a relative margin keeps the lowest index on ties
      if (std::abs(vecs(r, c)) > best * (1.0 + 1e-12)) {
        best = std::abs(vecs(r, c));
        idx = r;
      }
    }
    if (vecs(idx, c) < 0.0) vecs.col(c) *= -1.0;
    lead[static_cast<std::size_t>(c)] = idx;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  const RVec& vals = eig.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(vals(a));
    const double mb = std::abs(vals(b));
    if (std::abs(ma - mb) > 1e-12 * scale) return ma > mb;
    return lead[static_cast<std::size_t>(a)] < lead[static_cast<std::size_t>(b)];
  });

  SignalDiagonalization out;
  out.T.resize(N, N);
  out.Lambda.resize(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const Eigen::Index c = order[static_cast<std::size_t>(i)];
    out.T.row(i) = vecs.col(c).transpose().cast<cplx>();
    out.Lambda(i) = vals(c);
  }
  if (out.Lambda(0) < 0.0) {
    out.T.row(0) *= kI;
    out.Lambda(0) = -out.Lambda(0);
  }
  return out;
}

std::vector<Eigen::MatrixXcd> coupling_tensors(const std::vector<RMat>& Fp, const Eigen::MatrixXcd& T,
                                               int n_signal) {
  if (n_signal < 1 || n_signal > T.rows()) throw std::invalid_argument("signal supermode count out of range");
  const Eigen::MatrixXcd Tc = T.topRows(n_signal).conjugate();
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(Fp.size());
  for (const RMat& f : Fp) {
    if (f.rows() != T.cols() || f.cols() != T.cols()) throw std::invalid_argument("coupling tensor shape mismatch");
    Eigen::MatrixXcd G = Tc * f.cast<cplx>() * Tc.transpose();
    out.push_back(0.5 * (G + G.transpose()));
  }
  return out;
}

Eigen::MatrixXcd loss_matrix(const std::vector<double>& kappas, const Eigen::MatrixXcd& T) {
  if (static_cast<Eigen::Index>(kappas.size()) != T.cols()) {
    throw std::invalid_argument("one decay rate per comb line required");
  }
  Eigen::VectorXcd root(T.cols());
  for (std::size_t m = 0; m < kappas.size(); ++m) {
    if (!(kappas[m] > 0.0)) throw std::invalid_argument("decay rates must be > 0");
    root(static_cast<Eigen::Index>(m)) = std::sqrt(kappas[m]);
  }
  return T * root.asDiagonal() * T.adjoint();
}

SupermodeSet build_supermodes(const CouplingMatrix& F, const SupermodeOptions& options) {
  const int M = F.half_width();
  const int N = 2 * M + 1;
  if (options.n_signal < 1 || options.n_signal > N) {
    throw std::invalid_argument("n_signal must lie in [1, 2M+1]");
  }
  SupermodeSet sm;
  sm.half_width = M;
  sm.q_min = -2 * M;
  sm.R = hermite_gaussian_basis(options.Np, -2 * M, 2 * M, options.k_max);
  const std::vector<RMat> Fp = transform_pump(F, sm.R, sm.q_min);
  SignalDiagonalization diag = diagonalize_signal(Fp.front());
  sm.T = std::move(diag.T);
  sm.Lambda = std::move(diag.Lambda);

  std::vector<RMat> kept;
  for (int label = 1; label <= options.k_max; ++label) {
    if (options.odd_only && label % 2 == 0) continue;
    sm.labels.push_back(label);
    kept.push_back(Fp[static_cast<std::size_t>(label - 1)]);
  }
  sm.G = coupling_tensors(kept, sm.T, options.n_signal);
  const Eigen::MatrixXcd K = loss_matrix(std::vector<double>(static_cast<std::size_t>(N), 1.0), sm.T);
  sm.K = K.topLeftCorner(options.n_signal, options.n_signal);
  return sm;
}

SupermodeSet single_mode_supermodes(double Lambda1) {
  if (!(Lambda1 > 0.0)) throw std::invalid_argument("Lambda1 must be > 0");
  SupermodeSet sm;
  sm.R = RMat::Ones(1, 1);
  sm.labels = {1};
  sm.T = Eigen::MatrixXcd::Ones(1, 1);
  sm.Lambda = RVec::Constant(1, Lambda1);
  sm.G = {Eigen::MatrixXcd::Constant(1, 1, Lambda1)};
  sm.K = Eigen::MatrixXcd::Ones(1, 1);
  return sm;
}

double pump_reconstruction_residual(const CouplingMatrix& F, const RMat& R, int q_min,
                                    const std::vector<int>& labels) {
  const int M = F.half_width();
  const int N = 2 * M + 1;
  const int Q = 4 * M + 1;
  // sum_k R_kq R_kq' restricted to the retained labels.
  RMat P = RMat::Zero(Q, Q);
  for (int label : labels) {
    if (label < 1 || label > R.rows()) throw std::out_of_range("pump label outside basis");
    const RVec row = R.row(label - 1).segment(-2 * M - q_min, Q).transpose();
    P += row * row.transpose();
  }
  double err = 0.0;
  double ref = 0.0;
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      const double f2 = F.F(a, b) * F.F(a, b);
      const int s = a + b;  // column of m+n in the [-2M, 2M] window
      ref += f2;
      for (int q = 0; q < Q; ++q) {
        const double d = P(q, s) - (q == s ? 1.0 : 0.0);
        err += d * d * f2;
      }
    }
  }
  return std::sqrt(err / ref);
}

namespace {

nlohmann::json complex_matrix_json(const Eigen::MatrixXcd& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> rr;
    std::vector<double> ii;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace

void to_json(nlohmann::json& j, const SupermodeSet& sm) {
  std::vector<std::vector<double>> R(static_cast<std::size_t>(sm.R.rows()));
  for (Eigen::Index r = 0; r < sm.R.rows(); ++r) {
    for (Eigen::Index c = 0; c < sm.R.cols(); ++c) R[static_cast<std::size_t>(r)].push_back(sm.R(r, c));
  }
  nlohmann::json G = nlohmann::json::array();
  for (std::size_t k = 0; k < sm.G.size(); ++k) {
    G.push_back({{"label", sm.labels[k]}, {"matrix", complex_matrix_json(sm.G[k])}});
  }
  j = {{"half_width", sm.half_width},
       {"q_min", sm.q_min},
       {"R", R},
       {"labels", sm.labels},
       {"T", complex_matrix_json(sm.T)},
       {"Lambda", std::vector<double>(sm.Lambda.data(), sm.Lambda.data() + sm.Lambda.size())},
       {"G", G},
       {"K", complex_matrix_json(sm.K)}};
}

}  // namespace spopo
