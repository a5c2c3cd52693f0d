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

// Pump (Hermite-Gaussian) and signal (eigen) supermode bases, and the
// coupling tensors of the nonlinear and linear Lindblad operators written
// in those bases.
//
// Pump supermode labels are 1-based: label k carries Hermite order k-1, so
// label 1 is the Gaussian pump.

#pragma once

#include <vector>

#include "json.hpp"

#include "spopo/common.hpp"
#include "spopo/phasematch.hpp"

namespace spopo {

/// Sampled Hermite-Gaussian rows, (sqrt(pi) Np 2^n n!)^{-1/2} H_n(q/Np) exp(-(q/Np)^2/2)
/// for orders n = 0..count-1 over q = q_min..q_max, without re-orthonormalization.
RMat hermite_gaussian_samples(double Np, int q_min, int q_max, int count);

/// Hermite-Gaussian pump basis re-orthonormalized on the discrete grid
/// (row i = label i+1). Rows stay in order and keep their leading sign,
/// so row 0 remains proportional to the sampled Gaussian.
RMat hermite_gaussian_basis(double Np, int q_min, int q_max, int count);

/// F'^(k)_mn = R_{k, m+n} F_mn for every row of R. `q_min` is the pump
/// index of column 0 of R.
std::vector<RMat> transform_pump(const CouplingMatrix& F, const RMat& R, int q_min);

struct SignalDiagonalization {
  Eigen::MatrixXcd T;  ///< rows are signal supermodes over comb index
  RVec Lambda;         ///< G^(1)_ii, sorted by descending magnitude
};

/// Rows of T are orthonormal eigenvectors of the real symmetric k=1 matrix,
/// ordered by descending |eigenvalue|. Each row's largest-magnitude entry is
/// made positive; if the leading eigenvalue is negative, row 0 picks up a
/// factor i so that Lambda_1 > 0.
SignalDiagonalization diagonalize_signal(const RMat& Fp1);

/// G^(k)_ij = sum_mn F'^(k)_mn T*_im T*_jn, truncated to the first n_signal supermodes.
std::vector<Eigen::MatrixXcd> coupling_tensors(const std::vector<RMat>& Fp, const Eigen::MatrixXcd& T,
                                               int n_signal);

/// K_ij = sum_m sqrt(kappa_m) T_im T*_jm.
Eigen::MatrixXcd loss_matrix(const std::vector<double>& kappas, const Eigen::MatrixXcd& T);

struct SupermodeOptions {
  double Np = 8.0;
  int n_signal = 5;
  int k_max = 40;
  bool odd_only = true;  ///< retain odd pump labels only
};

struct SupermodeSet {
  int half_width = 0;          ///< signal comb half width M
  int q_min = 0;               ///< pump index of column 0 of R (= -2M)
  RMat R;                      ///< rows = pump labels 1..k_max
  std::vector<int> labels;     ///< retained pump labels (1-based), ascending
  Eigen::MatrixXcd T;          ///< full signal basis, (2M+1) x (2M+1)
  RVec Lambda;                 ///< full eigenvalue list
  std::vector<Eigen::MatrixXcd> G;  ///< aligned with `labels`, n_signal x n_signal
  Eigen::MatrixXcd K;          ///< loss matrix for unit kappa, n_signal x n_signal

  int n_signal() const { return static_cast<int>(K.rows()); }
  double Lambda1() const { return Lambda(0); }
  /// Column of R for pump comb index q.
  int pump_column(int q) const { return q - q_min; }
};

SupermodeSet build_supermodes(const CouplingMatrix& F, const SupermodeOptions& options);

/// Trivial one-mode set with G^(1) = [Lambda1] and a single pump label.
SupermodeSet single_mode_supermodes(double Lambda1);

/// Relative Frobenius residual of rebuilding the frequency-basis
/// coefficients sum_k R_kq F'^(k)_mn from the given retained labels, against
/// the exact delta(q, m+n) F_mn.
double pump_reconstruction_residual(const CouplingMatrix& F, const RMat& R, int q_min,
                                    const std::vector<int>& labels);

void to_json(nlohmann::json& j, const SupermodeSet& sm);

}  // namespace spopo
