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

// Independent reference computations for the unit tests. Everything here
// is written from first principles with dense arithmetic and shares no
// code with the library beyond the scalar types.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// Single-mode annihilation matrix built entry by entry.
inline Mat destroy(int cutoff) {
  Mat a = Mat::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-stacked Lindblad generator from its textbook definition.
inline Mat liouvillian(const Mat& H, const std::vector<Mat>& jumps) {
  const Eigen::Index d = H.rows();
  const Mat id = Mat::Identity(d, d);
  const cplx i(0.0, 1.0);
  Mat s = -i * kron(id, H) + i * kron(H.transpose(), id);
  for (const auto& L : jumps) {
    const Mat ld = L.adjoint();
    const Mat ldl = ld * L;
    s += kron(L.conjugate(), L) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
  }
  return s;
}

/// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Physicists' Hermite polynomial from the explicit sum formula.
inline double hermite(int n, double x) {
  double acc = 0.0;
  for (int m = 0; m <= n / 2; ++m) {
    acc += (m % 2 == 0 ? 1.0 : -1.0) / (factorial(m) * factorial(n - 2 * m)) * std::pow(2.0 * x, n - 2 * m);
  }
  return factorial(n) * acc;
}

/// Fock amplitudes of a coherent state, without truncation renormalization.
inline std::vector<cplx> coherent_amplitudes(cplx alpha, int cutoff) {
  std::vector<cplx> c(static_cast<std::size_t>(cutoff));
  for (int n = 0; n < cutoff; ++n) c[static_cast<std::size_t>(n)] = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
  return c;
}

}  // namespace oracle
