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

// Truncated multimode bosonic Fock spaces and the operators, states and
// reductions that live on them. Mode 0 is the most significant tensor
// factor, so flat index = ((n_0 * c_1 + n_1) * c_2 + n_2) ...

#pragma once

#include <span>
#include <vector>

#include "spopo/common.hpp"

namespace spopo {

class FockSpace {
 public:
  /// Mode i spans Fock levels 0..cutoffs[i]-1; every cutoff must be >= 2.
  explicit FockSpace(std::vector<int> cutoffs);

  static FockSpace single(int cutoff) { return FockSpace({cutoff}); }

  int mode_count() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int mode) const;
  std::span<const int> cutoffs() const { return cutoffs_; }
  Eigen::Index dim() const { return dim_; }

  /// Stride of a mode in the flat index.
  Eigen::Index stride(int mode) const { return strides_.at(static_cast<std::size_t>(mode)); }
  Eigen::Index flat_index(std::span<const int> levels) const;
  std::vector<int> levels(Eigen::Index flat) const;

  /// Subspace spanned by the given modes, in ascending mode order.
  FockSpace subspace(std::span<const int> modes) const;

  bool operator==(const FockSpace& other) const { return cutoffs_ == other.cutoffs_; }

 private:
  std::vector<int> cutoffs_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index dim_ = 1;
};

/// Sparse operator bound to a Fock space. Immutable once built.
class LinearOperator {
 public:
  LinearOperator(FockSpace space, SparseMat matrix);

  static LinearOperator identity(const FockSpace& space);
  static LinearOperator zero(const FockSpace& space);

  const FockSpace& space() const { return space_; }
  const SparseMat& matrix() const { return matrix_; }
  Eigen::Index dim() const { return space_.dim(); }

  LinearOperator adjoint() const;
  DenseMat dense() const { return DenseMat(matrix_); }

  LinearOperator operator+(const LinearOperator& rhs) const;
  LinearOperator operator-(const LinearOperator& rhs) const;
  LinearOperator operator*(const LinearOperator& rhs) const;
  LinearOperator operator*(cplx scale) const;
  friend LinearOperator operator*(cplx scale, const LinearOperator& op) { return op * scale; }

 private:
  void require_same_space(const LinearOperator& rhs) const;

  FockSpace space_;
  SparseMat matrix_;
};

struct StateVector {
  FockSpace space;
  CVec amplitudes;

  StateVector(FockSpace s, CVec a);

  static StateVector vacuum(const FockSpace& space);
  static StateVector fock(const FockSpace& space, std::span<const int> levels);

  double norm() const { return amplitudes.norm(); }
  StateVector normalized() const;
};

struct DensityOperator {
  FockSpace space;
  DenseMat matrix;

  DensityOperator(FockSpace s, DenseMat m);

  static DensityOperator pure(const StateVector& psi);

  cplx trace() const { return matrix.trace(); }

  /// Throws std::domain_error when the matrix is not Hermitian, not unit
  /// trace, or has an eigenvalue below -positivity_tol.
  void validate(double trace_tol = 1e-8, double positivity_tol = 1e-8) const;
};

/// a_mode embedded as I x ... x a x ... x I, with a|n> = sqrt(n)|n-1>.
LinearOperator annihilation(const FockSpace& space, int mode);
LinearOperator creation(const FockSpace& space, int mode);
LinearOperator number(const FockSpace& space, int mode);

/// Lifts a single-mode operator (cutoff(mode) square) onto the full space.
LinearOperator embed(const FockSpace& space, int mode, const SparseMat& single_mode_op);

cplx expectation(const LinearOperator& op, const StateVector& psi);
cplx expectation(const LinearOperator& op, const DensityOperator& rho);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);
DensityOperator partial_trace(const StateVector& psi, std::span<const int> keep);

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// Default fraction of the norm a state constructor may lose to truncation.
inline constexpr double kTruncationTolerance = 1e-6;

/// Truncated coherent state on a single-mode space, renormalized. Throws
/// TruncationError when the discarded weight exceeds `tolerance`.
StateVector coherent_state(const FockSpace& space, cplx alpha,
                           double tolerance = kTruncationTolerance);

}  // namespace spopo
