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

#include "spopo/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spopo {

using Index = Eigen::Index;

FockSpace::FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw std::invalid_argument("FockSpace needs at least one mode");
  for (int c : cutoffs_) {
    if (c < 2) throw std::invalid_argument("Fock cutoff must be >= 2, got " + std::to_string(c));
  }
  strides_.assign(cutoffs_.size(), 1);
  for (int m = mode_count() - 1; m >= 0; --m) {
    strides_[static_cast<std::size_t>(m)] = dim_;
    dim_ *= cutoffs_[static_cast<std::size_t>(m)];
  }
}

int FockSpace::cutoff(int mode) const {
  if (mode < 0 || mode >= mode_count()) {
    throw std::out_of_range("mode " + std::to_string(mode) + " out of range for " +
                            std::to_string(mode_count()) + "-mode space");
  }
  return cutoffs_[static_cast<std::size_t>(mode)];
}

Index FockSpace::flat_index(std::span<const int> levels) const {
  if (static_cast<int>(levels.size()) != mode_count()) {
    throw std::invalid_argument("level list does not match mode count");
  }
  Index flat = 0;
  for (int m = 0; m < mode_count(); ++m) {
    const int n = levels[static_cast<std::size_t>(m)];
    if (n < 0 || n >= cutoff(m)) throw std::out_of_range("Fock level outside truncation");
    flat += n * stride(m);
  }
  return flat;
}

std::vector<int> FockSpace::levels(Index flat) const {
  if (flat < 0 || flat >= dim_) throw std::out_of_range("flat index outside space");
  std::vector<int> out(cutoffs_.size());
  for (int m = 0; m < mode_count(); ++m) {
    out[static_cast<std::size_t>(m)] = static_cast<int>(flat / stride(m));
    flat %= stride(m);
  }
  return out;
}

FockSpace FockSpace::subspace(std::span<const int> modes) const {
  std::vector<int> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) throw std::invalid_argument("subspace needs at least one mode");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate mode in subspace selection");
  }
  std::vector<int> cut;
  for (int m : sorted) cut.push_back(cutoff(m));
  return FockSpace(std::move(cut));
}

// ---------------------------------------------------------------------------

LinearOperator::LinearOperator(FockSpace space, SparseMat matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    throw std::invalid_argument("operator matrix does not match space dimension");
  }
  matrix_.makeCompressed();
}

LinearOperator LinearOperator::identity(const FockSpace& space) {
  SparseMat id(space.dim(), space.dim());
  id.setIdentity();
  return {space, std::move(id)};
}

LinearOperator LinearOperator::zero(const FockSpace& space) {
  return {space, SparseMat(space.dim(), space.dim())};
}

LinearOperator LinearOperator::adjoint() const {
  return {space_, SparseMat(matrix_.adjoint())};
}

void LinearOperator::require_same_space(const LinearOperator& rhs) const {
  if (!(space_ == rhs.space_)) throw std::invalid_argument("operators act on different spaces");
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const {
  require_same_space(rhs);
  return {space_, SparseMat(matrix_ + rhs.matrix_)};
}

LinearOperator LinearOperator::operator-(const LinearOperator& rhs) const {
  require_same_space(rhs);
  return {space_, SparseMat(matrix_ - rhs.matrix_)};
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  require_same_space(rhs);
  return {space_, SparseMat(matrix_ * rhs.matrix_)};
}

LinearOperator LinearOperator::operator*(cplx scale) const {
  return {space_, SparseMat(matrix_ * scale)};
}

// ---------------------------------------------------------------------------

StateVector::StateVector(FockSpace s, CVec a) : space(std::move(s)), amplitudes(std::move(a)) {
  if (amplitudes.size() != space.dim()) throw std::invalid_argument("state vector size mismatch");
}

StateVector StateVector::vacuum(const FockSpace& space) {
  CVec v = CVec::Zero(space.dim());
  v(0) = 1.0;
  return {space, std::move(v)};
}

StateVector StateVector::fock(const FockSpace& space, std::span<const int> levels) {
  CVec v = CVec::Zero(space.dim());
  v(space.flat_index(levels)) = 1.0;
  return {space, std::move(v)};
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  return {space, amplitudes / n};
}

DensityOperator::DensityOperator(FockSpace s, DenseMat m) : space(std::move(s)), matrix(std::move(m)) {
  if (matrix.rows() != space.dim() || matrix.cols() != space.dim()) {
    throw std::invalid_argument("density matrix does not match space dimension");
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return {psi.space, psi.amplitudes * psi.amplitudes.adjoint()};
}

void DensityOperator::validate(double trace_tol, double positivity_tol) const {
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > trace_tol) {
    std::ostringstream msg;
    msg << "density operator is not Hermitian (max deviation " << herm << ")";
    throw std::domain_error(msg.str());
  }
  const cplx tr = matrix.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream msg;
    msg << "density operator trace " << tr << " differs from 1";
    throw std::domain_error(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<DenseMat> eig(matrix, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -positivity_tol) {
    std::ostringstream msg;
    msg << "density operator has negative eigenvalue " << eig.eigenvalues().minCoeff();
    throw std::domain_error(msg.str());
  }
}

// ---------------------------------------------------------------------------

LinearOperator embed(const FockSpace& space, int mode, const SparseMat& single_mode_op) {
  const int c = space.cutoff(mode);
  if (single_mode_op.rows() != c || single_mode_op.cols() != c) {
    throw std::invalid_argument("single-mode operator does not match mode cutoff");
  }
  const Index right = space.stride(mode);
  const Index left = space.dim() / (right * c);
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(single_mode_op.nonZeros() * left * right));
  for (Index k = 0; k < single_mode_op.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(single_mode_op, k); it; ++it) {
      for (Index l = 0; l < left; ++l) {
        const Index row0 = (l * c + it.row()) * right;
        const Index col0 = (l * c + it.col()) * right;
        for (Index r = 0; r < right; ++r) triplets.emplace_back(row0 + r, col0 + r, it.value());
      }
    }
  }
  SparseMat m(space.dim(), space.dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return {space, std::move(m)};
}

LinearOperator annihilation(const FockSpace& space, int mode) {
  const int c = space.cutoff(mode);
  SparseMat a(c, c);
  for (int n = 1; n < c; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  return embed(space, mode, a);
}

LinearOperator creation(const FockSpace& space, int mode) {
  return annihilation(space, mode).adjoint();
}

LinearOperator number(const FockSpace& space, int mode) {
  const int c = space.cutoff(mode);
  SparseMat n(c, c);
  for (int k = 1; k < c; ++k) n.insert(k, k) = static_cast<double>(k);
  return embed(space, mode, n);
}

cplx expectation(const LinearOperator& op, const StateVector& psi) {
  if (!(op.space() == psi.space)) throw std::invalid_argument("expectation: dimension mismatch");
  return psi.amplitudes.dot(op.matrix() * psi.amplitudes);
}

cplx expectation(const LinearOperator& op, const DensityOperator& rho) {
  if (!(op.space() == rho.space)) throw std::invalid_argument("expectation: dimension mismatch");
  cplx acc = 0.0;
  const SparseMat& m = op.matrix();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) acc += it.value() * rho.matrix(it.col(), it.row());
  }
  return acc;
}

namespace {

// Flat-index offsets of every configuration of `modes` within `space`.
std::vector<Index> offsets_for(const FockSpace& space, const std::vector<int>& modes) {
  std::vector<Index> offsets{0};
  for (int m : modes) {
    std::vector<Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(space.cutoff(m)));
    for (Index base : offsets) {
      for (int n = 0; n < space.cutoff(m); ++n) next.push_back(base + n * space.stride(m));
    }
    offsets = std::move(next);
  }
  return offsets;
}

struct Split {
  std::vector<Index> kept;
  std::vector<Index> traced;
  FockSpace reduced;
};

Split split_modes(const FockSpace& space, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  for (int m : kept) {
    if (m < 0 || m >= space.mode_count()) throw std::out_of_range("partial_trace: mode index out of range");
  }
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace: duplicate mode in keep set");
  }
  std::vector<int> traced;
  for (int m = 0; m < space.mode_count(); ++m) {
    if (!std::binary_search(kept.begin(), kept.end(), m)) traced.push_back(m);
  }
  return {offsets_for(space, kept), offsets_for(space, traced), space.subspace(kept)};
}

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  Split s = split_modes(rho.space, keep);
  const auto dk = static_cast<Index>(s.kept.size());
  DenseMat out = DenseMat::Zero(dk, dk);
  for (Index a = 0; a < dk; ++a) {
    for (Index b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (Index t : s.traced) acc += rho.matrix(s.kept[a] + t, s.kept[b] + t);
      out(a, b) = acc;
    }
  }
  return {std::move(s.reduced), std::move(out)};
}

DensityOperator partial_trace(const StateVector& psi, std::span<const int> keep) {
  Split s = split_modes(psi.space, keep);
  const auto dk = static_cast<Index>(s.kept.size());
  const auto dt = static_cast<Index>(s.traced.size());
  DenseMat block(dk, dt);
  for (Index a = 0; a < dk; ++a) {
    for (Index t = 0; t < dt; ++t) block(a, t) = psi.amplitudes(s.kept[a] + s.traced[t]);
  }
  return {std::move(s.reduced), block * block.adjoint()};
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> cut(a.space.cutoffs().begin(), a.space.cutoffs().end());
  cut.insert(cut.end(), b.space.cutoffs().begin(), b.space.cutoffs().end());
  const Index da = a.matrix.rows();
  const Index db = b.matrix.rows();
  DenseMat out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix(i, j) * b.matrix;
  }
  return {FockSpace(std::move(cut)), std::move(out)};
}

StateVector coherent_state(const FockSpace& space, cplx alpha, double tolerance) {
  if (space.mode_count() != 1) throw std::invalid_argument("coherent_state needs a single-mode space");
  const int c = space.cutoff(0);
  CVec v(c);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < c; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  const double kept = v.squaredNorm();
  const double discarded = 1.0 - kept;
  if (discarded > tolerance) {
    std::ostringstream msg;
    msg << "coherent state |" << alpha << "> loses weight " << discarded << " to cutoff " << c;
    throw TruncationError(msg.str(), discarded);
  }
  return {space, v / std::sqrt(kept)};
}

}  // namespace spopo
