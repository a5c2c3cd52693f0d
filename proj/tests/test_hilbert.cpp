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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "spopo/hilbert.hpp"

using namespace spopo;

namespace {

DensityOperator random_density(const FockSpace& space, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  DenseMat a(space.dim(), space.dim());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = cplx(g(gen), g(gen));
  DenseMat rho = a * a.adjoint();
  rho /= rho.trace();
  return {space, rho};
}

}  // namespace

TEST_CASE("fock space layout") {
  const FockSpace s({3, 2, 4});
  CHECK(s.dim() == 24);
  CHECK(s.mode_count() == 3);
  CHECK(s.stride(0) == 8);
  CHECK(s.stride(2) == 1);
  const std::vector<int> lv{2, 1, 3};
  CHECK(s.flat_index(lv) == 2 * 8 + 1 * 4 + 3);
  for (Eigen::Index f = 0; f < s.dim(); ++f) CHECK(s.flat_index(s.levels(f)) == f);
  CHECK_THROWS_AS(FockSpace({3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(FockSpace(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(s.cutoff(3), std::out_of_range);
}

TEST_CASE("annihilation matrix elements") {
  const FockSpace one = FockSpace::single(2);
  const DenseMat a = annihilation(one, 0).dense();
  CHECK(a(0, 1) == cplx(1.0));
  CHECK(a(0, 0) == cplx(0.0));
  CHECK(a(1, 0) == cplx(0.0));
  const std::vector<int> l1{1};
  const CVec out = annihilation(one, 0).matrix() * StateVector::fock(one, l1).amplitudes;
  CHECK(out(0) == cplx(1.0));
  CHECK(out(1) == cplx(0.0));

  const FockSpace four = FockSpace::single(4);
  CHECK(std::abs(annihilation(four, 0).dense()(2, 3) - std::sqrt(3.0)) < 1e-15);
  CHECK((annihilation(four, 0).dense() - oracle::destroy(4)).norm() == 0.0);

  const FockSpace multi({3, 4, 2});
  for (int m = 0; m < 3; ++m) {
    CHECK((annihilation(multi, m).matrix() * StateVector::vacuum(multi).amplitudes).norm() == 0.0);
  }
  CHECK_THROWS_AS(annihilation(multi, 3), std::out_of_range);
}

TEST_CASE("embedding matches explicit kronecker products") {
  const FockSpace s({3, 4, 2});
  const oracle::Mat i3 = oracle::Mat::Identity(3, 3), i4 = oracle::Mat::Identity(4, 4), i2 = oracle::Mat::Identity(2, 2);
  CHECK((annihilation(s, 0).dense() - oracle::kron(oracle::kron(oracle::destroy(3), i4), i2)).norm() == 0.0);
  CHECK((annihilation(s, 1).dense() - oracle::kron(oracle::kron(i3, oracle::destroy(4)), i2)).norm() == 0.0);
  CHECK((annihilation(s, 2).dense() - oracle::kron(oracle::kron(i3, i4), oracle::destroy(2))).norm() == 0.0);
}

TEST_CASE("operator algebra properties") {
  const FockSpace s({4, 3});
  const LinearOperator a0 = annihilation(s, 0), a1 = annihilation(s, 1);
  const LinearOperator mix = a0 * a1 * cplx(0.3, -1.2) + creation(s, 1);
  CHECK((mix.adjoint().adjoint().matrix() - mix.matrix()).norm() == 0.0);

  // associativity
  const LinearOperator x = a0 + creation(s, 1), y = a1 * a0, z = number(s, 0);
  CHECK(((x * y) * z).dense().isApprox((x * (y * z)).dense(), 1e-14));

  // [a_i, a_j^+] = delta_ij away from each mode's top level
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const DenseMat c = (annihilation(s, i) * creation(s, j) - creation(s, j) * annihilation(s, i)).dense();
      for (Eigen::Index f = 0; f < s.dim(); ++f) {
        const auto lv = s.levels(f);
        if (lv[0] == s.cutoff(0) - 1 || lv[1] == s.cutoff(1) - 1) continue;
        for (Eigen::Index g = 0; g < s.dim(); ++g) {
          const cplx expect = (i == j && f == g) ? cplx(1.0) : cplx(0.0);
          CHECK(std::abs(c(g, f) - expect) < 1e-14);
        }
      }
    }
  }

  // embed(AB) = embed(A) embed(B)
  const SparseMat A = oracle::destroy(3).sparseView();
  const SparseMat B = (oracle::destroy(3).adjoint() + 2.0 * oracle::Mat::Identity(3, 3)).sparseView();
  const FockSpace t({2, 3, 2});
  CHECK((embed(t, 1, A * B).dense() - (embed(t, 1, A) * embed(t, 1, B)).dense()).norm() < 1e-14);

  CHECK_THROWS_AS(a0 + annihilation(t, 0), std::invalid_argument);
}

TEST_CASE("expectation values") {
  const FockSpace s({5, 3});
  CHECK(expectation(number(s, 0), StateVector::vacuum(s)) == cplx(0.0));
  const std::vector<int> lv{2, 1};
  CHECK(std::abs(expectation(number(s, 0), StateVector::fock(s, lv)) - cplx(2.0)) < 1e-15);
  CHECK(std::abs(expectation(number(s, 1), DensityOperator::pure(StateVector::fock(s, lv))) - cplx(1.0)) < 1e-15);
  const DensityOperator rho = random_density(s, 3);
  CHECK(std::abs(expectation(LinearOperator::identity(s), rho) - cplx(1.0)) < 1e-12);
  CHECK_THROWS_AS(expectation(number(FockSpace::single(3), 0), rho), std::invalid_argument);
}

TEST_CASE("partial trace") {
  SUBCASE("product state keeps the factor") {
    const DensityOperator a = random_density(FockSpace::single(3), 1);
    const DensityOperator b = random_density(FockSpace::single(4), 2);
    const DensityOperator ab = tensor_product(a, b);
    const std::vector<int> k0{0}, k1{1};
    CHECK((partial_trace(ab, k0).matrix - a.matrix).norm() < 1e-14);
    CHECK((partial_trace(ab, k1).matrix - b.matrix).norm() < 1e-14);
  }
  SUBCASE("maximally entangled pair reduces to I/2") {
    const FockSpace s({2, 2});
    CVec psi = CVec::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);  // (|00> + |11>)/sqrt(2)
    const DensityOperator rho = DensityOperator::pure(StateVector(s, psi));
    // explicit 4x4 reduction: rho_A(i,j) = sum_k rho(2i+k, 2j+k)
    DenseMat expect = DenseMat::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) expect(i, j) += rho.matrix(2 * i + k, 2 * j + k);
    const std::vector<int> keep{0};
    const DensityOperator red = partial_trace(rho, keep);
    CHECK((red.matrix - expect).norm() < 1e-15);
    CHECK((red.matrix - 0.5 * DenseMat::Identity(2, 2)).norm() < 1e-15);
    CHECK((partial_trace(StateVector(s, psi), keep).matrix - red.matrix).norm() < 1e-15);
  }
  SUBCASE("keeping every mode is the identity") {
    const DensityOperator rho = random_density(FockSpace({3, 2, 2}), 4);
    const std::vector<int> all{0, 1, 2};
    CHECK((partial_trace(rho, all).matrix - rho.matrix).norm() < 1e-15);
  }
  SUBCASE("trace and Hermiticity are preserved") {
    const DensityOperator rho = random_density(FockSpace({3, 4, 2}), 5);
    for (const std::vector<int>& keep : {std::vector<int>{0}, std::vector<int>{1}, std::vector<int>{0, 2}}) {
      const DensityOperator red = partial_trace(rho, keep);
      CHECK(std::abs(red.trace() - cplx(1.0)) < 1e-12);
      CHECK((red.matrix - red.matrix.adjoint()).norm() == 0.0);
    }
  }
  SUBCASE("errors") {
    const DensityOperator rho = random_density(FockSpace({2, 2}), 6);
    CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{2}), std::out_of_range);
    CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{0, 0}), std::invalid_argument);
  }
}

TEST_CASE("coherent states") {
  const FockSpace s = FockSpace::single(20);
  const StateVector vac = coherent_state(s, 0.0);
  CHECK(std::abs(vac.amplitudes(0) - cplx(1.0)) < 1e-15);
  CHECK(vac.amplitudes.tail(19).norm() == 0.0);

  const StateVector one = coherent_state(s, 1.0);
  CHECK(std::abs(expectation(number(s, 0), one).real() - 1.0) < 1e-6);
  const auto ref = oracle::coherent_amplitudes(cplx(0.3, -0.7), 20);
  const StateVector c = coherent_state(s, cplx(0.3, -0.7));
  for (int n = 0; n < 20; ++n) CHECK(std::abs(c.amplitudes(n) - ref[static_cast<std::size_t>(n)]) < 1e-12);

  CHECK_THROWS_AS(coherent_state(FockSpace::single(2), cplx(0.0, std::sqrt(2.0))), TruncationError);
  CHECK_THROWS_AS(coherent_state(FockSpace({3, 3}), 0.1), std::invalid_argument);
}

TEST_CASE("density operator validation") {
  const FockSpace s = FockSpace::single(2);
  DenseMat m(2, 2);
  m << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityOperator(s, m).validate(), std::domain_error);
  m << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityOperator(s, m).validate(), std::domain_error);
  m << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(DensityOperator(s, m).validate(), std::domain_error);
  m << 0.5, 0.0, 0.0, 0.5;
  CHECK_NOTHROW(DensityOperator(s, m).validate());
}
