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

#include "oracles.hpp"
#include "spopo/analysis.hpp"
#include "spopo/dynamics.hpp"

using namespace spopo;

namespace {

StateVector from_amplitudes(const FockSpace& s, const std::vector<cplx>& c) {
  CVec v(s.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = c[static_cast<std::size_t>(i)];
  return {s, v};
}

SupermodeSet desk_supermodes() {
  DispersionParams d;
  d.half_width = 10;
  d.beta2s = 0.08;
  SupermodeOptions o;
  o.Np = 12.0;
  o.n_signal = 3;
  o.k_max = 10;
  return build_supermodes(coupling_matrix(d), o);
}

}  // namespace

TEST_CASE("linspace") {
  const auto v = linspace(-1.0, 1.0, 5);
  CHECK(v == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK_THROWS_AS(linspace(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("wigner function values") {
  const FockSpace s({12});
  const auto x = linspace(-6.0, 6.0, 121);

  SUBCASE("vacuum") {
    const WignerGrid g = wigner(DensityOperator::pure(StateVector::vacuum(s)), x, x);
    CHECK(g.W(60, 60) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(g.W(60, 70) == doctest::Approx(std::exp(-1.0) / M_PI).epsilon(1e-12));
    CHECK(g.integral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(!g.warning.has_value());
    CHECK(g.min_value() >= 0.0);
    CHECK(negative_volume(g) < 1e-12);
  }
  SUBCASE("single photon") {
    const std::vector<int> one{1};
    const WignerGrid g = wigner(DensityOperator::pure(StateVector::fock(s, one)), x, x);
    CHECK(g.W(60, 60) == doctest::Approx(-1.0 / M_PI).epsilon(1e-12));
    // W = (2 r^2 - 1) exp(-r^2) / pi
    CHECK(g.W(60, 80) == doctest::Approx(7.0 * std::exp(-4.0) / M_PI).epsilon(1e-12));
    CHECK(negative_volume(g) == doctest::Approx(2.0 * std::exp(-0.5) - 1.0).epsilon(2e-3));
  }
  SUBCASE("coherent state is a displaced gaussian") {
    const cplx alpha(1.0, -0.5);
    const WignerGrid g = wigner(DensityOperator::pure(coherent_state(FockSpace({30}), alpha, 1e-12)), x, x);
    CHECK(g.min_value() > -1e-12);
    const double x0 = std::sqrt(2.0) * alpha.real(), p0 = std::sqrt(2.0) * alpha.imag();
    for (int i = 0; i < 121; i += 10)
      for (int j = 0; j < 121; j += 10) {
        const double ref = std::exp(-(x[j] - x0) * (x[j] - x0) - (x[i] - p0) * (x[i] - p0)) / M_PI;
        CHECK(std::abs(g.W(i, j) - ref) < 1e-10);
      }
  }
  SUBCASE("small grid warns") {
    const auto narrow = linspace(-0.5, 0.5, 11);
    const WignerGrid g = wigner(DensityOperator::pure(StateVector::vacuum(s)), narrow, narrow);
    CHECK(g.warning.has_value());
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(wigner(DensityOperator::pure(StateVector::vacuum(FockSpace({2, 2}))), x, x),
                    std::invalid_argument);
    CHECK_THROWS_AS(wigner(DensityOperator::pure(StateVector::vacuum(s)), {0.0}, x), std::invalid_argument);
  }
}

TEST_CASE("cat wigner function matches the closed form") {
  const FockSpace s({30});
  const double p = 2.0;
  const cplx beta(0.0, std::sqrt(p));
  const auto x = linspace(-5.0, 5.0, 51);
  const WignerGrid g = wigner(DensityOperator::pure(cat_state(s, p)), x, x);
  for (int i = 0; i < 51; ++i)
    for (int j = 0; j < 51; ++j) {
      const double ref = wigner_coherent_superposition({1.0, 1.0}, {beta, -beta}, x[j], x[i]);
      CHECK(std::abs(g.W(i, j) - ref) < 1e-9);
    }
  CHECK(g.min_value() < -0.01);
  CHECK(g.integral == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(negative_volume(g) > 0.05);
}

TEST_CASE("purity") {
  const FockSpace s({5});
  CHECK(purity(DensityOperator::pure(coherent_state(s, 0.3, 1e-2))) == doctest::Approx(1.0));
  CHECK(purity(DensityOperator(s, DenseMat::Identity(5, 5) / 5.0)) == doctest::Approx(0.2));
}

TEST_CASE("cat fidelity") {
  const FockSpace s({30});
  CHECK(cat_fidelity(DensityOperator::pure(cat_state(s, 2.0)), 2.0) == doctest::Approx(1.0).epsilon(1e-12));

  DenseMat rho = DenseMat::Zero(30, 30);
  rho(0, 0) = 0.3;
  rho(1, 1) = 0.7;
  CHECK(cat_fidelity(DensityOperator(s, rho), 0.0) == doctest::Approx(0.3));

  // Incoherent mixture of the two coherent components, built from raw amplitudes.
  for (double p : {0.5, 2.0}) {
    const cplx beta(0.0, std::sqrt(p));
    const StateVector plus = from_amplitudes(s, oracle::coherent_amplitudes(beta, 30));
    const StateVector minus = from_amplitudes(s, oracle::coherent_amplitudes(-beta, 30));
    const DenseMat mix = 0.5 * (plus.amplitudes * plus.amplitudes.adjoint() + minus.amplitudes * minus.amplitudes.adjoint());
    CHECK(cat_fidelity(DensityOperator(s, mix), p) == doctest::Approx((1.0 + std::exp(-2.0 * p)) / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("cat fidelity truncation") {
  CHECK_THROWS_AS(cat_fidelity(DensityOperator::pure(StateVector::vacuum(FockSpace({6}))), 4.0), TruncationError);
  CHECK_THROWS_AS(cat_state(FockSpace({6}), -1.0), std::invalid_argument);
}

TEST_CASE("signal flux spectrum") {
  const SupermodeSet sm = desk_supermodes();
  const FockSpace s({3, 2, 2});

  SUBCASE("vacuum is dark") {
    const FluxSpectrum f = flux_spectrum_signal(DensityOperator::pure(StateVector::vacuum(s)), sm);
    CHECK(f.index.front() == -10);
    CHECK(f.index.back() == 10);
    for (double v : f.flux) CHECK(v == 0.0);
  }
  SUBCASE("one photon follows the supermode profile") {
    const std::vector<int> levels{1, 0, 0};
    const FluxSpectrum f = flux_spectrum_signal(DensityOperator::pure(StateVector::fock(s, levels)), sm);
    for (std::size_t m = 0; m < f.flux.size(); ++m) {
      CHECK(f.flux[m] == doctest::Approx(2.0 * std::norm(sm.T(0, static_cast<Eigen::Index>(m)))).epsilon(1e-12));
    }
  }
  SUBCASE("line sum equals the supermode photon number") {
    const OpenSystemModel m = build_spopo(sm, 0.8, 1.0, {3, 2, 2});
    const DensityOperator rho = steady_state(m).rho;
    const FluxSpectrum f = flux_spectrum_signal(rho, sm);
    double lines = 0.0;
    for (double v : f.flux) lines += v / 2.0;
    double modes = 0.0;
    for (int i = 0; i < 3; ++i) modes += expectation(number(s, i), rho).real();
    CHECK(std::abs(lines - modes) < 1e-10);
    CHECK(modes > 0.0);
  }
  SUBCASE("too many modes") {
    CHECK_THROWS_AS(flux_spectrum_signal(DensityOperator::pure(StateVector::vacuum(FockSpace({2, 2, 2, 2}))), sm),
                    std::invalid_argument);
  }
}

TEST_CASE("pump flux spectrum") {
  const SupermodeSet sm = desk_supermodes();
  const std::vector<int> cut{4, 2, 2};

  SUBCASE("without signal photons the pump passes unchanged") {
    const OpenSystemModel m = build_spopo(sm, 0.8, 1.0, cut);
    const FluxSpectrum f = flux_spectrum_pump(DensityOperator::pure(StateVector::vacuum(m.space())), m, sm);
    REQUIRE(f.flux.size() == 41);
    CHECK(f.index.front() == -20);
    for (std::size_t q = 0; q < f.flux.size(); ++q) {
      CHECK(f.flux[q] == doctest::Approx(f.input[q]).epsilon(1e-12));
      const double r1q = sm.R(0, static_cast<Eigen::Index>(q));
      CHECK(f.input[q] == doctest::Approx(r1q * r1q * 0.16).epsilon(1e-12));
    }
    CHECK(f.metadata["retained_labels"] == std::vector<int>{1, 3, 5, 7, 9});
    CHECK(f.metadata["mean_line_coverage"].get<double>() == doctest::Approx(5.0 / 41.0));
  }
  SUBCASE("undriven vacuum is dark") {
    const OpenSystemModel m = build_spopo(sm, 0.0, 1.0, cut);
    const FluxSpectrum f = flux_spectrum_pump(DensityOperator::pure(StateVector::vacuum(m.space())), m, sm);
    for (double v : f.flux) CHECK(v == 0.0);
  }
  SUBCASE("down-conversion depletes the pump at line centre") {
    const OpenSystemModel m = build_spopo(sm, 0.8, 1.0, cut);
    const FluxSpectrum f = flux_spectrum_pump(steady_state(m).rho, m, sm);
    CHECK(f.flux[20] < f.input[20]);
    CHECK(f.flux[20] > 0.0);
  }
  SUBCASE("state on another space") {
    const OpenSystemModel m = build_spopo(sm, 0.8, 1.0, cut);
    CHECK_THROWS_AS(flux_spectrum_pump(DensityOperator::pure(StateVector::vacuum(FockSpace({4}))), m, sm),
                    std::invalid_argument);
  }
  SUBCASE("csv layout") {
    const OpenSystemModel m = build_spopo(sm, 0.8, 1.0, cut);
    const FluxSpectrum f = flux_spectrum_pump(DensityOperator::pure(StateVector::vacuum(m.space())), m, sm);
    const std::string csv = f.to_csv();
    CHECK(csv.rfind("index,flux,input,coverage", 0) == 0);
  }
}
