// Copyright 2026 The Pulseforge Authors
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

#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "pulseforge/counters.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/linalg.hpp"

using namespace pulseforge;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

DiagonalVector random_phases(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  DiagonalVector d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = std::polar(1.0, u(rng));
  return d;
}

DiagonalVector random_diag(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DiagonalVector d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = Complex(g(rng), g(rng));
  return d;
}

DenseMatrix materialise(const DiagonalVector& d) {
  std::vector<Complex> e(d.entries().begin(), d.entries().end());
  return DenseMatrix::diagonal(std::span<const Complex>(e));
}

}  // namespace

TEST_CASE("dense matrix construction and validation") {
  CHECK_THROWS_AS(DenseMatrix(0), DimensionError);
  CHECK_THROWS_AS((DenseMatrix{{1.0, 2.0}, {3.0}}), DimensionError);
  DenseMatrix m{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(m.dim() == 2);
  CHECK(m(1, 0) == Complex(3.0));
  DenseMatrix empty;
  CHECK(empty.empty());
  CHECK_THROWS_AS(multiply(empty, empty), DimensionError);
  CHECK_THROWS_AS(multiply(DenseMatrix(2), DenseMatrix(4)), DimensionError);
}

TEST_CASE("gemm matches the Eigen product for every kernel size") {
  for (std::size_t n : {1u, 2u, 3u, 4u, 8u, 16u, 32u, 64u}) {
    const auto a = oracle::random_dense(n, 10 + n);
    const auto b = oracle::random_dense(n, 20 + n);
    const DenseMatrix c = multiply(a, b);
    const oracle::Mat ref = oracle::to_eigen(a) * oracle::to_eigen(b);
    CHECK(oracle::max_diff(c, ref) <= 1e-13 * static_cast<double>(n));
  }
}

TEST_CASE("multiply_into refuses aliased output") {
  DenseMatrix a = DenseMatrix::identity(4);
  DenseMatrix b = DenseMatrix::identity(4);
  CHECK_THROWS_AS(multiply_into(a, b, a), PreconditionError);
}

TEST_CASE("expm of zero is the identity") {
  CHECK(max_abs_diff(expm(DenseMatrix(4)), DenseMatrix::identity(4)) <= 2 * kEps);
}

TEST_CASE("expm of a pi/2 Pauli rotation") {
  DenseMatrix m{{0.0, Complex(0.0, -std::numbers::pi / 2)}, {Complex(0.0, -std::numbers::pi / 2), 0.0}};
  const DenseMatrix v = expm(m);
  const DenseMatrix expected{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, -1.0), 0.0}};
  CHECK(max_abs_diff(v, expected) <= 1e-15);
}

TEST_CASE("expm matches the spectral oracle on random Hermitian generators") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = seed % 2 ? 8 : 16;
    const double t = seed <= 3 ? 0.05 : 3.0;  // with and without squaring
    const oracle::Mat h = oracle::random_hermitian(n, seed);
    DenseMatrix m = oracle::from_eigen(h);
    m *= Complex(0.0, -t);
    const DenseMatrix v = expm(m);
    CHECK(oracle::max_diff(v, oracle::expm_hermitian(h, t)) <= 1e-12);
    CHECK(unitarity_residual(v) <= 100.0 * kEps * static_cast<double>(n));
  }
}

TEST_CASE("expm matches Eigen on a non-normal matrix") {
  const DenseMatrix m = oracle::random_dense(6, 99, 0.7);
  CHECK(oracle::max_diff(expm(m), oracle::expm_general(oracle::to_eigen(m))) <= 1e-11);
}

TEST_CASE("expm of commuting generators factorises") {
  std::vector<double> d1 = {0.3, -1.2, 2.0, 0.1};
  std::vector<double> d2 = {1.1, 0.4, -0.7, 2.5};
  DenseMatrix a = DenseMatrix::diagonal(std::span<const double>(d1));
  DenseMatrix b = DenseMatrix::diagonal(std::span<const double>(d2));
  const oracle::Mat u = oracle::random_unitary(4, 5);
  const DenseMatrix uu = oracle::from_eigen(u);
  const DenseMatrix ud = uu.adjoint();
  a = multiply(multiply(uu, a), ud) * Complex(0.0, -1.0);
  b = multiply(multiply(uu, b), ud) * Complex(0.0, -1.0);
  CHECK(max_abs_diff(expm(a + b), multiply(expm(a), expm(b))) <= 1e-12);
}

TEST_CASE("expm rejects non-finite input") {
  DenseMatrix m(2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm(m), NumericError);
}

TEST_CASE("diag_exp") {
  const std::vector<double> d = {0.5, -0.5};
  const auto e = diag_exp(d, Complex(0.0, -std::numbers::pi));
  CHECK(std::abs(e[0] - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(std::abs(e[1] - Complex(0.0, 1.0)) <= 1e-15);

  const std::vector<double> zeros(5, 0.0);
  const DiagonalVector ones = diag_exp(zeros, Complex(0.0, -3.0));
  for (const auto& v : ones.entries()) CHECK(v == Complex(1.0));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> r(8);
  for (auto& x : r) x = 1e4 * g(rng);
  const double dt = 1e-5;
  const auto fast = diag_exp(r, Complex(0.0, -dt));
  DenseMatrix m = DenseMatrix::diagonal(std::span<const double>(r));
  m *= Complex(0.0, -dt);
  const DenseMatrix ref = expm(m);
  for (std::size_t k = 0; k < r.size(); ++k) CHECK(std::abs(fast[k] - ref(k, k)) <= 1e-14);

  r[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(diag_exp(r, Complex(0.0, 1.0)), NumericError);
}

TEST_CASE("diag_mul equals the product with a materialised diagonal") {
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const DiagonalVector d = random_diag(n, n);
    const DenseMatrix m = oracle::random_dense(n, 7 * n);
    CHECK(max_abs_diff(diag_mul(d, m, Side::Left), multiply(materialise(d), m)) <= 1e-14);
    CHECK(max_abs_diff(diag_mul(d, m, Side::Right), multiply(m, materialise(d))) <= 1e-14);
  }
  DiagonalVector ones(3);
  const DenseMatrix m = oracle::random_dense(3, 1);
  CHECK(max_abs_diff(diag_mul(ones, m, Side::Left), m) == 0.0);
  DiagonalVector d23(std::vector<Complex>{2.0, 3.0});
  const DenseMatrix r = diag_mul(d23, DenseMatrix::identity(2), Side::Left);
  CHECK(r(0, 0) == Complex(2.0));
  CHECK(r(1, 1) == Complex(3.0));
  CHECK_THROWS_AS(diag_mul(d23, DenseMatrix(3), Side::Left), DimensionError);
}

TEST_CASE("sandwich product") {
  SUBCASE("trivial phases and bases give the central diagonal") {
    DiagonalVector phase(4);
    const DiagonalVector alpha = random_diag(4, 1);
    const DenseMatrix id = DenseMatrix::identity(4);
    CHECK(max_abs_diff(sandwich_product(phase, id, alpha, id), materialise(alpha)) <= 1e-16);
  }
  SUBCASE("matches the naive five-matrix product") {
    for (std::size_t n : {2u, 8u, 16u}) {
      const DiagonalVector phase = random_phases(n, n);
      const DiagonalVector alpha = random_phases(n, n + 1);
      const DenseMatrix w1 = oracle::from_eigen(oracle::random_unitary(n, n + 2));
      const DenseMatrix w2 = oracle::from_eigen(oracle::random_unitary(n, n + 3));
      const oracle::Mat p = oracle::to_eigen(materialise(phase));
      const oracle::Mat ref = p * oracle::to_eigen(w1) * oracle::to_eigen(materialise(alpha)) *
                              oracle::to_eigen(w2) * p.adjoint();
      CHECK(oracle::max_diff(sandwich_product(phase, w1, alpha, w2), ref) <= 1e-13);

      const DenseMatrix pattern = phase_pattern(phase);
      DenseMatrix out;
      SandwichScratch scratch;
      sandwich_product_into(pattern, w1, alpha, w2, out, scratch);
      CHECK(oracle::max_diff(out, ref) <= 1e-13);
    }
  }
  SUBCASE("exactly one general product") {
    if (!kOpCountersEnabled) return;
    const DiagonalVector phase = random_phases(8, 2);
    const DenseMatrix w = oracle::from_eigen(oracle::random_unitary(8, 4));
    DenseMatrix out(8);
    SandwichScratch scratch;
    const OpCounts before = op_counts();
    sandwich_product_into(phase, w, phase, w, out, scratch);
    const OpCounts d = op_counts() - before;
    CHECK(d.gemm == 1);
    CHECK(d.expm == 0);
  }
  SUBCASE("phase entries must have unit modulus") {
    DiagonalVector phase(2);
    phase[1] = 1.1;
    const DenseMatrix id = DenseMatrix::identity(2);
    CHECK_THROWS_AS(sandwich_product(phase, id, DiagonalVector(2), id), PreconditionError);
  }
  SUBCASE("dimension mismatch") {
    const DenseMatrix id = DenseMatrix::identity(2);
    CHECK_THROWS_AS(sandwich_product(DiagonalVector(3), id, DiagonalVector(2), id), DimensionError);
  }
}

TEST_CASE("diagnostics") {
  const DenseMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  CHECK(unitarity_residual(x) == 0.0);
  CHECK(hermiticity_residual(x) == 0.0);
  CHECK(trace(DenseMatrix::identity(5)) == Complex(5.0));
  CHECK(hs_inner(x, x) == Complex(2.0));
  const DenseMatrix z{{1.0, 0.0}, {0.0, -1.0}};
  const DenseMatrix c = commutator(x, z);
  CHECK(c(0, 1) == Complex(-2.0));
  CHECK(c(1, 0) == Complex(2.0));
  CHECK(one_norm(z) == 1.0);
  CHECK(max_norm(c) == 2.0);
}
