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

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "oracle.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/spin_system.hpp"

using namespace pulseforge;

namespace {

oracle::Mat oracle_h0(const std::vector<double>& w, const std::vector<Coupling>& j, bool strong) {
  const std::size_t q = w.size();
  const std::size_t n = std::size_t{1} << q;
  oracle::Mat h = oracle::Mat::Zero(n, n);
  for (std::size_t r = 0; r < q; ++r) h += w[r] * oracle::spin_op(r, 'z', q);
  for (const auto& c : j) {
    h += c.strength * oracle::spin_op(c.a, 'z', q) * oracle::spin_op(c.b, 'z', q);
    if (strong) {
      h += c.strength * oracle::spin_op(c.a, 'x', q) * oracle::spin_op(c.b, 'x', q);
      h += c.strength * oracle::spin_op(c.a, 'y', q) * oracle::spin_op(c.b, 'y', q);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("spin system validation") {
  CHECK_THROWS_AS(SpinSystem::homonuclear({}), PreconditionError);
  CHECK_THROWS_AS(SpinSystem::homonuclear(std::vector<double>(13, 0.0)), PreconditionError);
  CHECK_THROWS(SpinSystem::homonuclear({1.0, 2.0}, {{0, 0, 1.0}}));
  CHECK_THROWS(SpinSystem::homonuclear({1.0, 2.0}, {{0, 2, 1.0}}));
  CHECK_THROWS(SpinSystem::homonuclear({1.0, 2.0}, {{0, 1, 1.0}, {1, 0, 2.0}}));
  CHECK_THROWS(SpinSystem::homonuclear({std::nan("")}));
  const auto sys = SpinSystem::homonuclear({1.0, 2.0, 3.0});
  CHECK(sys.dim() == 8);
  CHECK(sys.channels().size() == 1);
  CHECK_THROWS(sys.spins_of("N"));
}

TEST_CASE("builder converts Hz to rad/s and resolves labels") {
  SpinSystemBuilder b;
  b.add_spin("H1", "H", 100.0).add_spin("C1", "C", -50.0).add_coupling("H1", "C1", 140.0);
  const SpinSystem sys = b.build();
  CHECK(sys.spins()[0].offset == doctest::Approx(kTwoPi * 100.0));
  CHECK(sys.couplings()[0].strength == doctest::Approx(kTwoPi * 140.0));
  CHECK(sys.channels().size() == 2);
  CHECK(sys.find_spin("C1") == std::optional<std::size_t>(1));
  CHECK_THROWS(SpinSystemBuilder().add_spin("A", "H", 0).add_coupling("A", "B", 1.0).build());
}

TEST_CASE("single spin operators") {
  const auto one = SpinSystem::homonuclear({0.0});
  const DenseMatrix z = single_spin_op(one, 0, Axis::Z);
  CHECK(z(0, 0) == Complex(0.5));
  CHECK(z(1, 1) == Complex(-0.5));

  const auto two = SpinSystem::homonuclear({0.0, 0.0});
  const DenseMatrix x = single_spin_op(two, 0, Axis::X);
  for (auto v : x.entries()) CHECK((v == Complex(0.0) || v == Complex(0.5)));
  CHECK(oracle::max_diff(x, oracle::spin_op(0, 'x', 2)) == 0.0);

  const auto three = SpinSystem::homonuclear({0.0, 0.0, 0.0});
  for (std::size_t r = 0; r < 3; ++r) {
    for (auto [axis, c] : {std::pair{Axis::X, 'x'}, {Axis::Y, 'y'}, {Axis::Z, 'z'}}) {
      CHECK(oracle::max_diff(single_spin_op(three, r, axis), oracle::spin_op(r, c, 3)) == 0.0);
    }
  }
  CHECK_THROWS_AS(single_spin_op(three, 3, Axis::X), IndexError);
}

TEST_CASE("total spin operators") {
  const auto two = SpinSystem::homonuclear({0.0, 0.0});
  const DenseMatrix fz = total_spin_op(two, Axis::Z);
  CHECK(fz(0, 0) == Complex(1.0));
  CHECK(fz(1, 1) == Complex(0.0));
  CHECK(fz(2, 2) == Complex(0.0));
  CHECK(fz(3, 3) == Complex(-1.0));

  for (std::size_t q = 1; q <= 4; ++q) {
    const auto sys = SpinSystem::homonuclear(std::vector<double>(q, 0.0));
    const DenseMatrix fx = total_spin_op(sys, Axis::X);
    const DenseMatrix fy = total_spin_op(sys, Axis::Y);
    oracle::Mat sum = oracle::Mat::Zero(fx.dim(), fx.dim());
    for (std::size_t r = 0; r < q; ++r) sum += oracle::spin_op(r, 'x', q);
    CHECK(oracle::max_diff(fx, sum) == 0.0);
    DenseMatrix lhs = commutator(fx, fy);
    DenseMatrix rhs = total_spin_op(sys, Axis::Z) * Complex(0.0, 1.0);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-14);
  }

  SpinSystemBuilder b;
  b.add_spin("H1", "H", 0).add_spin("C1", "C", 0).add_spin("H2", "H", 0);
  const auto het = b.build();
  const DenseMatrix fh = total_spin_op(het, Axis::X, "H");
  const DenseMatrix fc = total_spin_op(het, Axis::Y, "C");
  CHECK(max_norm(commutator(fh, fc)) == 0.0);
  CHECK(oracle::max_diff(fh, oracle::spin_op(0, 'x', 3) + oracle::spin_op(2, 'x', 3)) == 0.0);
  CHECK_THROWS(total_spin_op(het, Axis::X, "N"));
}

TEST_CASE("background Hamiltonian") {
  const double w0 = 2.0 * kTwoPi * 1000.0;
  const DenseMatrix h1 = build_h0(SpinSystem::homonuclear({w0}));
  CHECK(h1(0, 0).real() == doctest::Approx(w0 / 2));
  CHECK(h1(1, 1).real() == doctest::Approx(-w0 / 2));

  const double w1 = 700.0, w2 = -300.0, j = 40.0;
  const DenseMatrix weak = build_h0(SpinSystem::homonuclear({w1, w2}, {{0, 1, j}}));
  const double expected[] = {(w1 + w2) / 2 + j / 4, (w1 - w2) / 2 - j / 4, (-w1 + w2) / 2 - j / 4,
                             -(w1 + w2) / 2 + j / 4};
  for (std::size_t k = 0; k < 4; ++k) CHECK(weak(k, k).real() == doctest::Approx(expected[k]));
  CHECK(hermiticity_residual(weak) == 0.0);

  const DenseMatrix strong =
      build_h0(SpinSystem::homonuclear({w1, w2}, {{0, 1, j}}, CouplingModel::Strong));
  const DenseMatrix diff = strong - weak;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const bool central = (r == 1 || r == 2) && (c == 1 || c == 2);
      if (!central) CHECK(diff(r, c) == Complex(0.0));
    }
  }
  CHECK(std::abs(diff(1, 2)) > 0.0);

  const std::vector<double> w = {1200.0, -800.0, 300.0, 50.0};
  const std::vector<Coupling> cs = {{0, 1, 150.0}, {1, 2, 90.0}, {0, 3, 20.0}};
  for (bool s : {false, true}) {
    const auto sys = SpinSystem::homonuclear(w, cs, s ? CouplingModel::Strong : CouplingModel::Weak);
    const DenseMatrix h = build_h0(sys);
    CHECK(oracle::max_diff(h, oracle_h0(w, cs, s)) <= 1e-12);
    CHECK(hermiticity_residual(h) <= 1e-15);
    CHECK(max_norm(commutator(h, total_spin_op(sys, Axis::Z))) <= 1e-13 * max_norm(h));
  }
}

TEST_CASE("dipolar terms follow the axial pattern in the strong model") {
  const double d = 500.0;
  const auto sys = SpinSystem({{"A", "H", 0.0}, {"B", "H", 0.0}}, {}, CouplingModel::Strong, {{0, 1, d}});
  const oracle::Mat ref =
      d * (oracle::spin_op(0, 'z', 2) * oracle::spin_op(1, 'z', 2) -
           0.5 * (oracle::spin_op(0, 'x', 2) * oracle::spin_op(1, 'x', 2) +
                  oracle::spin_op(0, 'y', 2) * oracle::spin_op(1, 'y', 2)));
  CHECK(oracle::max_diff(build_h0(sys), ref) <= 1e-12);
}

TEST_CASE("heteronuclear couplings are secular") {
  const auto sys = SpinSystem({{"H", "H", 100.0}, {"C", "C", -40.0}}, {{0, 1, 140.0}}, CouplingModel::Strong);
  const DenseMatrix h = build_h0(sys);
  CHECK(oracle::max_diff(h, oracle_h0({100.0, -40.0}, {{0, 1, 140.0}}, false)) <= 1e-12);
}

TEST_CASE("hadamard basis") {
  const DenseMatrix h1 = hadamard_basis(1);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(h1, DenseMatrix{{s, s}, {s, -s}}) <= 1e-16);
  const DenseMatrix h2 = hadamard_basis(2);
  CHECK(max_abs_diff(multiply(h2, h2), DenseMatrix::identity(4)) <= 1e-15);
  for (std::size_t q = 1; q <= 6; ++q) {
    const auto sys = SpinSystem::homonuclear(std::vector<double>(q, 0.0));
    const DenseMatrix h = hadamard_basis(q);
    const DenseMatrix conj = multiply(multiply(h, total_spin_op(sys, Axis::X)), h);
    CHECK(max_abs_diff(conj, total_spin_op(sys, Axis::Z)) <= 1e-14);
  }
  const auto three = SpinSystem::homonuclear({0, 0, 0});
  const DenseMatrix h3 = hadamard_basis(3);
  const DenseMatrix c3 = multiply(multiply(h3, total_spin_op(three, Axis::X)), h3);
  std::vector<double> diag;
  for (std::size_t k = 0; k < 8; ++k) diag.push_back(c3(k, k).real());
  std::sort(diag.begin(), diag.end());
  const std::vector<double> expected = {-1.5, -0.5, -0.5, -0.5, 0.5, 0.5, 0.5, 1.5};
  for (std::size_t k = 0; k < 8; ++k) CHECK(diag[k] == doctest::Approx(expected[k]));
  CHECK_THROWS(hadamard_basis(0));
}

TEST_CASE("fz spectrum") {
  CHECK(fz_spectrum(SpinSystem::homonuclear({0})) == std::vector<double>{0.5, -0.5});
  CHECK(fz_spectrum(SpinSystem::homonuclear({0, 0})) == std::vector<double>{1.0, 0.0, 0.0, -1.0});
  const auto four = fz_spectrum(SpinSystem::homonuclear({0, 0, 0, 0}));
  std::map<double, int> counts;
  for (double v : four) ++counts[v];
  CHECK(counts[2.0] == 1);
  CHECK(counts[1.0] == 4);
  CHECK(counts[0.0] == 6);
  CHECK(counts[-1.0] == 4);
  CHECK(counts[-2.0] == 1);
  CHECK_THROWS(fz_spectrum(SpinSystem::homonuclear({0}), "C"));
}
