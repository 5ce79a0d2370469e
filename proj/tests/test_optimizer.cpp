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
#include <numbers>

#include "doctest.h"
#include "pulseforge/counters.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/gates.hpp"
#include "pulseforge/optimizer.hpp"

using namespace pulseforge;

namespace {

constexpr double kKHz = kTwoPi * 1000.0;

SpinSystem three_spin() {
  return SpinSystem::homonuclear({2.5 * kKHz, -1.2 * kKHz, -3.0 * kKHz},
                                 {{0, 1, kTwoPi * 54.0}, {1, 2, kTwoPi * 35.0}});
}

OptimizerConfig base_config(double amax) {
  OptimizerConfig c;
  c.amplitude_max = amax;
  c.exact_sample_every = 0;
  return c;
}

}  // namespace

TEST_CASE("policy names") {
  for (auto p : {BackendPolicy::Exact, BackendPolicy::SuzukiFixedOffset, BackendPolicy::SuzukiMeanOffset,
                 BackendPolicy::SuzukiTwoOffset, BackendPolicy::Hybrid}) {
    CHECK(parse_policy(to_string(p)) == p);
  }
  CHECK(parse_policy("suzuki") == BackendPolicy::SuzukiFixedOffset);
  CHECK_FALSE(parse_policy("newton").has_value());
}

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c.amplitude_max = 1.0;
  CHECK_NOTHROW(c.validate());
  c.target_fidelity = 1.5;
  CHECK_THROWS(c.validate());
  c.target_fidelity = 0.99;
  c.hybrid_threshold = 1.0;
  CHECK_THROWS(c.validate());
  c.hybrid_threshold = 0.9;
  c.scalings = {1.0, 0.0};
  CHECK_THROWS(c.validate());
}

TEST_CASE("random initial pulse") {
  const double amax = 5.0 * kKHz;
  const ControlPulse a = random_initial_pulse(50, 2, 1e-5, amax, 3);
  const ControlPulse b = random_initial_pulse(50, 2, 1e-5, amax, 3);
  const ControlPulse c = random_initial_pulse(50, 2, 1e-5, amax, 4);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.max_amplitude() <= 0.1 * amax);
  CHECK(a.max_amplitude() > 0.0);
}

TEST_CASE("free evolution target is reached at iteration 0") {
  const SpinSystem sys = three_spin();
  const std::size_t n = 20;
  const double dt = 5e-6;
  const Unitary target(gate_free_evolution(sys, n * dt));
  const ControlPulse zero(n, 1, dt);
  for (auto policy : {BackendPolicy::Exact, BackendPolicy::SuzukiFixedOffset}) {
    OptimizerConfig c = base_config(5.0 * kKHz);
    c.policy = policy;
    const auto r = optimize(sys, target, zero, c);
    CHECK(r.report.termination == Termination::TargetReached);
    CHECK(r.report.iteration_count() == 0);
    CHECK(r.report.final_phi_exact == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.pulse == zero);
  }
}

TEST_CASE("one-spin pi rotation") {
  const auto sys = SpinSystem::homonuclear({0.0});
  const double amax = 5.0 * kKHz;
  const double dt = 10e-6;
  const Unitary target(gate_rotation(sys, 0, Axis::X, std::numbers::pi));
  OptimizerConfig c = base_config(amax);
  c.policy = BackendPolicy::Exact;
  c.target_fidelity = 0.99999;
  c.max_iterations = 500;
  const auto r = optimize(sys, target, random_initial_pulse(10, 1, dt, amax, 2), c);
  CHECK(r.report.termination == Termination::TargetReached);
  CHECK(r.report.final_phi_exact >= 0.99999);
  CHECK(r.pulse.max_amplitude() <= amax + 1e-12);
}

TEST_CASE("three-spin hadamard on the suzuki backend") {
  const SpinSystem sys = three_spin();
  const double amax = 10.0 * kKHz;
  const double dt = 5e-6;
  const Unitary target(gate_hadamard(sys, 0));
  OptimizerConfig c = base_config(amax);
  c.max_iterations = 4000;
  c.exact_sample_every = 100;
  const auto r = optimize(sys, target, random_initial_pulse(200, 1, dt, amax, 1), c);
  CHECK(r.report.termination == Termination::TargetReached);
  CHECK(r.report.final_phi_backend >= 0.999);
  CHECK(std::abs(r.report.final_phi_exact - r.report.final_phi_backend) <= 1e-4);

  double previous = 0.0;
  for (const auto& rec : r.report.iterations) {
    CHECK(rec.phi_backend >= previous);
    previous = rec.phi_backend;
    if (rec.iter % 100 == 0) CHECK(rec.phi_exact.has_value());
    if (rec.iter % 100 != 0) CHECK_FALSE(rec.phi_exact.has_value());
  }
}

TEST_CASE("clipping bound holds every iteration") {
  const auto sys = SpinSystem::homonuclear({1.0 * kKHz});
  const double amax = 2.0 * kKHz;  // too weak for the target in this duration
  const Unitary target(gate_rotation(sys, 0, Axis::Y, std::numbers::pi));
  OptimizerConfig c = base_config(amax);
  c.max_iterations = 40;
  c.policy = BackendPolicy::Exact;
  const auto r = optimize(sys, target, random_initial_pulse(10, 1, 10e-6, amax, 5), c);
  CHECK(r.report.termination != Termination::TargetReached);
  CHECK(r.pulse.max_amplitude() <= amax + 1e-12);
  CHECK(r.pulse.max_amplitude() == doctest::Approx(amax).epsilon(1e-9));
  CHECK(r.report.iteration_count() <= c.max_iterations);
}

TEST_CASE("exponential count per iteration") {
  if constexpr (!kOpCountersEnabled) return;
  const SpinSystem sys = three_spin();
  const double amax = 8.0 * kKHz;
  const std::size_t n = 30;
  const double dt = 5e-6;
  const Unitary target(gate_hadamard(sys, 1));
  const ControlPulse initial = random_initial_pulse(n, 1, dt, amax, 9);
  OptimizerConfig c = base_config(amax);
  c.max_iterations = 8;
  c.exact_sample_every = 2;

  SUBCASE("fixed offset") {
    c.policy = BackendPolicy::SuzukiFixedOffset;
    const auto r = optimize(sys, target, initial, c);
    REQUIRE(r.report.iteration_count() >= 1);
    CHECK(r.report.iterations[0].ops.expm == 1);
    for (std::size_t i = 1; i < r.report.iterations.size(); ++i) CHECK(r.report.iterations[i].ops.expm == 0);
  }
  SUBCASE("two offsets") {
    c.policy = BackendPolicy::SuzukiTwoOffset;
    const auto r = optimize(sys, target, initial, c);
    CHECK(r.report.iterations[0].ops.expm == 2);
    for (std::size_t i = 1; i < r.report.iterations.size(); ++i) CHECK(r.report.iterations[i].ops.expm == 0);
  }
  SUBCASE("mean offset") {
    c.policy = BackendPolicy::SuzukiMeanOffset;
    const auto r = optimize(sys, target, initial, c);
    REQUIRE(r.report.iteration_count() >= 1);
    for (const auto& rec : r.report.iterations) CHECK(rec.ops.expm == 1);
  }
  SUBCASE("exact") {
    c.policy = BackendPolicy::Exact;
    const auto r = optimize(sys, target, initial, c);
    REQUIRE(r.report.iteration_count() >= 1);
    CHECK(r.report.iterations[0].ops.expm == n);
    for (std::size_t i = 1; i < r.report.iterations.size(); ++i) {
      const auto& rec = r.report.iterations[i];
      CHECK(rec.ops.expm == n * (rec.probes + 1));
      CHECK(rec.phi_exact == rec.phi_backend);
    }
  }
}

TEST_CASE("hybrid switches to exact") {
  const auto sys = SpinSystem::homonuclear({0.5 * kKHz});
  const double amax = 10.0 * kKHz;
  const Unitary target(gate_rotation(sys, 0, Axis::X, std::numbers::pi / 2));
  OptimizerConfig c = base_config(amax);
  c.policy = BackendPolicy::Hybrid;
  c.hybrid_threshold = 0.9;
  c.target_fidelity = 0.999;
  c.max_iterations = 2000;
  const auto r = optimize(sys, target, random_initial_pulse(40, 1, 5e-6, amax, 3), c);
  REQUIRE(r.report.switched_at.has_value());
  const std::size_t s = *r.report.switched_at;
  for (const auto& rec : r.report.iterations) {
    if (rec.iter < s) {
      CHECK(rec.backend == Backend::Suzuki);
      CHECK(rec.phi_backend < 0.9);
    } else {
      CHECK(rec.backend == Backend::Exact);
      CHECK(rec.phi_exact == rec.phi_backend);
    }
  }
  MESSAGE("termination " << to_string(r.report.termination) << " phi " << r.report.final_phi_backend
                         << " switched at " << s);
  CHECK(r.report.termination == Termination::TargetReached);
  CHECK(r.report.final_phi_exact == r.report.final_phi_backend);
}

TEST_CASE("runs are reproducible") {
  const SpinSystem sys = three_spin();
  const double amax = 8.0 * kKHz;
  const Unitary target(gate_hadamard(sys, 2));
  OptimizerConfig c = base_config(amax);
  c.max_iterations = 15;
  c.policy = BackendPolicy::SuzukiMeanOffset;
  const ControlPulse initial = random_initial_pulse(40, 1, 5e-6, amax, c.seed);
  const auto a = optimize(sys, target, initial, c);
  const auto b = optimize(sys, target, initial, c);
  CHECK(a.pulse == b.pulse);
  REQUIRE(a.report.iterations.size() == b.report.iterations.size());
  for (std::size_t i = 0; i < a.report.iterations.size(); ++i) {
    CHECK(a.report.iterations[i].phi_backend == b.report.iterations[i].phi_backend);
    CHECK(a.report.iterations[i].probes == b.report.iterations[i].probes);
  }
}

TEST_CASE("robust objective") {
  const auto sys = SpinSystem::homonuclear({0.5 * kKHz});
  const double amax = 5.0 * kKHz;
  const Unitary target(gate_rotation(sys, 0, Axis::X, std::numbers::pi / 2));
  OptimizerConfig c = base_config(amax);
  c.scalings = {0.9, 1.0, 1.1};
  c.target_fidelity = 0.995;
  c.max_iterations = 1500;
  const auto r = optimize(sys, target, random_initial_pulse(40, 1, 5e-6, amax, 8), c);
  CHECK(r.report.termination == Termination::TargetReached);
  CHECK(r.report.final_phi_exact >= 0.99);
}

TEST_CASE("optimizer input errors") {
  const SpinSystem sys = three_spin();
  OptimizerConfig c = base_config(kKHz);
  const ControlPulse p(5, 1, 1e-5);
  DenseMatrix bad = DenseMatrix::identity(8);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(optimize(sys, Unitary(bad), p, c), PreconditionError);
  CHECK_THROWS_AS(optimize(sys, Unitary(DenseMatrix::identity(4)), p, c), DimensionError);
  CHECK_THROWS_AS(optimize(sys, Unitary(DenseMatrix::identity(8)), ControlPulse(5, 2, 1e-5), c), DimensionError);
}
