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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulseforge/counters.hpp"
#include "pulseforge/fidelity.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/spin_system.hpp"

namespace pulseforge {

enum class BackendPolicy { Exact, SuzukiFixedOffset, SuzukiMeanOffset, SuzukiTwoOffset, Hybrid };

std::string_view to_string(BackendPolicy policy) noexcept;
std::optional<BackendPolicy> parse_policy(std::string_view name) noexcept;

struct OptimizerConfig {
  std::size_t max_iterations = 200;
  double initial_step = 0.05;  // fraction of amplitude_max per unit normalised gradient
  double backoff = 0.5;
  double growth = 1.2;
  double min_step = 1e-12;  // relative to initial_step
  double target_fidelity = 0.999;
  double amplitude_max = 0.0;  // rad/s
  BackendPolicy policy = BackendPolicy::SuzukiFixedOffset;
  double hybrid_threshold = 0.99;
  // Per-channel offsets (rad/s) for the fixed and two-offset policies; empty
  // selects amplitude_max / 2 and {1/4, 3/4} amplitude_max respectively.
  std::vector<std::vector<double>> offsets;
  std::vector<double> scalings;      // RF scalings; empty means nominal only
  std::size_t exact_sample_every = 10;  // 0 disables sampling
  std::uint64_t seed = 1;

  void validate() const;
};

enum class Termination { TargetReached, MaxIterations, StepUnderflow };

std::string_view to_string(Termination t) noexcept;

struct IterationRecord {
  std::size_t iter = 0;
  double phi_backend = 0.0;
  std::optional<double> phi_exact;  // sampled
  Backend backend = Backend::Exact;
  double wall_ms = 0.0;
  OpCounts ops;  // excludes the exact sampling
  std::size_t probes = 0;  // line-search evaluations
  double step = 0.0;
};

struct OptimizationReport {
  std::vector<IterationRecord> iterations;
  Termination termination = Termination::MaxIterations;
  double final_phi_backend = 0.0;
  double final_phi_exact = 0.0;
  std::optional<std::size_t> switched_at;  // hybrid: first iteration run on exact

  std::size_t iteration_count() const noexcept {
    return iterations.empty() ? 0 : iterations.size() - 1;
  }
};

struct OptimizationResult {
  ControlPulse pulse;
  OptimizationReport report;
};

// Steepest ascent with backtracking line search. Iteration 0 is the
// evaluation of the initial pulse; the target is checked before any update.
OptimizationResult optimize(const SpinSystem& system, const Unitary& target,
                            const ControlPulse& initial, const OptimizerConfig& config);

}  // namespace pulseforge
