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
#include <iosfwd>
#include <vector>

#include "pulseforge/spin_system.hpp"

namespace pulseforge {

struct BenchOptions {
  std::size_t q_min = 2;
  std::size_t q_max = 5;
  std::size_t steps = 500;
  std::size_t repetitions = 7;  // >= 5, after one warm-up
  double dt = 1e-5;
  double amplitude_max = kTwoPi * 5000.0;
  std::uint64_t seed = 7;
};

struct BenchRow {
  std::size_t q = 0;
  double sub_exact_us = 0.0;    // median time per sub-propagator
  double sub_suzuki_us = 0.0;
  double full_exact_ms = 0.0;   // median time per total propagator, plan included
  double full_suzuki_ms = 0.0;

  double ratio_sub() const noexcept { return sub_exact_us / sub_suzuki_us; }
  double ratio_full() const noexcept { return full_exact_ms / full_suzuki_ms; }
};

// Weakly coupled chain of q spins with alanine-like offsets and couplings
// (illustrative values).
SpinSystem bench_system(std::size_t q);

std::vector<BenchRow> run_benchmark(const BenchOptions& options);

void write_bench_table(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace pulseforge
