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

#include <cstdint>

namespace pulseforge {

#ifdef PULSEFORGE_OP_COUNTERS
inline constexpr bool kOpCountersEnabled = true;
#else
inline constexpr bool kOpCountersEnabled = false;
#endif

// Per-thread tallies of the expensive operations. They back the claims about
// how many exponentials and full products each pipeline performs.
struct OpCounts {
  std::uint64_t gemm = 0;             // general N^3 matrix products
  std::uint64_t expm = 0;             // full matrix exponentials
  std::uint64_t subpropagators = 0;   // V_j evaluations, any backend
  std::uint64_t phase_patterns = 0;   // rank-1 phase patterns formed

  OpCounts operator-(const OpCounts& o) const {
    return {gemm - o.gemm, expm - o.expm, subpropagators - o.subpropagators,
            phase_patterns - o.phase_patterns};
  }
};

OpCounts& op_counts() noexcept;
void reset_op_counts() noexcept;

namespace detail {

enum class Op { Gemm, Expm, Subpropagator, PhasePattern };

inline void count([[maybe_unused]] Op op) noexcept {
#ifdef PULSEFORGE_OP_COUNTERS
  OpCounts& c = op_counts();
  switch (op) {
    case Op::Gemm: ++c.gemm; break;
    case Op::Expm: ++c.expm; break;
    case Op::Subpropagator: ++c.subpropagators; break;
    case Op::PhasePattern: ++c.phase_patterns; break;
  }
#endif
}

}  // namespace detail
}  // namespace pulseforge
