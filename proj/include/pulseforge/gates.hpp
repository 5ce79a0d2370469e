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
#include <string>
#include <string_view>

#include "pulseforge/linalg.hpp"
#include "pulseforge/spin_system.hpp"

namespace pulseforge {

// Named target gates embedded in the full 2^q space. Spin indices are
// 0-based; a spin's computational |1> is spin-down.

DenseMatrix gate_identity(const SpinSystem& system);

// exp(-i angle I^axis_r)
DenseMatrix gate_rotation(const SpinSystem& system, std::size_t spin, Axis axis, double angle);

DenseMatrix gate_hadamard(const SpinSystem& system, std::size_t spin);

// diag phase exp(i angle) on states where both spins are |1>.
DenseMatrix gate_controlled_phase(const SpinSystem& system, std::size_t a, std::size_t b,
                                  double angle);

// exp(-i H0 duration), the zero-control propagator.
DenseMatrix gate_free_evolution(const SpinSystem& system, double duration);

// Parses a gate expression such as "hadamard CA" or "rx 90 CO; cphase 180 CO CA".
// Gates separated by ';' are applied left to right. Angles are in degrees;
// spins are named by label or 1-based index. `duration` is used by "free".
DenseMatrix parse_gate_expression(const SpinSystem& system, std::string_view text,
                                  double duration);

}  // namespace pulseforge
