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

#include <optional>
#include <string>
#include <vector>

#include "pulseforge/spin_system.hpp"

namespace pulseforge {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  // Multiplies every tolerance band; 0 makes every inexact check fail.
  double tol_scale = 1.0;
  // System for the phase-transform identity; a one-spin and a strongly
  // coupled three-spin system are used when absent.
  std::optional<SpinSystem> system;
};

// Order-of-accuracy slopes, the one-spin leading-error ratio, the
// phase-transform identity and worst-case quadratic growth.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pulseforge
