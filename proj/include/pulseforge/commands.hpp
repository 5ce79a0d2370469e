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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace pulseforge {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotReached = 2;

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> backend;  // propagate: "exact", "suzuki", "exact,suzuki", ...
  std::optional<std::string> offsets;  // Hz, same syntax as offsets_hz
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> pulse;

  double tol_scale = 1.0;  // verify

  std::size_t q_min = 2;  // bench
  std::size_t q_max = 5;
  std::size_t steps = 500;
  std::size_t repetitions = 7;
};

// Writes pulse.txt, iterations.csv and summary.txt to the output directory
// and prints the summary block. 0 when the target is reached, 2 otherwise.
int cmd_optimize(const CommandOptions& options, std::ostream& out, std::ostream& err);

// Writes propagator_<backend>.txt per backend; with two backends prints
// their mutual infidelity.
int cmd_propagate(const CommandOptions& options, std::ostream& out, std::ostream& err);

// 0 iff every check passes, 2 otherwise.
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);

int cmd_bench(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace pulseforge
