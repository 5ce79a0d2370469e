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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pulseforge/optimizer.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/spin_system.hpp"

namespace pulseforge {

// Line-oriented run description:
//
//   [system]
//   coupling_model = weak
//   spin = CA C -1200          # label species offset_hz
//   coupling = CA CB 35        # j_hz
//   [pulse]
//   steps = 200
//   dt = 5e-6
//   [optimizer]
//   target = hadamard CO
//   amplitude_max_hz = 10000
//
// Frequencies are in Hz, durations in seconds. Relative file paths resolve
// against the directory holding the config.
struct RunConfig {
  std::string source = "<config>";
  SpinSystem system = SpinSystem::homonuclear({0.0});
  std::size_t steps = 0;
  double dt = 0.0;
  std::optional<std::filesystem::path> pulse_file;
  std::string target;
  std::optional<std::filesystem::path> target_file;
  OptimizerConfig optimizer;
  // Offsets in Hz as written, one list per channel; empty if not given.
  std::vector<std::vector<double>> offsets_hz;
  std::filesystem::path output_dir = ".";

  double duration() const noexcept { return dt * static_cast<double>(steps); }
};

RunConfig parse_config(std::istream& is, const std::string& source = "<config>",
                       const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);

// "1000, 2000; 500" -> {{1000, 2000}, {500}}: ';' separates channels, commas
// or spaces separate offsets.
std::vector<std::vector<double>> parse_offset_lists(const std::string& text);

// Comma or space separated reals.
std::vector<double> parse_number_list(const std::string& text);

// Offsets (rad/s) for a suzuki plan from Hz lists: one list is shared by all
// channels, otherwise one list per channel is required.
std::vector<std::vector<double>> offsets_to_rad(const std::vector<std::vector<double>>& hz,
                                                std::size_t channels);

// Target unitary of the config: matrix file if given, else gate expression.
DenseMatrix resolve_target(const RunConfig& config);

}  // namespace pulseforge
