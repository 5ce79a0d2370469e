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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pulseforge/linalg.hpp"
#include "pulseforge/pulse.hpp"

namespace pulseforge {

// Shortest-safe round-trip text for a double (17 significant digits).
std::string format_number(double v);

// Pulse file:
//   n dt
//   x_1 y_1 [x_2 y_2 ...]     one line per step, one (x, y) pair per channel
// Amplitudes in rad/s, dt in seconds. '#' starts a comment; blank lines are
// ignored.
void write_pulse(std::ostream& os, const ControlPulse& pulse);
ControlPulse read_pulse(std::istream& is, const std::string& source = "<pulse>");
void save_pulse(const std::filesystem::path& path, const ControlPulse& pulse);
ControlPulse load_pulse(const std::filesystem::path& path);

// Matrix file:
//   N
//   re(0,0) im(0,0) re(0,1) im(0,1) ...   one line per row
void write_matrix(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& is, const std::string& source = "<matrix>");
void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix load_matrix(const std::filesystem::path& path);

}  // namespace pulseforge
