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
#include <span>
#include <vector>

namespace pulseforge {

// Piecewise-constant control: n steps of fixed duration dt, p channels, each
// step/channel holding a Cartesian amplitude pair (x, y) in rad/s. The polar
// view is alpha = hypot(x, y), phi = atan2(y, x) with phi = 0 when alpha = 0.
class ControlPulse {
 public:
  ControlPulse(std::size_t steps, std::size_t channels, double dt);

  std::size_t steps() const noexcept { return steps_; }
  std::size_t channels() const noexcept { return channels_; }
  double dt() const noexcept { return dt_; }
  double duration() const noexcept { return dt_ * static_cast<double>(steps_); }

  double x(std::size_t j, std::size_t k) const { return values_[slot(j, k)]; }
  double y(std::size_t j, std::size_t k) const { return values_[slot(j, k) + 1]; }
  double amplitude(std::size_t j, std::size_t k) const;
  double phase(std::size_t j, std::size_t k) const;

  void set(std::size_t j, std::size_t k, double x, double y);
  void set_polar(std::size_t j, std::size_t k, double amplitude, double phase);

  // Interleaved storage: index (j * channels + k) * 2 + {0: x, 1: y}.
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_amplitude() const noexcept;
  double mean_amplitude(std::size_t k) const;

  // Projects every (x, y) pair onto the disc of radius bound; phases are kept.
  void clip_amplitudes(double bound) noexcept;

  friend bool operator==(const ControlPulse&, const ControlPulse&) = default;

 private:
  std::size_t slot(std::size_t j, std::size_t k) const;

  std::size_t steps_;
  std::size_t channels_;
  double dt_;
  std::vector<double> values_;
};

// Amplitudes uniform over the disc of radius 0.1 * amplitude_max, uniform
// phase; deterministic for a given seed.
ControlPulse random_initial_pulse(std::size_t steps, std::size_t channels, double dt,
                                  double amplitude_max, std::uint64_t seed);

// Smooth random waveform: a sum of `harmonics` positive and negative complex
// Fourier modes across the pulse with Gaussian coefficients, scaled so the
// peak amplitude of each channel equals amplitude_max.
ControlPulse band_limited_pulse(std::size_t steps, std::size_t channels, double dt,
                                double amplitude_max, std::size_t harmonics, std::uint64_t seed);

}  // namespace pulseforge
