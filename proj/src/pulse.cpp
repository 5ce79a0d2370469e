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

#include "pulseforge/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "pulseforge/errors.hpp"

namespace pulseforge {

ControlPulse::ControlPulse(std::size_t steps, std::size_t channels, double dt)
    : steps_(steps), channels_(channels), dt_(dt), values_(steps * channels * 2, 0.0) {
  if (steps == 0) throw PreconditionError("ControlPulse: n >= 1 required");
  if (channels == 0) throw PreconditionError("ControlPulse: at least one channel required");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("ControlPulse: dt must be > 0");
}

std::size_t ControlPulse::slot(std::size_t j, std::size_t k) const {
  if (j >= steps_) throw IndexError("ControlPulse: step " + std::to_string(j) + " out of range");
  if (k >= channels_) throw IndexError("ControlPulse: channel out of range");
  return (j * channels_ + k) * 2;
}

double ControlPulse::amplitude(std::size_t j, std::size_t k) const {
  const std::size_t s = slot(j, k);
  return std::hypot(values_[s], values_[s + 1]);
}

double ControlPulse::phase(std::size_t j, std::size_t k) const {
  const std::size_t s = slot(j, k);
  if (values_[s] == 0.0 && values_[s + 1] == 0.0) return 0.0;
  return std::atan2(values_[s + 1], values_[s]);
}

void ControlPulse::set(std::size_t j, std::size_t k, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw NumericError("ControlPulse: non-finite amplitude");
  const std::size_t s = slot(j, k);
  values_[s] = x;
  values_[s + 1] = y;
}

void ControlPulse::set_polar(std::size_t j, std::size_t k, double amplitude, double phase) {
  set(j, k, amplitude * std::cos(phase), amplitude * std::sin(phase));
}

double ControlPulse::max_amplitude() const noexcept {
  double best = 0.0;
  for (std::size_t s = 0; s < values_.size(); s += 2) {
    best = std::max(best, std::hypot(values_[s], values_[s + 1]));
  }
  return best;
}

double ControlPulse::mean_amplitude(std::size_t k) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < steps_; ++j) sum += amplitude(j, k);
  return sum / static_cast<double>(steps_);
}

void ControlPulse::clip_amplitudes(double bound) noexcept {
  for (std::size_t s = 0; s < values_.size(); s += 2) {
    const double a = std::hypot(values_[s], values_[s + 1]);
    if (a > bound) {
      const double f = bound / a;
      values_[s] *= f;
      values_[s + 1] *= f;
      // rounding can leave hypot a few ulps above the bound
      while (std::hypot(values_[s], values_[s + 1]) > bound) {
        values_[s] = std::nextafter(values_[s], 0.0);
        values_[s + 1] = std::nextafter(values_[s + 1], 0.0);
      }
    }
  }
}

ControlPulse random_initial_pulse(std::size_t steps, std::size_t channels, double dt,
                                  double amplitude_max, std::uint64_t seed) {
  ControlPulse pulse(steps, channels, dt);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = 0.1 * amplitude_max;
  for (std::size_t j = 0; j < steps; ++j) {
    for (std::size_t k = 0; k < channels; ++k) {
      const double r = radius * std::sqrt(unit(rng));
      const double phi = 2.0 * M_PI * unit(rng);
      pulse.set_polar(j, k, r, phi);
    }
  }
  return pulse;
}

ControlPulse band_limited_pulse(std::size_t steps, std::size_t channels, double dt,
                                double amplitude_max, std::size_t harmonics, std::uint64_t seed) {
  ControlPulse pulse(steps, channels, dt);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::complex<double>> wave(steps);
  for (std::size_t k = 0; k < channels; ++k) {
    std::fill(wave.begin(), wave.end(), std::complex<double>{});
    for (std::size_t m = 1; m <= harmonics; ++m) {
      for (int sign : {1, -1}) {
        const std::complex<double> c(gauss(rng), gauss(rng));
        for (std::size_t j = 0; j < steps; ++j) {
          const double t = static_cast<double>(j) / static_cast<double>(steps);
          wave[j] += c * std::polar(1.0, sign * 2.0 * M_PI * static_cast<double>(m) * t);
        }
      }
    }
    double peak = 0.0;
    for (const auto& w : wave) peak = std::max(peak, std::abs(w));
    const double scale = peak > 0.0 ? amplitude_max / peak : 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
      pulse.set(j, k, wave[j].real() * scale, wave[j].imag() * scale);
    }
  }
  return pulse;
}

}  // namespace pulseforge
