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
#include <span>
#include <vector>

#include "pulseforge/linalg.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/pulse.hpp"

namespace pulseforge {

// phi = |tr(U^dagger V)|^2 / N^2 and the raw overlap tr(U^dagger V).
struct FidelityValue {
  double phi = 0.0;
  Complex raw_overlap{};
};

FidelityValue fidelity(const DenseMatrix& target, const DenseMatrix& v);
FidelityValue fidelity(const Unitary& target, const Unitary& v);
double infidelity(const DenseMatrix& a, const DenseMatrix& b);

// Leading infidelity of the symmetric split for one spin with H0 = w0 I^z and
// control alpha I^x:  w0^2 alpha^2 (w0^2 + 4 alpha^2) dt^6 / 2304.
double one_spin_infidelity_leading(double omega0, double alpha, double dt) noexcept;

// d phi / d x_j^k and d phi / d y_j^k, units 1/(rad/s).
class GradientField {
 public:
  GradientField(std::size_t steps, std::size_t channels)
      : steps_(steps), channels_(channels), values_(steps * channels * 2, 0.0) {}

  std::size_t steps() const noexcept { return steps_; }
  std::size_t channels() const noexcept { return channels_; }

  double& dx(std::size_t j, std::size_t k) { return values_[(j * channels_ + k) * 2]; }
  double& dy(std::size_t j, std::size_t k) { return values_[(j * channels_ + k) * 2 + 1]; }
  double dx(std::size_t j, std::size_t k) const { return values_[(j * channels_ + k) * 2]; }
  double dy(std::size_t j, std::size_t k) const { return values_[(j * channels_ + k) * 2 + 1]; }

  // Same layout as ControlPulse::values().
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_abs() const noexcept;

 private:
  std::size_t steps_;
  std::size_t channels_;
  std::vector<double> values_;
};

// max_i |a_i - b_i| / max_i |b_i|
double max_relative_error(const GradientField& a, const GradientField& b);

struct FidelityGradient {
  FidelityValue fidelity;  // mean over scalings; raw_overlap of the first member
  GradientField gradient;
};

// GRAPE: every V_j is computed once, forward products P_m = V_m ... V_1 are
// cached, and the target is propagated backwards so each of the n*p*2
// derivatives costs O(N^2). The step derivative uses the symmetrised
// first-order form dV_j/da = -i dt (H_a V_j + V_j H_a) / 2.
//
// With several RF scalings the objective is the mean fidelity and the
// gradient is the mean gradient.
FidelityGradient fidelity_and_gradient(const ControlPulse& pulse, const DenseMatrix& target,
                                       const PropagatorPlan& plan, Backend backend,
                                       std::span<const double> scalings = {});

GradientField grape_gradient(const ControlPulse& pulse, const Unitary& target,
                             const PropagatorPlan& plan, Backend backend);

// Mean fidelity over the scalings (or the nominal pulse when empty).
double ensemble_fidelity(const ControlPulse& pulse, const DenseMatrix& target,
                         const PropagatorPlan& plan, Backend backend,
                         std::span<const double> scalings = {});

// Central differences of ensemble_fidelity, 2 n p total propagators per
// scaling.
GradientField finite_diff_gradient(const ControlPulse& pulse, const Unitary& target,
                                   const PropagatorPlan& plan, Backend backend, double h,
                                   std::span<const double> scalings = {});

}  // namespace pulseforge
