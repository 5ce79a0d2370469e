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
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pulseforge/linalg.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/spin_system.hpp"

namespace pulseforge {

enum class Backend { Exact, Trotter, Suzuki };

std::string_view to_string(Backend backend) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

// Unitary matrix together with max |V^dagger V - I| measured at construction.
class Unitary {
 public:
  explicit Unitary(DenseMatrix m);

  const DenseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }
  double unitarity_residual() const noexcept { return residual_; }
  bool is_unitary(double tol = 1e-8) const noexcept { return residual_ <= tol; }

 private:
  DenseMatrix matrix_;
  double residual_;
};

// Everything derived once from a SpinSystem: H0, the per-channel control
// operators F^x_k / F^y_k, their F^z diagonals and the Hadamard basis change.
struct SystemModel {
  explicit SystemModel(const SpinSystem& system);

  std::size_t spins;
  std::size_t dim;
  DenseMatrix h0;
  std::vector<DenseMatrix> fx;               // per channel
  std::vector<DenseMatrix> fy;               // per channel
  std::vector<std::vector<double>> fz_diag;  // per channel
  std::vector<std::vector<int>> fz_twice;    // 2 F^z_k as integers, per channel
  DenseMatrix fx_total;                      // sum over channels
  DenseMatrix hadamard;

  std::size_t channels() const noexcept { return fx.size(); }
};

// Basis matrices for one offset combination:
//   H0' = H0 + sum_k Omega_k F^x_k
//   w1  = exp(-i H0' dt/2) H^(q),  w2 = H^(q) exp(-i H0' dt/2)
struct OffsetBasis {
  std::vector<double> omegas;  // one per channel, rad/s
  DenseMatrix w1;
  DenseMatrix w2;
};

// Precomputed, read-only data for the approximate backends. Shareable across
// threads; all mutable scratch lives in Workspace.
class PropagatorPlan {
 public:
  // offsets[k] lists the offsets (rad/s) for channel k; each list is sorted
  // ascending. One basis (one expm) is built per offset combination. Empty
  // `offsets` means {{0}, {0}, ...}.
  PropagatorPlan(std::shared_ptr<const SystemModel> model, double dt,
                 std::vector<std::vector<double>> offsets);

  // A plan with no bases; usable by the exact backend only.
  static PropagatorPlan exact_only(std::shared_ptr<const SystemModel> model, double dt);

  const SystemModel& model() const noexcept { return *model_; }
  const std::shared_ptr<const SystemModel>& model_ptr() const noexcept { return model_; }
  double dt() const noexcept { return dt_; }
  std::size_t dim() const noexcept { return model_->dim; }

  const std::vector<std::vector<double>>& offsets() const noexcept { return offsets_; }
  std::size_t basis_count() const noexcept { return bases_.size(); }
  const OffsetBasis& basis(std::size_t index) const;

  // Mixed-radix index of a per-channel selection (channel 0 most significant).
  std::size_t combine(std::span<const std::size_t> per_channel) const;

  // Bases of the non-symmetrised split, exp(-i H0 dt) H^(q) and H^(q); only
  // present when every channel's offset list is exactly {0}.
  bool has_trotter() const noexcept { return trotter_.has_value(); }
  const OffsetBasis& trotter_basis() const;

  // Number of expm calls made while building this plan.
  std::uint64_t expm_calls() const noexcept { return expm_calls_; }

 private:
  PropagatorPlan(std::shared_ptr<const SystemModel> model, double dt);

  std::shared_ptr<const SystemModel> model_;
  double dt_;
  std::vector<std::vector<double>> offsets_;
  std::vector<OffsetBasis> bases_;
  std::optional<OffsetBasis> trotter_;
  std::uint64_t expm_calls_ = 0;
};

PropagatorPlan build_plan(const SpinSystem& system, double dt,
                          std::vector<std::vector<double>> offsets = {});
PropagatorPlan build_plan(std::shared_ptr<const SystemModel> model, double dt,
                          std::vector<std::vector<double>> offsets = {});

// Single-offset plan with Omega_k = mean amplitude of channel k over the pulse.
PropagatorPlan mean_offset_plan(const ControlPulse& pulse, std::shared_ptr<const SystemModel> model);
PropagatorPlan mean_offset_plan(const ControlPulse& pulse, const SpinSystem& system);

// Two offsets per channel at {1/4, 3/4} * amplitude_max.
std::vector<double> two_band_offsets(double amplitude_max);
// K band-centred offsets (k + 1/2) * amplitude_max / K.
std::vector<double> band_offsets(double amplitude_max, std::size_t count);

// argmin_i |alpha - offsets[i]|; ties go to the smaller offset.
std::size_t select_offset(double alpha, std::span<const double> offsets);
std::size_t select_offset(double alpha, const PropagatorPlan& plan, std::size_t channel = 0);

// Scratch buffers for one worker.
struct Workspace {
  explicit Workspace(std::size_t dim);

  DenseMatrix exponent;
  DenseMatrix step;
  DenseMatrix acc;
  DenseMatrix tmp;
  DenseMatrix pattern;
  ExpmWorkspace expm;
  SandwichScratch sandwich;
  DiagonalVector phase;
  DiagonalVector alpha;
  std::vector<double> angles;
  std::vector<Complex> levels;
  std::vector<std::size_t> choice;
};

// Step functions take a 0-based step index. `rf_scale` multiplies every
// amplitude (the robustness ensemble); phases are unaffected.

// V_j = exp(-i (H0 + sum_k x_k F^x_k + y_k F^y_k) dt) via a full expm.
void exact_step_into(const SystemModel& model, const ControlPulse& pulse, std::size_t j,
                     DenseMatrix& out, Workspace& ws, double rf_scale = 1.0);
Unitary exact_step(const SystemModel& model, const ControlPulse& pulse, std::size_t j);

// exp(-i phi F^z) exp(-i H0 dt) H exp(-i alpha F^z dt) H exp(i phi F^z); needs
// a plan built with zero offsets.
void trotter_step_into(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                       DenseMatrix& out, Workspace& ws, double rf_scale = 1.0);
Unitary trotter_step(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j);

// Phase-transformed symmetric split with alpha' = alpha - Omega:
//   {exp(-i phi F^z)} w1 {exp(-i alpha' F^z dt)} w2 {exp(i phi F^z)}
// No expm is evaluated. Without an explicit basis index the nearest offset per
// channel is chosen.
void suzuki_step_into(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                      DenseMatrix& out, Workspace& ws, std::optional<std::size_t> basis_index = {},
                      double rf_scale = 1.0);
Unitary suzuki_step(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                    std::optional<std::size_t> basis_index = {});

// Suzuki sub-propagators of step j for every RF scaling; the phase pattern is
// computed once and shared.
void suzuki_ensemble_step_into(const PropagatorPlan& plan, const ControlPulse& pulse,
                               std::size_t j, std::span<const double> scalings,
                               std::span<DenseMatrix> outs, Workspace& ws);

void step_into(Backend backend, const PropagatorPlan& plan, const ControlPulse& pulse,
               std::size_t j, DenseMatrix& out, Workspace& ws, double rf_scale = 1.0);

// V = V_n ... V_1 (step 1 applied first), accumulated into ws.acc; the result
// is left in `out`.
void total_propagator_into(const ControlPulse& pulse, Backend backend, const PropagatorPlan& plan,
                           DenseMatrix& out, Workspace& ws, double rf_scale = 1.0);
Unitary total_propagator(const ControlPulse& pulse, Backend backend, const PropagatorPlan& plan);

// Suzuki total propagators at several RF scalings. The phase pattern of each
// step is formed once and shared by every member.
std::vector<Unitary> robustness_ensemble(const ControlPulse& pulse, const PropagatorPlan& plan,
                                         std::span<const double> scalings);
// Lower-level form: outs[s] receives the propagator for scalings[s].
void robustness_ensemble_into(const ControlPulse& pulse, const PropagatorPlan& plan,
                              std::span<const double> scalings, std::vector<DenseMatrix>& outs,
                              Workspace& ws);

}  // namespace pulseforge
