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

#include "pulseforge/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "pulseforge/counters.hpp"
#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {


void check_step(const ControlPulse& pulse, std::size_t j) {
  if (j >= pulse.steps()) {
    throw IndexError("step " + std::to_string(j) + " out of range (n = " +
                     std::to_string(pulse.steps()) + ")");
  }
}

void check_channels(const SystemModel& model, const ControlPulse& pulse) {
  if (pulse.channels() != model.channels()) {
    throw DimensionError("pulse has " + std::to_string(pulse.channels()) +
                         " channels, system declares " + std::to_string(model.channels()));
  }
}

// out = sum_k coeff_k * spectra_k, or a direct view when there is one channel.
std::span<const double> combined_spectrum(const SystemModel& model, std::span<const double> coeffs,
                                          std::vector<double>& buffer) {
  if (coeffs.size() == 1) return model.fz_diag.front();
  buffer.assign(model.dim, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const auto& fz = model.fz_diag[k];
    for (std::size_t b = 0; b < buffer.size(); ++b) buffer[b] += coeffs[k] * fz[b];
  }
  return buffer;
}

// out[b] = exp(-i sum_k theta_k F^z_k[b]). F^z_k takes the half-integer
// values m/2 with |m| <= q, so each channel needs a single sincos; the other
// levels follow by repeated multiplication.
void fz_phase(const SystemModel& model, std::span<const double> thetas, DiagonalVector& out,
              std::vector<Complex>& levels) {
  const int q = static_cast<int>(model.spins);
  const std::size_t width = static_cast<std::size_t>(2 * q + 1);
  const std::size_t p = thetas.size();
  levels.resize(p * width);
  for (std::size_t k = 0; k < p; ++k) {
    Complex* t = levels.data() + k * width + q;  // t[m] = exp(-i theta m / 2)
    const Complex w = std::polar(1.0, -0.5 * thetas[k]);
    t[0] = 1.0;
    for (int m = 1; m <= q; ++m) {
      t[m] = t[m - 1] * w;
      t[-m] = std::conj(t[m]);
    }
  }
  out.resize(model.dim);
  const Complex* t0 = levels.data() + q;
  const int* idx = model.fz_twice[0].data();
  for (std::size_t b = 0; b < model.dim; ++b) out[b] = t0[idx[b]];
  for (std::size_t k = 1; k < p; ++k) {
    const Complex* t = levels.data() + k * width + q;
    const int* ik = model.fz_twice[k].data();
    for (std::size_t b = 0; b < model.dim; ++b) out[b] *= t[ik[b]];
  }
}

// Fills ws.phase with exp(-i sum_k phi_k F^z_k) for step j.
void phase_vector(const SystemModel& model, const ControlPulse& pulse, std::size_t j,
                  Workspace& ws) {
  const std::size_t p = model.channels();
  ws.angles.resize(p);
  for (std::size_t k = 0; k < p; ++k) ws.angles[k] = pulse.phase(j, k);
  fz_phase(model, ws.angles, ws.phase, ws.levels);
}

// Chooses the basis for step j and fills ws.alpha with
// exp(-i sum_k (s alpha_k - Omega_k) F^z_k dt). Returns the basis index.
std::size_t alpha_vector(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                         std::optional<std::size_t> basis_index, double rf_scale, Workspace& ws) {
  const SystemModel& model = plan.model();
  const std::size_t p = model.channels();
  std::size_t index = 0;
  if (basis_index) {
    index = *basis_index;
    plan.basis(index);
  } else {
    ws.choice.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
      ws.choice[k] = select_offset(rf_scale * pulse.amplitude(j, k), plan.offsets()[k]);
    }
    index = plan.combine(ws.choice);
  }
  const OffsetBasis& basis = plan.basis(index);
  ws.angles.resize(p);
  for (std::size_t k = 0; k < p; ++k) {
    ws.angles[k] = (rf_scale * pulse.amplitude(j, k) - basis.omegas[k]) * plan.dt();
  }
  fz_phase(model, ws.angles, ws.alpha, ws.levels);
  return index;
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::Exact: return "exact";
    case Backend::Trotter: return "trotter";
    case Backend::Suzuki: return "suzuki";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  if (name == "exact") return Backend::Exact;
  if (name == "trotter") return Backend::Trotter;
  if (name == "suzuki") return Backend::Suzuki;
  return std::nullopt;
}

Unitary::Unitary(DenseMatrix m) : matrix_(std::move(m)), residual_(pulseforge::unitarity_residual(matrix_)) {}

SystemModel::SystemModel(const SpinSystem& system)
    : spins(system.size()),
      dim(system.dim()),
      h0(build_h0(system)),
      fx_total(system.dim()),
      hadamard(hadamard_basis(system.size())) {
  for (const auto& channel : system.channels()) {
    fx.push_back(total_spin_op(system, Axis::X, channel.species));
    fy.push_back(total_spin_op(system, Axis::Y, channel.species));
    fz_diag.push_back(fz_spectrum(system, channel.species));
    std::vector<int> twice;
    for (double v : fz_diag.back()) twice.push_back(static_cast<int>(std::lround(2.0 * v)));
    fz_twice.push_back(std::move(twice));
    fx_total += fx.back();
  }
}

// --- plan -----------------------------------------------------------------

PropagatorPlan::PropagatorPlan(std::shared_ptr<const SystemModel> model, double dt)
    : model_(std::move(model)), dt_(dt) {
  if (!model_) throw PreconditionError("PropagatorPlan: null system model");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw PreconditionError("PropagatorPlan: dt must be > 0");
}

PropagatorPlan PropagatorPlan::exact_only(std::shared_ptr<const SystemModel> model, double dt) {
  return PropagatorPlan(std::move(model), dt);
}

PropagatorPlan::PropagatorPlan(std::shared_ptr<const SystemModel> model, double dt,
                               std::vector<std::vector<double>> offsets)
    : PropagatorPlan(std::move(model), dt) {
  const std::size_t p = model_->channels();
  if (offsets.empty()) offsets.assign(p, {0.0});
  if (offsets.size() != p) {
    throw DimensionError("PropagatorPlan: need one offset list per channel (" + std::to_string(p) +
                         ")");
  }
  std::size_t combos = 1;
  for (auto& list : offsets) {
    if (list.empty()) throw PreconditionError("PropagatorPlan: empty offset list");
    for (double v : list) {
      if (!std::isfinite(v)) throw NumericError("PropagatorPlan: non-finite offset");
    }
    std::sort(list.begin(), list.end());
    combos *= list.size();
  }
  offsets_ = std::move(offsets);

  const std::size_t n = model_->dim;
  DenseMatrix shifted(n);
  DenseMatrix half;
  ExpmWorkspace ews;
  std::vector<std::size_t> choice(p);
  bases_.reserve(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    for (std::size_t k = p; k-- > 0;) {
      choice[k] = rest % offsets_[k].size();
      rest /= offsets_[k].size();
    }
    OffsetBasis basis;
    shifted = model_->h0;
    for (std::size_t k = 0; k < p; ++k) {
      const double omega = offsets_[k][choice[k]];
      basis.omegas.push_back(omega);
      if (omega != 0.0) {
        auto dst = shifted.entries();
        auto src = model_->fx[k].entries();
        for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += omega * src[e];
      }
    }
    shifted *= Complex(0.0, -0.5 * dt_);
    expm_into(shifted, half, ews);
    ++expm_calls_;
    multiply_into(half, model_->hadamard, basis.w1);
    multiply_into(model_->hadamard, half, basis.w2);
    bases_.push_back(std::move(basis));
  }

  const bool all_zero = std::all_of(offsets_.begin(), offsets_.end(), [](const auto& list) {
    return list.size() == 1 && list.front() == 0.0;
  });
  if (all_zero) {
    // w1 w2 = exp(-i H0 dt/2) H H exp(-i H0 dt/2) = exp(-i H0 dt)
    OffsetBasis t;
    t.omegas.assign(p, 0.0);
    const DenseMatrix full = multiply(bases_.front().w1, bases_.front().w2);
    t.w1 = multiply(full, model_->hadamard);
    t.w2 = model_->hadamard;
    trotter_ = std::move(t);
  }
}

const OffsetBasis& PropagatorPlan::basis(std::size_t index) const {
  if (index >= bases_.size()) {
    throw IndexError("offset basis index " + std::to_string(index) + " out of range");
  }
  return bases_[index];
}

std::size_t PropagatorPlan::combine(std::span<const std::size_t> per_channel) const {
  if (per_channel.size() != offsets_.size()) throw DimensionError("combine: channel count mismatch");
  std::size_t index = 0;
  for (std::size_t k = 0; k < per_channel.size(); ++k) {
    if (per_channel[k] >= offsets_[k].size()) throw IndexError("combine: offset index out of range");
    index = index * offsets_[k].size() + per_channel[k];
  }
  return index;
}

const OffsetBasis& PropagatorPlan::trotter_basis() const {
  if (!trotter_) throw PreconditionError("trotter backend requires a plan built with zero offsets");
  return *trotter_;
}

PropagatorPlan build_plan(const SpinSystem& system, double dt,
                          std::vector<std::vector<double>> offsets) {
  return PropagatorPlan(std::make_shared<const SystemModel>(system), dt, std::move(offsets));
}

PropagatorPlan build_plan(std::shared_ptr<const SystemModel> model, double dt,
                          std::vector<std::vector<double>> offsets) {
  return PropagatorPlan(std::move(model), dt, std::move(offsets));
}

PropagatorPlan mean_offset_plan(const ControlPulse& pulse, std::shared_ptr<const SystemModel> model) {
  check_channels(*model, pulse);
  std::vector<std::vector<double>> offsets;
  for (std::size_t k = 0; k < pulse.channels(); ++k) offsets.push_back({pulse.mean_amplitude(k)});
  return PropagatorPlan(std::move(model), pulse.dt(), std::move(offsets));
}

PropagatorPlan mean_offset_plan(const ControlPulse& pulse, const SpinSystem& system) {
  return mean_offset_plan(pulse, std::make_shared<const SystemModel>(system));
}

std::vector<double> two_band_offsets(double amplitude_max) {
  return {0.25 * amplitude_max, 0.75 * amplitude_max};
}

std::vector<double> band_offsets(double amplitude_max, std::size_t count) {
  if (count == 0) throw PreconditionError("band_offsets: count must be >= 1");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = (static_cast<double>(k) + 0.5) * amplitude_max / static_cast<double>(count);
  }
  return out;
}

std::size_t select_offset(double alpha, std::span<const double> offsets) {
  if (offsets.empty()) throw PreconditionError("select_offset: no offsets");
  std::size_t best = 0;
  double best_gap = std::abs(alpha - offsets[0]);
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    const double gap = std::abs(alpha - offsets[i]);
    // strict: on ties the earlier (smaller, lists are sorted) offset wins
    if (gap < best_gap) {
      best = i;
      best_gap = gap;
    }
  }
  return best;
}

std::size_t select_offset(double alpha, const PropagatorPlan& plan, std::size_t channel) {
  if (channel >= plan.offsets().size()) throw IndexError("select_offset: channel out of range");
  return select_offset(alpha, plan.offsets()[channel]);
}

// --- steps ----------------------------------------------------------------

Workspace::Workspace(std::size_t dim)
    : exponent(dim), step(dim), acc(dim), tmp(dim), pattern(dim), phase(dim), alpha(dim) {}

void exact_step_into(const SystemModel& model, const ControlPulse& pulse, std::size_t j,
                     DenseMatrix& out, Workspace& ws, double rf_scale) {
  check_step(pulse, j);
  check_channels(model, pulse);
  detail::count(detail::Op::Subpropagator);
  ws.exponent = model.h0;
  auto dst = ws.exponent.entries();
  for (std::size_t k = 0; k < model.channels(); ++k) {
    const double x = rf_scale * pulse.x(j, k);
    const double y = rf_scale * pulse.y(j, k);
    auto fx = model.fx[k].entries();
    auto fy = model.fy[k].entries();
    for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += x * fx[e] + y * fy[e];
  }
  ws.exponent *= Complex(0.0, -pulse.dt());
  expm_into(ws.exponent, out, ws.expm);
}

Unitary exact_step(const SystemModel& model, const ControlPulse& pulse, std::size_t j) {
  Workspace ws(model.dim);
  DenseMatrix out(model.dim);
  exact_step_into(model, pulse, j, out, ws);
  return Unitary(std::move(out));
}

void trotter_step_into(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                       DenseMatrix& out, Workspace& ws, double rf_scale) {
  check_step(pulse, j);
  check_channels(plan.model(), pulse);
  const OffsetBasis& basis = plan.trotter_basis();
  detail::count(detail::Op::Subpropagator);
  phase_vector(plan.model(), pulse, j, ws);
  const std::size_t p = plan.model().channels();
  std::vector<double> amps(p);
  for (std::size_t k = 0; k < p; ++k) amps[k] = rf_scale * pulse.amplitude(j, k);
  const auto spectrum = combined_spectrum(plan.model(), amps, ws.angles);
  if (p == 1) {
    diag_exp_into(spectrum, Complex(0.0, -amps[0] * plan.dt()), ws.alpha);
  } else {
    diag_exp_into(spectrum, Complex(0.0, -plan.dt()), ws.alpha);
  }
  sandwich_product_into(ws.phase, basis.w1, ws.alpha, basis.w2, out, ws.sandwich);
}

Unitary trotter_step(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j) {
  Workspace ws(plan.dim());
  DenseMatrix out(plan.dim());
  trotter_step_into(plan, pulse, j, out, ws);
  return Unitary(std::move(out));
}

void suzuki_step_into(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                      DenseMatrix& out, Workspace& ws, std::optional<std::size_t> basis_index,
                      double rf_scale) {
  check_step(pulse, j);
  check_channels(plan.model(), pulse);
  if (plan.basis_count() == 0) throw PreconditionError("suzuki backend requires offset bases");
  detail::count(detail::Op::Subpropagator);
  phase_vector(plan.model(), pulse, j, ws);
  const std::size_t index = alpha_vector(plan, pulse, j, basis_index, rf_scale, ws);
  const OffsetBasis& basis = plan.basis(index);
  sandwich_product_into(ws.phase, basis.w1, ws.alpha, basis.w2, out, ws.sandwich);
}

Unitary suzuki_step(const PropagatorPlan& plan, const ControlPulse& pulse, std::size_t j,
                    std::optional<std::size_t> basis_index) {
  Workspace ws(plan.dim());
  DenseMatrix out(plan.dim());
  suzuki_step_into(plan, pulse, j, out, ws, basis_index);
  return Unitary(std::move(out));
}

void suzuki_ensemble_step_into(const PropagatorPlan& plan, const ControlPulse& pulse,
                               std::size_t j, std::span<const double> scalings,
                               std::span<DenseMatrix> outs, Workspace& ws) {
  check_step(pulse, j);
  check_channels(plan.model(), pulse);
  if (plan.basis_count() == 0) throw PreconditionError("suzuki backend requires offset bases");
  if (outs.size() != scalings.size()) throw DimensionError("ensemble step: one output per scaling");
  phase_vector(plan.model(), pulse, j, ws);
  phase_pattern_into(ws.phase, ws.pattern);
  for (std::size_t s = 0; s < scalings.size(); ++s) {
    detail::count(detail::Op::Subpropagator);
    const std::size_t index = alpha_vector(plan, pulse, j, std::nullopt, scalings[s], ws);
    const OffsetBasis& basis = plan.basis(index);
    sandwich_product_into(ws.pattern, basis.w1, ws.alpha, basis.w2, outs[s], ws.sandwich);
  }
}

void step_into(Backend backend, const PropagatorPlan& plan, const ControlPulse& pulse,
               std::size_t j, DenseMatrix& out, Workspace& ws, double rf_scale) {
  switch (backend) {
    case Backend::Exact: exact_step_into(plan.model(), pulse, j, out, ws, rf_scale); return;
    case Backend::Trotter: trotter_step_into(plan, pulse, j, out, ws, rf_scale); return;
    case Backend::Suzuki: suzuki_step_into(plan, pulse, j, out, ws, std::nullopt, rf_scale); return;
  }
}

// --- products -------------------------------------------------------------

void total_propagator_into(const ControlPulse& pulse, Backend backend, const PropagatorPlan& plan,
                           DenseMatrix& out, Workspace& ws, double rf_scale) {
  if (pulse.dt() != plan.dt()) throw PreconditionError("total_propagator: pulse dt differs from plan dt");
  ws.acc.set_identity();
  for (std::size_t j = 0; j < pulse.steps(); ++j) {
    step_into(backend, plan, pulse, j, ws.step, ws, rf_scale);
    multiply_into(ws.step, ws.acc, ws.tmp);
    std::swap(ws.acc, ws.tmp);
  }
  out = ws.acc;
}

Unitary total_propagator(const ControlPulse& pulse, Backend backend, const PropagatorPlan& plan) {
  Workspace ws(plan.dim());
  DenseMatrix out(plan.dim());
  total_propagator_into(pulse, backend, plan, out, ws);
  return Unitary(std::move(out));
}

void robustness_ensemble_into(const ControlPulse& pulse, const PropagatorPlan& plan,
                              std::span<const double> scalings, std::vector<DenseMatrix>& outs,
                              Workspace& ws) {
  if (pulse.dt() != plan.dt()) throw PreconditionError("robustness_ensemble: pulse dt differs from plan dt");
  check_channels(plan.model(), pulse);
  if (plan.basis_count() == 0) throw PreconditionError("suzuki backend requires offset bases");
  for (double s : scalings) {
    if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError("RF scalings must be positive");
  }
  const std::size_t n = plan.dim();
  outs.resize(scalings.size());
  for (auto& m : outs) {
    m.resize(n);
    m.set_identity();
  }
  std::vector<DenseMatrix> steps(scalings.size(), DenseMatrix(n));
  for (std::size_t j = 0; j < pulse.steps(); ++j) {
    suzuki_ensemble_step_into(plan, pulse, j, scalings, steps, ws);
    for (std::size_t s = 0; s < scalings.size(); ++s) {
      multiply_into(steps[s], outs[s], ws.tmp);
      std::swap(outs[s], ws.tmp);
    }
  }
}

std::vector<Unitary> robustness_ensemble(const ControlPulse& pulse, const PropagatorPlan& plan,
                                         std::span<const double> scalings) {
  Workspace ws(plan.dim());
  std::vector<DenseMatrix> outs;
  robustness_ensemble_into(pulse, plan, scalings, outs, ws);
  std::vector<Unitary> result;
  result.reserve(outs.size());
  for (auto& m : outs) result.emplace_back(std::move(m));
  return result;
}

}  // namespace pulseforge
