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

#include "pulseforge/verify.hpp"

#include <cmath>
#include <memory>

#include "pulseforge/errors.hpp"
#include "pulseforge/fidelity.hpp"
#include "pulseforge/propagator.hpp"

namespace pulseforge {

namespace {

SpinSystem one_spin(double offset_hz) { return SpinSystem::homonuclear({kTwoPi * offset_hz}); }

double step_infidelity(Backend backend, double offset_hz, double amp_hz, double dt) {
  const SpinSystem sys = one_spin(offset_hz);
  const PropagatorPlan plan = build_plan(sys, dt);
  ControlPulse pulse(1, 1, dt);
  pulse.set_polar(0, 0, kTwoPi * amp_hz, 0.3);
  const Unitary exact = exact_step(plan.model(), pulse, 0);
  const Unitary approx =
      backend == Backend::Trotter ? trotter_step(plan, pulse, 0) : suzuki_step(plan, pulse, 0);
  return infidelity(exact.matrix(), approx.matrix());
}

double phase_identity_residual(const SpinSystem& sys) {
  const SystemModel model(sys);
  const double dt = 7e-6;
  double worst = 0.0;
  for (std::size_t k = 0; k < model.channels(); ++k) {
    ControlPulse pulse(1, model.channels(), dt);
    pulse.set_polar(0, k, kTwoPi * 6000.0, 1.1);
    const double alpha = pulse.amplitude(0, k);
    const double phi = pulse.phase(0, k);
    const Unitary step = exact_step(model, pulse, 0);

    DenseMatrix h = model.h0;
    DenseMatrix fx = model.fx[k];
    fx *= Complex(alpha, 0.0);
    h += fx;
    h *= Complex(0.0, -dt);
    const DenseMatrix core = expm(h);
    DiagonalVector rot = diag_exp(model.fz_diag[k], Complex(0.0, -phi));
    DiagonalVector unrot = diag_exp(model.fz_diag[k], Complex(0.0, phi));
    DenseMatrix left = diag_mul(rot, core, Side::Left);
    const DenseMatrix reference = diag_mul(unrot, left, Side::Right);
    worst = std::max(worst, max_abs_diff(step.matrix(), reference));
  }
  return worst;
}

double growth_ratio(std::size_t n) {
  const SpinSystem sys = one_spin(10000.0);
  const double dt = 1e-5;
  const PropagatorPlan plan = build_plan(sys, dt);
  auto run = [&](std::size_t steps) {
    ControlPulse pulse(steps, 1, dt);
    for (std::size_t j = 0; j < steps; ++j) pulse.set_polar(j, 0, kTwoPi * 4000.0, 0.0);
    const Unitary e = total_propagator(pulse, Backend::Exact, plan);
    const Unitary s = total_propagator(pulse, Backend::Suzuki, plan);
    return infidelity(e.matrix(), s.matrix());
  };
  return run(2 * n) / run(n);
}

CheckResult band(std::string name, double value, double centre, double width, double scale) {
  const double lo = centre - width * scale;
  const double hi = centre + width * scale;
  return {std::move(name), value, lo, hi, value >= lo && value <= hi};
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  const double s = options.tol_scale;
  if (!(s >= 0.0) || !std::isfinite(s)) throw PreconditionError("tol_scale must be >= 0");
  std::vector<CheckResult> out;

  const double bound = step_infidelity(Backend::Suzuki, 15000.0, 5000.0, 1e-5);
  out.push_back({"one_spin_10us_bound", bound, 0.0, 5e-5 * s, bound <= 5e-5 * s});

  const double measured = step_infidelity(Backend::Suzuki, 10000.0, 4000.0, 1e-6);
  const double analytic = one_spin_infidelity_leading(kTwoPi * 10000.0, kTwoPi * 4000.0, 1e-6);
  out.push_back(band("one_spin_leading_ratio", measured / analytic, 1.0, 0.05, s));

  std::vector<double> dts, suz, trot;
  for (double us = 1.0; us <= 32.0; us *= 2.0) {
    dts.push_back(us * 1e-6);
    suz.push_back(step_infidelity(Backend::Suzuki, 10000.0, 4000.0, us * 1e-6));
    trot.push_back(step_infidelity(Backend::Trotter, 10000.0, 4000.0, us * 1e-6));
  }
  out.push_back(band("suzuki_order_slope", loglog_slope(dts, suz), 6.0, 0.3, s));
  out.push_back(band("trotter_order_slope", loglog_slope(dts, trot), 4.0, 0.3, s));

  double identity = 0.0;
  if (options.system) {
    identity = phase_identity_residual(*options.system);
  } else {
    identity = phase_identity_residual(one_spin(10000.0));
    const SpinSystem strong = SpinSystem::homonuclear(
        {kTwoPi * 1200.0, -kTwoPi * 800.0, kTwoPi * 300.0},
        {{0, 1, kTwoPi * 150.0}, {1, 2, kTwoPi * 90.0}, {0, 2, kTwoPi * 20.0}},
        CouplingModel::Strong);
    identity = std::max(identity, phase_identity_residual(strong));
  }
  out.push_back({"phase_transform_identity", identity, 0.0, 1e-12 * s, identity <= 1e-12 * s});

  out.push_back(band("worst_case_growth_ratio", growth_ratio(20), 4.0, 0.5, s));
  return out;
}

}  // namespace pulseforge
