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

#include "pulseforge/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {

constexpr double kNominal[] = {1.0};

std::span<const double> effective_scalings(std::span<const double> scalings) {
  return scalings.empty() ? std::span<const double>(kNominal) : scalings;
}

// tr(G H) for dense G and H, O(N^2).
Complex trace_product(const DenseMatrix& g, const DenseMatrix& h) {
  const std::size_t n = g.dim();
  Complex s{};
  for (std::size_t a = 0; a < n; ++a) {
    const Complex* grow = g.row(a);
    for (std::size_t b = 0; b < n; ++b) {
      const Complex hv = h(b, a);
      if (hv != Complex{}) s += grow[b] * hv;
    }
  }
  return s;
}

}  // namespace

FidelityValue fidelity(const DenseMatrix& target, const DenseMatrix& v) {
  if (target.dim() != v.dim()) throw DimensionError("fidelity: dimension mismatch");
  if (target.empty()) throw DimensionError("fidelity: empty matrix");
  const Complex overlap = hs_inner(target, v);
  const double n = static_cast<double>(target.dim());
  return {std::norm(overlap) / (n * n), overlap};
}

FidelityValue fidelity(const Unitary& target, const Unitary& v) {
  return fidelity(target.matrix(), v.matrix());
}

double infidelity(const DenseMatrix& a, const DenseMatrix& b) { return 1.0 - fidelity(a, b).phi; }

double one_spin_infidelity_leading(double omega0, double alpha, double dt) noexcept {
  const double w2 = omega0 * omega0;
  const double a2 = alpha * alpha;
  return w2 * a2 * (w2 + 4.0 * a2) * std::pow(dt, 6) / 2304.0;
}

double GradientField::max_abs() const noexcept {
  double best = 0.0;
  for (double v : values_) best = std::max(best, std::abs(v));
  return best;
}

double max_relative_error(const GradientField& a, const GradientField& b) {
  if (a.values().size() != b.values().size()) throw DimensionError("gradient shape mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    diff = std::max(diff, std::abs(a.values()[i] - b.values()[i]));
  }
  const double scale = b.max_abs();
  return scale > 0.0 ? diff / scale : diff;
}

FidelityGradient fidelity_and_gradient(const ControlPulse& pulse, const DenseMatrix& target,
                                       const PropagatorPlan& plan, Backend backend,
                                       std::span<const double> scalings) {
  const std::size_t n = plan.dim();
  if (target.dim() != n) throw DimensionError("gradient: target dimension mismatch");
  if (pulse.channels() != plan.model().channels()) throw DimensionError("gradient: channel mismatch");
  if (pulse.dt() != plan.dt()) throw PreconditionError("gradient: pulse dt differs from plan dt");

  const auto members = effective_scalings(scalings);
  const std::size_t steps = pulse.steps();
  const std::size_t p = pulse.channels();
  const SystemModel& model = plan.model();
  const double norm = 1.0 / static_cast<double>(n * n);
  const double weight = 1.0 / static_cast<double>(members.size());

  FidelityGradient result{{}, GradientField(steps, p)};
  Workspace ws(n);
  // With several scalings on the suzuki backend all members' steps are built
  // up front so each step's phase pattern is computed once.
  const bool shared = backend == Backend::Suzuki && members.size() > 1;
  std::vector<std::vector<DenseMatrix>> subs(shared ? members.size() : 1,
                                             std::vector<DenseMatrix>(steps, DenseMatrix(n)));
  if (shared) {
    std::vector<DenseMatrix> column(members.size(), DenseMatrix(n));
    for (std::size_t j = 0; j < steps; ++j) {
      suzuki_ensemble_step_into(plan, pulse, j, members, column, ws);
      for (std::size_t s = 0; s < members.size(); ++s) std::swap(subs[s][j], column[s]);
    }
  }
  std::vector<DenseMatrix> forward(steps + 1, DenseMatrix(n));
  // traces[m][2k + axis] = tr(R_m H_{k,axis} P_m)
  std::vector<Complex> traces((steps + 1) * p * 2);
  DenseMatrix back = target.adjoint();
  DenseMatrix g(n);

  for (std::size_t member = 0; member < members.size(); ++member) {
    const double scale = members[member];
    auto& v = subs[shared ? member : 0];
    if (!shared) {
      for (std::size_t j = 0; j < steps; ++j) step_into(backend, plan, pulse, j, v[j], ws, scale);
    }

    forward[0].set_identity();
    for (std::size_t j = 0; j < steps; ++j) multiply_into(v[j], forward[j], forward[j + 1]);

    // R_n = U^dagger, R_m = R_{m+1} V_m, so tr(R_m P_m) = tr(U^dagger V) for every m.
    back = target.adjoint();
    for (std::size_t m = steps + 1; m-- > 0;) {
      if (m < steps) {
        multiply_into(back, v[m], ws.tmp);
        std::swap(back, ws.tmp);
      }
      multiply_into(forward[m], back, g);
      for (std::size_t k = 0; k < p; ++k) {
        traces[(m * p + k) * 2] = trace_product(g, model.fx[k]);
        traces[(m * p + k) * 2 + 1] = trace_product(g, model.fy[k]);
      }
    }
    const Complex overlap = trace(back);
    const double phi = std::norm(overlap) * norm;
    result.fidelity.phi += weight * phi;
    if (member == 0) result.fidelity.raw_overlap = overlap;

    // d tr/da_j = -i dt s (T_{j+1} + T_j) / 2
    const Complex factor = Complex(0.0, -0.5 * pulse.dt() * scale);
    for (std::size_t j = 0; j < steps; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t axis = 0; axis < 2; ++axis) {
          const Complex d = factor * (traces[((j + 1) * p + k) * 2 + axis] +
                                      traces[(j * p + k) * 2 + axis]);
          const double grad = 2.0 * std::real(std::conj(overlap) * d) * norm;
          result.gradient.values()[(j * p + k) * 2 + axis] += weight * grad;
        }
      }
    }
  }
  return result;
}

GradientField grape_gradient(const ControlPulse& pulse, const Unitary& target,
                             const PropagatorPlan& plan, Backend backend) {
  return fidelity_and_gradient(pulse, target.matrix(), plan, backend).gradient;
}

double ensemble_fidelity(const ControlPulse& pulse, const DenseMatrix& target,
                         const PropagatorPlan& plan, Backend backend,
                         std::span<const double> scalings) {
  const auto members = effective_scalings(scalings);
  Workspace ws(plan.dim());
  DenseMatrix v(plan.dim());
  double sum = 0.0;
  if (backend == Backend::Suzuki && members.size() > 1) {
    std::vector<DenseMatrix> outs;
    robustness_ensemble_into(pulse, plan, members, outs, ws);
    for (const auto& u : outs) sum += fidelity(target, u).phi;
    return sum / static_cast<double>(members.size());
  }
  for (double s : members) {
    total_propagator_into(pulse, backend, plan, v, ws, s);
    sum += fidelity(target, v).phi;
  }
  return sum / static_cast<double>(members.size());
}

GradientField finite_diff_gradient(const ControlPulse& pulse, const Unitary& target,
                                   const PropagatorPlan& plan, Backend backend, double h,
                                   std::span<const double> scalings) {
  if (!(h > 0.0)) throw PreconditionError("finite_diff_gradient: h must be > 0");
  GradientField out(pulse.steps(), pulse.channels());
  ControlPulse probe = pulse;
  auto values = probe.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double original = values[i];
    values[i] = original + h;
    const double up = ensemble_fidelity(probe, target.matrix(), plan, backend, scalings);
    values[i] = original - h;
    const double down = ensemble_fidelity(probe, target.matrix(), plan, backend, scalings);
    values[i] = original;
    out.values()[i] = (up - down) / (2.0 * h);
  }
  return out;
}

}  // namespace pulseforge
