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

#include "pulseforge/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <utility>

#include "pulseforge/errors.hpp"

namespace pulseforge {

std::string_view to_string(BackendPolicy policy) noexcept {
  switch (policy) {
    case BackendPolicy::Exact: return "exact";
    case BackendPolicy::SuzukiFixedOffset: return "suzuki_fixed_offset";
    case BackendPolicy::SuzukiMeanOffset: return "suzuki_mean_offset";
    case BackendPolicy::SuzukiTwoOffset: return "suzuki_two_offset";
    case BackendPolicy::Hybrid: return "hybrid";
  }
  return "unknown";
}

std::optional<BackendPolicy> parse_policy(std::string_view name) noexcept {
  for (auto p : {BackendPolicy::Exact, BackendPolicy::SuzukiFixedOffset,
                 BackendPolicy::SuzukiMeanOffset, BackendPolicy::SuzukiTwoOffset,
                 BackendPolicy::Hybrid}) {
    if (to_string(p) == name) return p;
  }
  if (name == "suzuki") return BackendPolicy::SuzukiFixedOffset;
  return std::nullopt;
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::TargetReached: return "target_reached";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::StepUnderflow: return "step_underflow";
  }
  return "unknown";
}

void OptimizerConfig::validate() const {
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0)) {
    throw PreconditionError("target fidelity must lie in (0, 1]");
  }
  if (!(amplitude_max > 0.0) || !std::isfinite(amplitude_max)) {
    throw PreconditionError("amplitude_max must be > 0");
  }
  if (!(hybrid_threshold > 0.0 && hybrid_threshold < 1.0)) {
    throw PreconditionError("hybrid threshold must lie in (0, 1)");
  }
  if (!(initial_step > 0.0)) throw PreconditionError("initial step must be > 0");
  if (!(backoff > 0.0 && backoff < 1.0)) throw PreconditionError("backoff must lie in (0, 1)");
  if (!(growth >= 1.0)) throw PreconditionError("growth must be >= 1");
  for (double s : scalings) {
    if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError("RF scalings must be positive");
  }
}

namespace {

std::vector<std::vector<double>> per_channel(std::size_t channels, const std::vector<double>& list) {
  return std::vector<std::vector<double>>(channels, list);
}

class Session {
 public:
  Session(const SpinSystem& system, const OptimizerConfig& config, double dt)
      : config_(config),
        model_(std::make_shared<const SystemModel>(system)),
        exact_plan_(PropagatorPlan::exact_only(model_, dt)) {
    const std::size_t p = model_->channels();
    switch (config.policy) {
      case BackendPolicy::Exact:
        backend_ = Backend::Exact;
        break;
      case BackendPolicy::SuzukiFixedOffset:
      case BackendPolicy::Hybrid:
        backend_ = Backend::Suzuki;
        plan_ = std::make_unique<PropagatorPlan>(
            model_, dt, config.offsets.empty() ? per_channel(p, {0.5 * config.amplitude_max})
                                               : config.offsets);
        break;
      case BackendPolicy::SuzukiTwoOffset:
        backend_ = Backend::Suzuki;
        plan_ = std::make_unique<PropagatorPlan>(
            model_, dt, config.offsets.empty() ? per_channel(p, two_band_offsets(config.amplitude_max))
                                               : config.offsets);
        break;
      case BackendPolicy::SuzukiMeanOffset:
        backend_ = Backend::Suzuki;
        break;
    }
  }

  Backend backend() const noexcept { return backend_; }

  // Called once per iteration before the gradient; only the mean-offset
  // policy does any work here.
  void prepare(const ControlPulse& pulse) {
    if (config_.policy == BackendPolicy::SuzukiMeanOffset && backend_ == Backend::Suzuki) {
      plan_ = std::make_unique<PropagatorPlan>(mean_offset_plan(pulse, model_));
    }
  }

  void switch_to_exact() { backend_ = Backend::Exact; }

  const PropagatorPlan& plan() const { return backend_ == Backend::Exact ? exact_plan_ : *plan_; }

  FidelityGradient evaluate(const ControlPulse& pulse, const DenseMatrix& target) const {
    return fidelity_and_gradient(pulse, target, plan(), backend_, config_.scalings);
  }

  double probe(const ControlPulse& pulse, const DenseMatrix& target) const {
    return ensemble_fidelity(pulse, target, plan(), backend_, config_.scalings);
  }

  double exact(const ControlPulse& pulse, const DenseMatrix& target) const {
    return ensemble_fidelity(pulse, target, exact_plan_, Backend::Exact, config_.scalings);
  }

 private:
  const OptimizerConfig& config_;
  std::shared_ptr<const SystemModel> model_;
  PropagatorPlan exact_plan_;
  std::unique_ptr<PropagatorPlan> plan_;
  Backend backend_ = Backend::Exact;
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

OptimizationResult optimize(const SpinSystem& system, const Unitary& target,
                            const ControlPulse& initial, const OptimizerConfig& config) {
  config.validate();
  if (target.dim() != system.dim()) throw DimensionError("optimize: target dimension mismatch");
  if (!target.is_unitary(1e-8)) throw PreconditionError("optimize: target is not unitary");
  if (initial.channels() != system.channels().size()) {
    throw DimensionError("optimize: pulse channel count differs from the system");
  }

  // Iteration 0 includes plan construction.
  auto start = std::chrono::steady_clock::now();
  OpCounts before = op_counts();
  Session session(system, config, initial.dt());
  ControlPulse pulse = initial;
  pulse.clip_amplitudes(config.amplitude_max);
  const DenseMatrix& u = target.matrix();

  OptimizationResult result{pulse, {}};
  OptimizationReport& report = result.report;

  auto sample = [&](std::size_t iter, IterationRecord& rec) {
    if (rec.backend == Backend::Exact) {
      rec.phi_exact = rec.phi_backend;
    } else if (config.exact_sample_every > 0 && iter % config.exact_sample_every == 0) {
      const OpCounts saved = op_counts();
      rec.phi_exact = session.exact(pulse, u);
      op_counts() = saved;
    }
  };

  session.prepare(pulse);
  FidelityGradient fg = session.evaluate(pulse, u);
  if (config.policy == BackendPolicy::Hybrid && fg.fidelity.phi >= config.hybrid_threshold) {
    session.switch_to_exact();
    report.switched_at = 0;
    fg = session.evaluate(pulse, u);
  }
  double step = config.initial_step;
  {
    IterationRecord rec;
    rec.iter = 0;
    rec.phi_backend = fg.fidelity.phi;
    rec.backend = session.backend();
    rec.ops = op_counts() - before;
    rec.wall_ms = elapsed_ms(start);
    rec.step = step;
    sample(0, rec);
    report.iterations.push_back(rec);
  }

  Termination termination = Termination::MaxIterations;
  if (fg.fidelity.phi >= config.target_fidelity) termination = Termination::TargetReached;

  for (std::size_t iter = 1; termination == Termination::MaxIterations && iter <= config.max_iterations;
       ++iter) {
    start = std::chrono::steady_clock::now();
    before = op_counts();

    const double gmax = fg.gradient.max_abs();
    if (!(gmax > 0.0)) {
      termination = Termination::StepUnderflow;
      break;
    }

    // Backtracking: shrink until the backend fidelity improves.
    ControlPulse candidate = pulse;
    double phi_new = fg.fidelity.phi;
    std::size_t probes = 0;
    bool accepted = false;
    while (step >= config.min_step * config.initial_step) {
      const double scale = step * config.amplitude_max / gmax;
      auto dst = candidate.values();
      auto src = pulse.values();
      auto grad = fg.gradient.values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] + scale * grad[i];
      candidate.clip_amplitudes(config.amplitude_max);
      phi_new = session.probe(candidate, u);
      ++probes;
      if (phi_new > fg.fidelity.phi) {
        accepted = true;
        break;
      }
      step *= config.backoff;
    }
    if (!accepted) {
      termination = Termination::StepUnderflow;
      break;
    }
    pulse = std::move(candidate);
    const double used = step;
    step *= config.growth;

    session.prepare(pulse);
    fg = session.evaluate(pulse, u);
    if (config.policy == BackendPolicy::Hybrid && session.backend() != Backend::Exact &&
        fg.fidelity.phi >= config.hybrid_threshold) {
      session.switch_to_exact();
      report.switched_at = iter;
      fg = session.evaluate(pulse, u);
    }

    IterationRecord rec;
    rec.iter = iter;
    rec.phi_backend = fg.fidelity.phi;
    rec.backend = session.backend();
    rec.ops = op_counts() - before;
    rec.wall_ms = elapsed_ms(start);
    rec.probes = probes;
    rec.step = used;
    sample(iter, rec);
    report.iterations.push_back(rec);

    if (fg.fidelity.phi >= config.target_fidelity) termination = Termination::TargetReached;
  }

  report.termination = termination;
  report.final_phi_backend = report.iterations.back().phi_backend;
  if (session.backend() == Backend::Exact) {
    report.final_phi_exact = report.final_phi_backend;
  } else {
    const OpCounts saved = op_counts();
    report.final_phi_exact = session.exact(pulse, u);
    op_counts() = saved;
  }
  result.pulse = std::move(pulse);
  return result;
}

}  // namespace pulseforge
