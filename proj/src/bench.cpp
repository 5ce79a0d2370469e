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

#include "pulseforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <ostream>

#include "pulseforge/errors.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/pulse.hpp"

namespace pulseforge {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Keeps the optimiser from discarding results.
volatile double g_sink = 0.0;

double time_steps(Backend backend, const PropagatorPlan& plan, const ControlPulse& pulse,
                  Workspace& ws, DenseMatrix& out) {
  const auto t0 = Clock::now();
  for (std::size_t j = 0; j < pulse.steps(); ++j) step_into(backend, plan, pulse, j, out, ws);
  const double t = seconds_since(t0);
  g_sink = g_sink + out(0, 0).real();
  return t / static_cast<double>(pulse.steps());
}

double time_full_exact(const std::shared_ptr<const SystemModel>& model, const ControlPulse& pulse,
                       Workspace& ws, DenseMatrix& out) {
  const auto t0 = Clock::now();
  const PropagatorPlan plan = PropagatorPlan::exact_only(model, pulse.dt());
  total_propagator_into(pulse, Backend::Exact, plan, out, ws);
  const double t = seconds_since(t0);
  g_sink = g_sink + out(0, 0).real();
  return t;
}

double time_full_suzuki(const std::shared_ptr<const SystemModel>& model, const ControlPulse& pulse,
                        double offset, Workspace& ws, DenseMatrix& out) {
  const auto t0 = Clock::now();
  const PropagatorPlan plan = build_plan(model, pulse.dt(), {{offset}});
  total_propagator_into(pulse, Backend::Suzuki, plan, out, ws);
  const double t = seconds_since(t0);
  g_sink = g_sink + out(0, 0).real();
  return t;
}

}  // namespace

SpinSystem bench_system(std::size_t q) {
  static constexpr double kOffsetsHz[] = {2500.0, -1200.0, -3000.0, 1800.0, -400.0, 3400.0};
  static constexpr double kChainHz[] = {54.0, 35.0, 40.0, 48.0, 38.0};
  if (q < 1 || q > std::size(kOffsetsHz)) throw PreconditionError("bench_system: q out of range");
  std::vector<double> offsets;
  std::vector<Coupling> couplings;
  for (std::size_t i = 0; i < q; ++i) offsets.push_back(kTwoPi * kOffsetsHz[i]);
  for (std::size_t i = 0; i + 1 < q; ++i) couplings.push_back({i, i + 1, kTwoPi * kChainHz[i]});
  return SpinSystem::homonuclear(offsets, couplings);
}

std::vector<BenchRow> run_benchmark(const BenchOptions& options) {
  if (options.repetitions < 5) throw PreconditionError("bench: repetitions must be >= 5");
  if (options.q_min < 1 || options.q_min > options.q_max) throw PreconditionError("bench: bad q range");
  std::vector<BenchRow> rows;
  for (std::size_t q = options.q_min; q <= options.q_max; ++q) {
    auto model = std::make_shared<const SystemModel>(bench_system(q));
    const ControlPulse pulse =
        band_limited_pulse(options.steps, 1, options.dt, options.amplitude_max, 16, options.seed);
    const double offset = 0.5 * options.amplitude_max;
    const PropagatorPlan exact_plan = PropagatorPlan::exact_only(model, options.dt);
    const PropagatorPlan plan = build_plan(model, options.dt, {{offset}});
    Workspace ws(model->dim);
    DenseMatrix out(model->dim);

    std::vector<double> sub_e, sub_s, full_e, full_s;
    for (std::size_t rep = 0; rep <= options.repetitions; ++rep) {
      const double se = time_steps(Backend::Exact, exact_plan, pulse, ws, out);
      const double ss = time_steps(Backend::Suzuki, plan, pulse, ws, out);
      const double fe = time_full_exact(model, pulse, ws, out);
      const double fs = time_full_suzuki(model, pulse, offset, ws, out);
      if (rep == 0) continue;  // warm-up
      sub_e.push_back(se);
      sub_s.push_back(ss);
      full_e.push_back(fe);
      full_s.push_back(fs);
    }
    rows.push_back({q, median(sub_e) * 1e6, median(sub_s) * 1e6, median(full_e) * 1e3,
                    median(full_s) * 1e3});
  }
  return rows;
}

void write_bench_table(std::ostream& os, const std::vector<BenchRow>& rows) {
  char buf[256];
  os << "q,sub_exact_us,sub_suzuki_us,ratio_subprop,full_exact_ms,full_suzuki_ms,ratio_fullprop\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.3f,%.3f,%.2f,%.3f,%.3f,%.2f\n", r.q, r.sub_exact_us,
                  r.sub_suzuki_us, r.ratio_sub(), r.full_exact_ms, r.full_suzuki_ms, r.ratio_full());
    os << buf;
  }
  os << "\nq_suzuki,q_exact,full_suzuki_ms,full_exact_ms,suzuki_faster\n";
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& lo = rows[i];
    const auto& hi = rows[i + 1];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.3f,%.3f,%s\n", hi.q, lo.q, hi.full_suzuki_ms,
                  lo.full_exact_ms, hi.full_suzuki_ms < lo.full_exact_ms ? "yes" : "no");
    os << buf;
  }
}

}  // namespace pulseforge
