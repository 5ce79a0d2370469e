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

#include "pulseforge/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "pulseforge/bench.hpp"
#include "pulseforge/config.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/fidelity.hpp"
#include "pulseforge/io.hpp"
#include "pulseforge/optimizer.hpp"
#include "pulseforge/verify.hpp"

namespace pulseforge {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

RunConfig require_config(const CommandOptions& options) {
  if (!options.config) throw Error("--config is required");
  return load_config(*options.config);
}

std::filesystem::path output_dir(const CommandOptions& options, const RunConfig* config) {
  std::filesystem::path dir = options.out ? *options.out : config ? config->output_dir : ".";
  std::filesystem::create_directories(dir);
  return dir;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

std::vector<std::string> split_backends(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ControlPulse initial_pulse(const RunConfig& cfg, const CommandOptions& options) {
  std::optional<std::filesystem::path> file = options.pulse ? options.pulse : cfg.pulse_file;
  if (file) {
    ControlPulse p = load_pulse(*file);
    if (p.channels() != cfg.system.channels().size()) {
      throw DimensionError(file->string() + ": pulse has " + std::to_string(p.channels()) +
                           " channels, system has " + std::to_string(cfg.system.channels().size()));
    }
    return p;
  }
  return random_initial_pulse(cfg.steps, cfg.system.channels().size(), cfg.dt,
                              cfg.optimizer.amplitude_max, cfg.optimizer.seed);
}

void write_iterations(std::ostream& os, const OptimizationReport& report) {
  os << "iter,phi_backend,phi_exact_sampled,backend,wall_ms,expm_count,matmul_count\n";
  for (const auto& r : report.iterations) {
    os << r.iter << ',' << format_number(r.phi_backend) << ','
       << (r.phi_exact ? format_number(*r.phi_exact) : std::string()) << ',' << to_string(r.backend)
       << ',' << fmt("%.3f", r.wall_ms) << ',' << r.ops.expm << ',' << r.ops.gemm << '\n';
  }
}

void write_summary(std::ostream& os, const RunConfig& cfg, const OptimizationReport& report) {
  double wall = 0.0;
  std::uint64_t expm = 0, gemm = 0;
  for (const auto& r : report.iterations) {
    wall += r.wall_ms;
    expm += r.ops.expm;
    gemm += r.ops.gemm;
  }
  os << "termination = " << to_string(report.termination) << '\n'
     << "iterations = " << report.iteration_count() << '\n'
     << "policy = " << to_string(cfg.optimizer.policy) << '\n'
     << "phi_backend = " << format_number(report.final_phi_backend) << '\n'
     << "phi_exact = " << format_number(report.final_phi_exact) << '\n'
     << "phi_difference = " << fmt("%.3e", std::abs(report.final_phi_backend - report.final_phi_exact))
     << '\n'
     << "wall_ms = " << fmt("%.1f", wall) << '\n'
     << "expm_count = " << expm << '\n'
     << "matmul_count = " << gemm << '\n';
  if (report.switched_at) os << "switched_to_exact_at = " << *report.switched_at << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace

int cmd_optimize(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = require_config(options);
    if (options.backend) {
      const auto policy = parse_policy(*options.backend);
      if (!policy) throw Error("unknown backend policy '" + *options.backend + "'");
      cfg.optimizer.policy = *policy;
    }
    if (options.offsets) {
      cfg.offsets_hz = parse_offset_lists(*options.offsets);
      cfg.optimizer.offsets = offsets_to_rad(cfg.offsets_hz, cfg.system.channels().size());
    }
    if (options.seed) cfg.optimizer.seed = *options.seed;
    if (!(cfg.optimizer.amplitude_max > 0.0)) throw Error("amplitude_max_hz is required in [optimizer]");

    const ControlPulse start = initial_pulse(cfg, options);
    const Unitary target(resolve_target(cfg));
    if (!target.is_unitary(1e-8)) throw Error("target is not unitary");
    const auto dir = output_dir(options, &cfg);

    const OptimizationResult result = optimize(cfg.system, target, start, cfg.optimizer);

    save_pulse(dir / "pulse.txt", result.pulse);
    {
      auto os = open_out(dir / "iterations.csv");
      write_iterations(os, result.report);
    }
    {
      auto os = open_out(dir / "summary.txt");
      write_summary(os, cfg, result.report);
    }
    write_summary(out, cfg, result.report);
    return result.report.termination == Termination::TargetReached ? kExitOk : kExitNotReached;
  });
}

int cmd_propagate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = require_config(options);
    std::optional<std::filesystem::path> file = options.pulse ? options.pulse : cfg.pulse_file;
    if (!file) throw Error("propagate needs a pulse (--pulse or [pulse] file)");
    const ControlPulse pulse = load_pulse(*file);
    if (pulse.channels() != cfg.system.channels().size()) {
      throw DimensionError("pulse channel count differs from the system");
    }
    std::vector<Backend> backends;
    for (const auto& name : split_backends(options.backend.value_or("suzuki"))) {
      const auto b = parse_backend(name);
      if (!b) throw Error("unknown backend '" + name + "'");
      backends.push_back(*b);
    }
    if (backends.empty() || backends.size() > 2) throw Error("give one or two backends");

    const std::size_t p = cfg.system.channels().size();
    std::vector<std::vector<double>> offsets;
    if (options.offsets) {
      offsets = offsets_to_rad(parse_offset_lists(*options.offsets), p);
    } else if (!cfg.optimizer.offsets.empty()) {
      offsets = cfg.optimizer.offsets;
    } else {
      for (std::size_t k = 0; k < p; ++k) {
        double peak = 0.0;
        for (std::size_t j = 0; j < pulse.steps(); ++j) peak = std::max(peak, pulse.amplitude(j, k));
        offsets.push_back({0.5 * peak});
      }
    }

    auto model = std::make_shared<const SystemModel>(cfg.system);
    const auto dir = output_dir(options, &cfg);
    const std::vector<double> scalings =
        cfg.optimizer.scalings.empty() ? std::vector<double>{1.0} : cfg.optimizer.scalings;

    std::vector<std::vector<DenseMatrix>> results;
    for (Backend b : backends) {
      const PropagatorPlan plan = b == Backend::Exact     ? PropagatorPlan::exact_only(model, pulse.dt())
                                  : b == Backend::Trotter ? build_plan(model, pulse.dt())
                                                          : build_plan(model, pulse.dt(), offsets);
      // Ensemble members are independent; split them across workers.
      std::vector<DenseMatrix> mats(scalings.size(), DenseMatrix(model->dim));
      const std::size_t workers = std::max<std::size_t>(1, std::min(options.jobs, scalings.size()));
      auto work = [&](std::size_t w) {
        Workspace ws(model->dim);
        for (std::size_t s = w; s < scalings.size(); s += workers) {
          total_propagator_into(pulse, b, plan, mats[s], ws, scalings[s]);
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
      }
      for (std::size_t s = 0; s < scalings.size(); ++s) {
        std::string name = "propagator_" + std::string(to_string(b));
        if (scalings.size() > 1) name += "_s" + std::to_string(s);
        save_matrix(dir / (name + ".txt"), mats[s]);
        out << "wrote " << (dir / (name + ".txt")).string() << '\n';
      }
      results.push_back(std::move(mats));
    }
    if (results.size() == 2) {
      for (std::size_t s = 0; s < scalings.size(); ++s) {
        out << "infidelity " << to_string(backends[0]) << ' ' << to_string(backends[1]);
        if (scalings.size() > 1) out << " scaling " << format_number(scalings[s]);
        out << " = " << fmt("%.6e", infidelity(results[0][s], results[1][s])) << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    VerifyOptions vo;
    vo.tol_scale = options.tol_scale;
    if (options.config) vo.system = load_config(*options.config).system;
    bool all = true;
    for (const auto& c : run_verification(vo)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %-26s value=%.6g range=[%.6g, %.6g]\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.lo, c.hi);
      out << buf;
      all = all && c.pass;
    }
    return all ? kExitOk : kExitNotReached;
  });
}

int cmd_bench(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    BenchOptions bo;
    bo.q_min = options.q_min;
    bo.q_max = options.q_max;
    bo.steps = options.steps;
    bo.repetitions = options.repetitions;
    if (options.seed) bo.seed = *options.seed;
    const auto rows = run_benchmark(bo);
    write_bench_table(out, rows);
    if (options.out) {
      std::filesystem::create_directories(*options.out);
      auto os = open_out(*options.out / "bench.csv");
      write_bench_table(os, rows);
    }
    return kExitOk;
  });
}

}  // namespace pulseforge
