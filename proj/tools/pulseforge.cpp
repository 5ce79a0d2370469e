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

#include <iostream>

#include "CLI11.hpp"
#include "pulseforge/commands.hpp"

int main(int argc, char** argv) {
  using namespace pulseforge;
  CLI::App app{"pulseforge: GRAPE pulse design with fast propagators"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::string config, out, pulse, backend, offsets;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run config file");
    sub->add_option("--backend", backend, "exact|trotter|suzuki, or an optimizer policy");
    sub->add_option("--offsets", offsets, "offsets in Hz, e.g. \"1250,3750\"");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--jobs", opt.jobs, "worker threads for ensemble members")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--pulse", pulse, "pulse file");
  };

  auto* optimize = app.add_subcommand("optimize", "run gradient ascent");
  common(optimize);
  auto* propagate = app.add_subcommand("propagate", "total propagator of a pulse");
  common(propagate);
  auto* verify = app.add_subcommand("verify", "accuracy self-checks");
  common(verify);
  verify->add_option("--tol-scale", opt.tol_scale, "multiply every tolerance");
  auto* bench = app.add_subcommand("bench", "exact vs suzuki timings");
  common(bench);
  bench->add_option("--reps", opt.repetitions, "timed repetitions (>= 5)");
  bench->add_option("--steps", opt.steps, "steps per pulse");
  bench->add_option("--q-min", opt.q_min, "smallest spin count");
  bench->add_option("--q-max", opt.q_max, "largest spin count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  auto* sub = app.get_subcommands().front();
  if (!config.empty()) opt.config = config;
  if (!out.empty()) opt.out = out;
  if (!pulse.empty()) opt.pulse = pulse;
  if (!backend.empty()) opt.backend = backend;
  if (!offsets.empty()) opt.offsets = offsets;
  if (sub->count("--seed") > 0) opt.seed = seed;

  if (sub == optimize) return cmd_optimize(opt, std::cout, std::cerr);
  if (sub == propagate) return cmd_propagate(opt, std::cout, std::cerr);
  if (sub == verify) return cmd_verify(opt, std::cout, std::cerr);
  return cmd_bench(opt, std::cout, std::cerr);
}
