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

#include "pulseforge/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "pulseforge/errors.hpp"
#include "pulseforge/gates.hpp"
#include "pulseforge/io.hpp"

namespace pulseforge {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool to_double(const std::string& s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool to_size(const std::string& s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class Parser {
 public:
  Parser(std::string source, std::filesystem::path base)
      : source_(std::move(source)), base_(std::move(base)) {}

  RunConfig run(std::istream& is) {
    RunConfig cfg;
    cfg.source = source_;
    std::string raw;
    bool have_model = false;
    CouplingModel model = CouplingModel::Weak;
    while (std::getline(is, raw)) {
      ++line_;
      std::string text = trim(raw.substr(0, raw.find('#')));
      if (text.empty()) continue;
      if (text.front() == '[') {
        if (text.back() != ']') fail("unterminated section header");
        section_ = trim(std::string_view(text).substr(1, text.size() - 2));
        if (section_ != "system" && section_ != "pulse" && section_ != "optimizer") {
          fail("unknown section [" + section_ + "]");
        }
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) fail("expected key = value");
      const std::string key = trim(std::string_view(text).substr(0, eq));
      const std::string value = trim(std::string_view(text).substr(eq + 1));
      if (key.empty()) fail("empty key");
      if (section_.empty()) fail("key '" + key + "' outside any section");
      if (value.empty()) fail("empty value for '" + key + "'");

      if (section_ == "system") {
        system_key(key, value, have_model, model);
      } else if (section_ == "pulse") {
        pulse_key(cfg, key, value);
      } else {
        optimizer_key(cfg, key, value);
      }
    }
    if (spins_ == 0) throw ParseError(source_, line_, "no spins declared in [system]");
    if (cfg.steps == 0) throw ParseError(source_, line_, "steps (n >= 1) required in [pulse]");
    if (!(cfg.dt > 0.0)) throw ParseError(source_, line_, "dt > 0 required in [pulse]");
    builder_.model(model);
    try {
      cfg.system = builder_.build();
    } catch (const Error& e) {
      throw ParseError(source_, line_, e.what());
    }
    if (!cfg.offsets_hz.empty()) {
      try {
        cfg.optimizer.offsets = offsets_to_rad(cfg.offsets_hz, cfg.system.channels().size());
      } catch (const Error& e) {
        throw ParseError(source_, offsets_line_, e.what());
      }
    }
    if (cfg.target.empty() && !cfg.target_file) cfg.target = "identity";
    return cfg;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

  double number(const std::string& key, const std::string& value) const {
    double v = 0.0;
    if (!to_double(value, v)) fail("bad number for '" + key + "': " + value);
    return v;
  }

  std::size_t count(const std::string& key, const std::string& value) const {
    std::size_t v = 0;
    if (!to_size(value, v)) fail("bad integer for '" + key + "': " + value);
    return v;
  }

  std::filesystem::path path(const std::string& value) const {
    std::filesystem::path p(value);
    return p.is_absolute() || base_.empty() ? p : base_ / p;
  }

  void system_key(const std::string& key, const std::string& value, bool& have_model,
                  CouplingModel& model) {
    const auto words = split_words(value);
    try {
      if (key == "spin") {
        if (words.size() != 3) fail("spin = LABEL SPECIES OFFSET_HZ");
        builder_.add_spin(words[0], words[1], number(key, words[2]));
        ++spins_;
      } else if (key == "coupling" || key == "dipolar") {
        if (words.size() != 3) fail(key + " = SPIN SPIN HZ");
        const double hz = number(key, words[2]);
        if (key == "coupling") {
          builder_.add_coupling(words[0], words[1], hz);
        } else {
          builder_.add_dipolar(words[0], words[1], hz);
        }
      } else if (key == "channel") {
        if (words.size() != 1) fail("channel = SPECIES");
        builder_.add_channel(words[0]);
      } else if (key == "coupling_model") {
        if (have_model) fail("coupling_model given twice");
        if (value == "weak") {
          model = CouplingModel::Weak;
        } else if (value == "strong") {
          model = CouplingModel::Strong;
        } else {
          fail("coupling_model must be weak or strong");
        }
        have_model = true;
      } else {
        fail("unknown key '" + key + "' in [system]");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  void pulse_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "steps") {
      cfg.steps = count(key, value);
      if (cfg.steps == 0) fail("n >= 1 required");
    } else if (key == "dt") {
      cfg.dt = number(key, value);
      if (!(cfg.dt > 0.0)) fail("dt must be > 0");
    } else if (key == "file") {
      cfg.pulse_file = path(value);
    } else {
      fail("unknown key '" + key + "' in [pulse]");
    }
  }

  void optimizer_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    OptimizerConfig& o = cfg.optimizer;
    if (key == "target") {
      cfg.target = value;
    } else if (key == "target_file") {
      cfg.target_file = path(value);
    } else if (key == "max_iterations") {
      o.max_iterations = count(key, value);
    } else if (key == "target_fidelity") {
      o.target_fidelity = number(key, value);
      if (!(o.target_fidelity > 0.0 && o.target_fidelity <= 1.0)) fail("target_fidelity must lie in (0, 1]");
    } else if (key == "amplitude_max_hz") {
      o.amplitude_max = kTwoPi * number(key, value);
      if (!(o.amplitude_max > 0.0)) fail("amplitude_max_hz must be > 0");
    } else if (key == "backend") {
      const auto policy = parse_policy(value);
      if (!policy) fail("unknown backend policy '" + value + "'");
      o.policy = *policy;
    } else if (key == "hybrid_threshold") {
      o.hybrid_threshold = number(key, value);
      if (!(o.hybrid_threshold > 0.0 && o.hybrid_threshold < 1.0)) fail("hybrid_threshold must lie in (0, 1)");
    } else if (key == "initial_step") {
      o.initial_step = number(key, value);
      if (!(o.initial_step > 0.0)) fail("initial_step must be > 0");
    } else if (key == "offsets_hz") {
      try {
        cfg.offsets_hz = parse_offset_lists(value);
      } catch (const Error& e) {
        fail(e.what());
      }
      offsets_line_ = line_;
    } else if (key == "scalings") {
      try {
        o.scalings = parse_number_list(value);
      } catch (const Error& e) {
        fail(e.what());
      }
      for (double s : o.scalings) {
        if (!(s > 0.0)) fail("scalings must be positive");
      }
    } else if (key == "seed") {
      std::size_t seed = 0;
      if (!to_size(value, seed)) fail("bad seed: " + value);
      o.seed = seed;
    } else if (key == "exact_sample_every") {
      o.exact_sample_every = count(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = path(value);
    } else {
      fail("unknown key '" + key + "' in [optimizer]");
    }
  }

  std::string source_;
  std::filesystem::path base_;
  std::size_t line_ = 0;
  std::size_t offsets_line_ = 0;
  std::string section_;
  SpinSystemBuilder builder_;
  std::size_t spins_ = 0;
};

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::vector<double> out;
  for (const auto& w : split_words(spaced)) {
    double v = 0.0;
    if (!to_double(w, v)) throw PreconditionError("bad number '" + w + "'");
    out.push_back(v);
  }
  if (out.empty()) throw PreconditionError("empty number list");
  return out;
}

std::vector<std::vector<double>> parse_offset_lists(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t stop = std::min(text.find(';', start), text.size());
    out.push_back(parse_number_list(text.substr(start, stop - start)));
    start = stop + 1;
  }
  return out;
}

std::vector<std::vector<double>> offsets_to_rad(const std::vector<std::vector<double>>& hz,
                                                std::size_t channels) {
  if (hz.empty()) return {};
  if (hz.size() != 1 && hz.size() != channels) {
    throw PreconditionError("offset lists: give one list or one per channel (" +
                            std::to_string(channels) + ")");
  }
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < channels; ++k) {
    const auto& list = hz.size() == 1 ? hz.front() : hz[k];
    std::vector<double> rad;
    for (double v : list) rad.push_back(kTwoPi * v);
    out.push_back(std::move(rad));
  }
  return out;
}

RunConfig parse_config(std::istream& is, const std::string& source,
                       const std::filesystem::path& base) {
  return Parser(source, base).run(is);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in, path.string(), path.parent_path());
}

DenseMatrix resolve_target(const RunConfig& config) {
  if (config.target_file) {
    DenseMatrix m = load_matrix(*config.target_file);
    if (m.dim() != config.system.dim()) {
      throw DimensionError("target matrix dimension " + std::to_string(m.dim()) +
                           " does not match the system (" + std::to_string(config.system.dim()) + ")");
    }
    return m;
  }
  return parse_gate_expression(config.system, config.target, config.duration());
}

}  // namespace pulseforge
