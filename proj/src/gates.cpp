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

#include "pulseforge/gates.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {

void check_spin(const SpinSystem& system, std::size_t spin) {
  if (spin >= system.size()) throw IndexError("gate: spin index out of range");
}

bool bit_of(const SpinSystem& system, std::size_t state, std::size_t spin) {
  return (state >> (system.size() - 1 - spin)) & 1u;
}

std::size_t resolve_spin(const SpinSystem& system, const std::string& token) {
  if (auto found = system.find_spin(token)) return *found;
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
  if (ec == std::errc() && ptr == token.data() + token.size() && index >= 1 &&
      index <= system.size()) {
    return index - 1;
  }
  throw PreconditionError("unknown spin '" + token + "'");
}

double parse_degrees(const std::string& token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw PreconditionError("bad angle '" + token + "'");
  }
  return v * std::numbers::pi / 180.0;
}

DenseMatrix single_gate(const SpinSystem& system, const std::vector<std::string>& words,
                        double duration) {
  const std::string& name = words.front();
  auto want = [&](std::size_t count) {
    if (words.size() != count + 1) {
      throw PreconditionError("gate '" + name + "' expects " + std::to_string(count) + " arguments");
    }
  };
  if (name == "identity") {
    want(0);
    return gate_identity(system);
  }
  if (name == "free") {
    want(0);
    return gate_free_evolution(system, duration);
  }
  if (name == "rx" || name == "ry" || name == "rz") {
    want(2);
    const Axis axis = name == "rx" ? Axis::X : name == "ry" ? Axis::Y : Axis::Z;
    return gate_rotation(system, resolve_spin(system, words[2]), axis, parse_degrees(words[1]));
  }
  if (name == "hadamard") {
    want(1);
    return gate_hadamard(system, resolve_spin(system, words[1]));
  }
  if (name == "cphase") {
    want(3);
    return gate_controlled_phase(system, resolve_spin(system, words[2]),
                                 resolve_spin(system, words[3]), parse_degrees(words[1]));
  }
  throw PreconditionError("unknown gate '" + name + "'");
}

}  // namespace

DenseMatrix gate_identity(const SpinSystem& system) { return DenseMatrix::identity(system.dim()); }

DenseMatrix gate_rotation(const SpinSystem& system, std::size_t spin, Axis axis, double angle) {
  check_spin(system, spin);
  // exp(-i t I) = cos(t/2) 1 - 2 i sin(t/2) I  since (2I)^2 = 1
  DenseMatrix out = single_spin_op(system, spin, axis);
  out *= Complex(0.0, -2.0 * std::sin(0.5 * angle));
  const double c = std::cos(0.5 * angle);
  for (std::size_t k = 0; k < out.dim(); ++k) out(k, k) += c;
  return out;
}

DenseMatrix gate_hadamard(const SpinSystem& system, std::size_t spin) {
  check_spin(system, spin);
  DenseMatrix out = single_spin_op(system, spin, Axis::X);
  out += single_spin_op(system, spin, Axis::Z);
  out *= Complex(std::numbers::sqrt2, 0.0);
  return out;
}

DenseMatrix gate_controlled_phase(const SpinSystem& system, std::size_t a, std::size_t b,
                                  double angle) {
  check_spin(system, a);
  check_spin(system, b);
  if (a == b) throw PreconditionError("cphase: spins must differ");
  DenseMatrix out = DenseMatrix::identity(system.dim());
  const Complex phase = std::polar(1.0, angle);
  for (std::size_t s = 0; s < system.dim(); ++s) {
    if (bit_of(system, s, a) && bit_of(system, s, b)) out(s, s) = phase;
  }
  return out;
}

DenseMatrix gate_free_evolution(const SpinSystem& system, double duration) {
  if (!std::isfinite(duration)) throw PreconditionError("free evolution: bad duration");
  DenseMatrix h = build_h0(system);
  h *= Complex(0.0, -duration);
  return expm(h);
}

DenseMatrix parse_gate_expression(const SpinSystem& system, std::string_view text,
                                  double duration) {
  DenseMatrix total = gate_identity(system);
  std::size_t gates = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t stop = std::min(text.find(';', start), text.size());
    std::istringstream words_in{std::string(text.substr(start, stop - start))};
    std::vector<std::string> words;
    for (std::string w; words_in >> w;) words.push_back(w);
    if (!words.empty()) {
      total = multiply(single_gate(system, words, duration), total);
      ++gates;
    }
    start = stop + 1;
  }
  if (gates == 0) throw PreconditionError("empty gate expression");
  return total;
}

}  // namespace pulseforge
