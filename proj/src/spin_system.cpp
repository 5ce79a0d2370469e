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

#include "pulseforge/spin_system.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <utility>

#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {

constexpr std::size_t kMaxSpins = 12;

std::size_t bit_of(std::size_t q, std::size_t r) { return std::size_t{1} << (q - 1 - r); }

// +1/2 for spin-up, -1/2 for spin-down.
double m_z(std::size_t state, std::size_t mask) { return (state & mask) ? -0.5 : 0.5; }

void validate_pairs(const std::vector<Coupling>& pairs, std::size_t q, const char* what) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& c : pairs) {
    if (c.a >= q || c.b >= q) throw IndexError(std::string(what) + ": spin index out of range");
    if (c.a == c.b) throw PreconditionError(std::string(what) + ": a spin cannot couple to itself");
    if (!std::isfinite(c.strength)) throw NumericError(std::string(what) + ": non-finite value");
    if (!seen.insert(std::minmax(c.a, c.b)).second) {
      throw PreconditionError(std::string(what) + ": pair declared twice");
    }
  }
}

}  // namespace

SpinSystem::SpinSystem(std::vector<Spin> spins, std::vector<Coupling> couplings,
                       CouplingModel model, std::vector<Coupling> dipolar,
                       std::vector<ControlChannel> channels)
    : spins_(std::move(spins)),
      couplings_(std::move(couplings)),
      dipolar_(std::move(dipolar)),
      model_(model),
      channels_(std::move(channels)) {
  if (spins_.empty()) throw PreconditionError("SpinSystem: need at least one spin");
  if (spins_.size() > kMaxSpins) throw PreconditionError("SpinSystem: too many spins");
  for (const auto& s : spins_) {
    if (!std::isfinite(s.offset)) throw NumericError("SpinSystem: non-finite offset");
  }
  validate_pairs(couplings_, spins_.size(), "coupling");
  validate_pairs(dipolar_, spins_.size(), "dipolar coupling");

  if (channels_.empty()) {
    for (const auto& s : spins_) {
      const bool known = std::any_of(channels_.begin(), channels_.end(),
                                     [&](const ControlChannel& c) { return c.species == s.species; });
      if (!known) channels_.push_back({s.species});
    }
  } else {
    std::set<std::string> declared;
    for (const auto& c : channels_) {
      spins_of(c.species);
      if (!declared.insert(c.species).second) {
        throw PreconditionError("SpinSystem: channel declared twice for species " + c.species);
      }
    }
  }
}

SpinSystem SpinSystem::homonuclear(const std::vector<double>& offsets,
                                   std::vector<Coupling> couplings, CouplingModel model) {
  std::vector<Spin> spins;
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    spins.push_back({"S" + std::to_string(r + 1), "X", offsets[r]});
  }
  return SpinSystem(std::move(spins), std::move(couplings), model);
}

std::vector<std::size_t> SpinSystem::spins_of(std::string_view species) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < spins_.size(); ++r) {
    if (spins_[r].species == species) out.push_back(r);
  }
  if (out.empty()) throw PreconditionError("unknown species '" + std::string(species) + "'");
  return out;
}

std::optional<std::size_t> SpinSystem::find_spin(std::string_view label) const {
  for (std::size_t r = 0; r < spins_.size(); ++r) {
    if (spins_[r].label == label) return r;
  }
  return std::nullopt;
}

// --- builder --------------------------------------------------------------

SpinSystemBuilder& SpinSystemBuilder::add_spin(std::string label, std::string species,
                                               double offset_hz) {
  for (const auto& s : spins_) {
    if (s.label == label) throw PreconditionError("duplicate spin label '" + label + "'");
  }
  spins_.push_back({std::move(label), std::move(species), kTwoPi * offset_hz});
  return *this;
}

SpinSystemBuilder& SpinSystemBuilder::add_coupling(std::string_view a, std::string_view b,
                                                   double j_hz) {
  couplings_.push_back({index_of(a), index_of(b), kTwoPi * j_hz});
  return *this;
}

SpinSystemBuilder& SpinSystemBuilder::add_dipolar(std::string_view a, std::string_view b,
                                                  double d_hz) {
  dipolar_.push_back({index_of(a), index_of(b), kTwoPi * d_hz});
  return *this;
}

SpinSystemBuilder& SpinSystemBuilder::add_channel(std::string species) {
  channels_.push_back({std::move(species)});
  return *this;
}

SpinSystemBuilder& SpinSystemBuilder::model(CouplingModel m) {
  model_ = m;
  return *this;
}

SpinSystem SpinSystemBuilder::build() const {
  return SpinSystem(spins_, couplings_, model_, dipolar_, channels_);
}

std::size_t SpinSystemBuilder::index_of(std::string_view label) const {
  for (std::size_t r = 0; r < spins_.size(); ++r) {
    if (spins_[r].label == label) return r;
  }
  throw PreconditionError("unknown spin label '" + std::string(label) + "'");
}

// --- operators ------------------------------------------------------------

DenseMatrix single_spin_op(const SpinSystem& system, std::size_t r, Axis axis) {
  const std::size_t q = system.size();
  if (r >= q) throw IndexError("single_spin_op: spin index out of range");
  const std::size_t n = system.dim();
  const std::size_t mask = bit_of(q, r);
  DenseMatrix out(n);
  for (std::size_t b = 0; b < n; ++b) {
    switch (axis) {
      case Axis::Z: out(b, b) = m_z(b, mask); break;
      case Axis::X: out(b, b ^ mask) = 0.5; break;
      case Axis::Y:
        // <up|sigma_y|down> = -i, <down|sigma_y|up> = +i
        out(b, b ^ mask) = (b & mask) ? Complex(0.0, 0.5) : Complex(0.0, -0.5);
        break;
    }
  }
  return out;
}

DenseMatrix total_spin_op(const SpinSystem& system, Axis axis,
                          std::optional<std::string_view> species) {
  DenseMatrix out(system.dim());
  std::vector<std::size_t> selected;
  if (species) {
    selected = system.spins_of(*species);
  } else {
    for (std::size_t r = 0; r < system.size(); ++r) selected.push_back(r);
  }
  for (std::size_t r : selected) out += single_spin_op(system, r, axis);
  return out;
}

DenseMatrix build_h0(const SpinSystem& system) {
  const std::size_t q = system.size();
  const std::size_t n = system.dim();
  const auto& spins = system.spins();
  DenseMatrix h(n);

  for (std::size_t b = 0; b < n; ++b) {
    double diag = 0.0;
    for (std::size_t r = 0; r < q; ++r) diag += spins[r].offset * m_z(b, bit_of(q, r));
    h(b, b) = diag;
  }

  // w * (zz_weight I^z I^z + flip_weight (I^x I^x + I^y I^y)); the transverse
  // part is (I+I- + I-I+)/2 and only connects states with opposite spins.
  auto add_pair = [&](const Coupling& c, double zz_weight, double flip_weight) {
    const std::size_t ma = bit_of(q, c.a);
    const std::size_t mb = bit_of(q, c.b);
    const bool secular = spins[c.a].species != spins[c.b].species;
    for (std::size_t b = 0; b < n; ++b) {
      h(b, b) += c.strength * zz_weight * m_z(b, ma) * m_z(b, mb);
      if (!secular && flip_weight != 0.0 && ((b & ma) != 0) != ((b & mb) != 0)) {
        h(b, b ^ ma ^ mb) += c.strength * flip_weight * 0.5;
      }
    }
  };

  const bool strong = system.model() == CouplingModel::Strong;
  for (const auto& c : system.couplings()) add_pair(c, 1.0, strong ? 1.0 : 0.0);
  for (const auto& c : system.dipolar()) add_pair(c, 1.0, strong ? -0.5 : 0.0);
  return h;
}

DenseMatrix hadamard_basis(std::size_t q) {
  if (q == 0) throw PreconditionError("hadamard_basis: q must be >= 1");
  if (q > kMaxSpins) throw PreconditionError("hadamard_basis: q too large");
  const std::size_t n = std::size_t{1} << q;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  DenseMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) = (std::popcount(r & c) % 2 == 0) ? scale : -scale;
    }
  }
  return out;
}

std::vector<double> fz_spectrum(const SpinSystem& system, std::optional<std::string_view> species) {
  const std::size_t q = system.size();
  std::vector<std::size_t> selected;
  if (species) {
    selected = system.spins_of(*species);
  } else {
    for (std::size_t r = 0; r < q; ++r) selected.push_back(r);
  }
  std::vector<double> out(system.dim(), 0.0);
  for (std::size_t b = 0; b < out.size(); ++b) {
    for (std::size_t r : selected) out[b] += m_z(b, bit_of(q, r));
  }
  return out;
}

}  // namespace pulseforge
