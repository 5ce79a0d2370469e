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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulseforge/linalg.hpp"

namespace pulseforge {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Axis { X, Y, Z };
enum class CouplingModel { Weak, Strong };

struct Spin {
  std::string label;
  std::string species;
  double offset = 0.0;  // rad/s, relative to the rotating frame
};

// Pairwise interaction between spins a and b (0-based, a != b), rad/s.
struct Coupling {
  std::size_t a = 0;
  std::size_t b = 0;
  double strength = 0.0;
};

// One RF channel: an (x, y) control pair addressing every spin of a species.
struct ControlChannel {
  std::string species;
};

// q spin-1/2 nuclei with Hilbert dimension 2^q.
//
// Basis ordering: spin 0 is the most significant qubit (leftmost tensor
// factor); bit value 0 is spin-up (I^z = +1/2). Pulse and matrix files
// depend on this ordering.
//
// Couplings follow the coupling model for spins of the same species (weak:
// w I^z I^z, strong: w I.I). Couplings between different species are always
// the secular w I^z I^z form. Dipolar terms, when given, use the axially
// symmetric pattern d (I^z I^z - (I^x I^x + I^y I^y) / 2) in the strong model
// and d I^z I^z otherwise.
class SpinSystem {
 public:
  SpinSystem(std::vector<Spin> spins, std::vector<Coupling> couplings, CouplingModel model,
             std::vector<Coupling> dipolar = {}, std::vector<ControlChannel> channels = {});

  // Convenience for a single-species system; offsets and couplings in rad/s.
  static SpinSystem homonuclear(const std::vector<double>& offsets,
                                std::vector<Coupling> couplings = {},
                                CouplingModel model = CouplingModel::Weak);

  std::size_t size() const noexcept { return spins_.size(); }
  std::size_t dim() const noexcept { return std::size_t{1} << spins_.size(); }

  const std::vector<Spin>& spins() const noexcept { return spins_; }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
  const std::vector<Coupling>& dipolar() const noexcept { return dipolar_; }
  const std::vector<ControlChannel>& channels() const noexcept { return channels_; }
  CouplingModel model() const noexcept { return model_; }

  // Indices of the spins belonging to a species; throws PreconditionError
  // when none match.
  std::vector<std::size_t> spins_of(std::string_view species) const;
  std::optional<std::size_t> find_spin(std::string_view label) const;

 private:
  std::vector<Spin> spins_;
  std::vector<Coupling> couplings_;
  std::vector<Coupling> dipolar_;
  CouplingModel model_;
  std::vector<ControlChannel> channels_;
};

// Builds a SpinSystem from NMR-style inputs: frequencies in Hz, spins
// referenced by label. Conversion to rad/s happens here.
class SpinSystemBuilder {
 public:
  SpinSystemBuilder& add_spin(std::string label, std::string species, double offset_hz);
  SpinSystemBuilder& add_coupling(std::string_view a, std::string_view b, double j_hz);
  SpinSystemBuilder& add_dipolar(std::string_view a, std::string_view b, double d_hz);
  SpinSystemBuilder& add_channel(std::string species);
  SpinSystemBuilder& model(CouplingModel m);

  SpinSystem build() const;

 private:
  std::size_t index_of(std::string_view label) const;

  std::vector<Spin> spins_;
  std::vector<Coupling> couplings_;
  std::vector<Coupling> dipolar_;
  std::vector<ControlChannel> channels_;
  CouplingModel model_ = CouplingModel::Weak;
};

// (1/2) sigma_axis on spin r (0-based), identity elsewhere.
DenseMatrix single_spin_op(const SpinSystem& system, std::size_t r, Axis axis);

// F^axis summed over all spins, or over one species.
DenseMatrix total_spin_op(const SpinSystem& system, Axis axis,
                          std::optional<std::string_view> species = std::nullopt);

// Background Hamiltonian H0 (rad/s).
DenseMatrix build_h0(const SpinSystem& system);

// q-fold tensor power of the 2x2 Hadamard; maps F^x to F^z by conjugation.
DenseMatrix hadamard_basis(std::size_t q);

// Diagonal of F^z (optionally restricted to one species), O(N q).
std::vector<double> fz_spectrum(const SpinSystem& system,
                                std::optional<std::string_view> species = std::nullopt);

}  // namespace pulseforge
