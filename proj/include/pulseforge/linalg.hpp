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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pulseforge {

using Complex = std::complex<double>;

// Square, row-major complex matrix. A default-constructed matrix is empty
// (dim 0) and only serves as a placeholder for scratch storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim);
  DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static DenseMatrix identity(std::size_t dim);
  static DenseMatrix diagonal(std::span<const Complex> d);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * dim_ + c];
  }

  Complex* row(std::size_t r) noexcept { return data_.data() + r * dim_; }
  const Complex* row(std::size_t r) const noexcept { return data_.data() + r * dim_; }

  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  // Reshape to dim x dim. Contents are unspecified afterwards unless dim is
  // unchanged.
  void resize(std::size_t dim);
  void set_zero() noexcept;
  void set_identity() noexcept;

  DenseMatrix adjoint() const;

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(Complex s) noexcept;

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(Complex s, DenseMatrix a) { return a *= s; }
  friend DenseMatrix operator*(DenseMatrix a, Complex s) { return a *= s; }

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

// Diagonal matrix stored as its N diagonal entries; never materialized.
class DiagonalVector {
 public:
  DiagonalVector() = default;
  explicit DiagonalVector(std::size_t dim, Complex fill = 1.0) : data_(dim, fill) {}
  explicit DiagonalVector(std::vector<Complex> entries) : data_(std::move(entries)) {}

  std::size_t dim() const noexcept { return data_.size(); }
  void resize(std::size_t dim) { data_.resize(dim); }

  Complex& operator[](std::size_t k) noexcept { return data_[k]; }
  const Complex& operator[](std::size_t k) const noexcept { return data_[k]; }

  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }

 private:
  std::vector<Complex> data_;
};

enum class Side { Left, Right };

// --- general products (counted) -------------------------------------------

// out = a * b. out must not alias a or b.
void multiply_into(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

// --- matrix exponential ---------------------------------------------------

// exp(m) by scaling and squaring with a degree-13 Pade approximant. The
// caller supplies the full exponent, e.g. -i*H*dt.
DenseMatrix expm(const DenseMatrix& m);

// Scratch for expm_into, reusable across calls of the same dimension.
struct ExpmWorkspace {
  DenseMatrix a, a2, a4, a6, tmp, inner, u, v;
};
// out must not alias m.
void expm_into(const DenseMatrix& m, DenseMatrix& out, ExpmWorkspace& ws);

// --- diagonal fast paths --------------------------------------------------

// entries[k] = exp(scale * d[k]); O(N).
DiagonalVector diag_exp(std::span<const double> d, Complex scale);
void diag_exp_into(std::span<const double> d, Complex scale, DiagonalVector& out);

// diag(d) * m (Left) or m * diag(d) (Right) in N^2 multiplies.
DenseMatrix diag_mul(const DiagonalVector& d, const DenseMatrix& m, Side side);
// In-place variant; out may alias m.
void diag_mul_into(const DiagonalVector& d, const DenseMatrix& m, Side side, DenseMatrix& out);

// pattern(r, c) = phase[r] * conj(phase[c]); the combined effect of the outer
// diagonal factors {phase} . X . {phase*}.
DenseMatrix phase_pattern(const DiagonalVector& phase);
void phase_pattern_into(const DiagonalVector& phase, DenseMatrix& out);

// Scratch reused across sandwich_product_into calls.
struct SandwichScratch {
  DenseMatrix scaled;
};

// {phase} * w1 * {alpha} * w2 * {phase*} with exactly one general product:
//   scaled = {alpha} * w2            (row scaling)
//   out    = w1 * scaled             (gemm)
//   out   .*= phase * phase^dagger   (rank-1 pattern)
// Requires |phase[k]| == 1 to within 1e-10.
DenseMatrix sandwich_product(const DiagonalVector& phase, const DenseMatrix& w1,
                             const DiagonalVector& alpha, const DenseMatrix& w2);
void sandwich_product_into(const DiagonalVector& phase, const DenseMatrix& w1,
                           const DiagonalVector& alpha, const DenseMatrix& w2,
                           DenseMatrix& out, SandwichScratch& scratch);
// Same, with the phase pattern precomputed by phase_pattern_into.
void sandwich_product_into(const DenseMatrix& pattern, const DenseMatrix& w1,
                           const DiagonalVector& alpha, const DenseMatrix& w2,
                           DenseMatrix& out, SandwichScratch& scratch);

// --- diagnostics ----------------------------------------------------------

double max_norm(const DenseMatrix& m) noexcept;
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
// Induced 1-norm (maximum absolute column sum).
double one_norm(const DenseMatrix& m) noexcept;
// max |(m^dagger m - I)_{rc}|, computed directly (not via the counted gemm).
double unitarity_residual(const DenseMatrix& m);
double hermiticity_residual(const DenseMatrix& m);
bool all_finite(const DenseMatrix& m) noexcept;
Complex trace(const DenseMatrix& m) noexcept;
// tr(a^dagger b) in O(N^2).
Complex hs_inner(const DenseMatrix& a, const DenseMatrix& b);
// a*b - b*a (uses two counted products).
DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace pulseforge
