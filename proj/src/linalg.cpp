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

#include "pulseforge/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pulseforge/counters.hpp"
#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {

// Plain complex product; avoids the NaN-recovery path of operator* that
// GCC emits without -ffast-math.
inline Complex cmul(Complex a, Complex b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void require_nonempty(const DenseMatrix& m, const char* what) {
  if (m.empty()) throw DimensionError(std::string(what) + ": empty matrix");
}

// Row-major gemm. B is split into real and imaginary planes so the inner
// loop is a plain multiply-add over contiguous doubles; each output row is
// accumulated locally. Small sizes get a fully unrolled instance.
template <std::size_t N>
void gemm_fixed(const Complex* a, const Complex* b, Complex* out) {
  double bre[N * N];
  double bim[N * N];
  const double* src = reinterpret_cast<const double*>(b);
  for (std::size_t k = 0; k < N * N; ++k) {
    bre[k] = src[2 * k];
    bim[k] = src[2 * k + 1];
  }
  for (std::size_t i = 0; i < N; ++i) {
    double cr[N] = {};
    double ci[N] = {};
    for (std::size_t k = 0; k < N; ++k) {
      const double ar = a[i * N + k].real();
      const double ai = a[i * N + k].imag();
      for (std::size_t j = 0; j < N; ++j) {
        cr[j] += ar * bre[k * N + j] - ai * bim[k * N + j];
        ci[j] += ar * bim[k * N + j] + ai * bre[k * N + j];
      }
    }
    double* dst = reinterpret_cast<double*>(out + i * N);
    for (std::size_t j = 0; j < N; ++j) {
      dst[2 * j] = cr[j];
      dst[2 * j + 1] = ci[j];
    }
  }
}

void gemm_general(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  thread_local std::vector<double> planes;
  if (planes.size() < 2 * n * n + 2 * n) planes.resize(2 * n * n + 2 * n);
  double* __restrict bre = planes.data();
  double* __restrict bim = bre + n * n;
  double* __restrict cr = bim + n * n;
  double* __restrict ci = cr + n;
  const double* src = reinterpret_cast<const double*>(b);
  for (std::size_t k = 0; k < n * n; ++k) {
    bre[k] = src[2 * k];
    bim[k] = src[2 * k + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(cr, cr + n, 0.0);
    std::fill(ci, ci + n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double ar = a[i * n + k].real();
      const double ai = a[i * n + k].imag();
      const double* __restrict xr = bre + k * n;
      const double* __restrict xi = bim + k * n;
      for (std::size_t j = 0; j < n; ++j) {
        cr[j] += ar * xr[j] - ai * xi[j];
        ci[j] += ar * xi[j] + ai * xr[j];
      }
    }
    double* dst = reinterpret_cast<double*>(out + i * n);
    for (std::size_t j = 0; j < n; ++j) {
      dst[2 * j] = cr[j];
      dst[2 * j + 1] = ci[j];
    }
  }
}

void gemm_kernel(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  const Complex* pa = a.row(0);
  const Complex* pb = b.row(0);
  Complex* pc = out.row(0);
  switch (a.dim()) {
    case 2: gemm_fixed<2>(pa, pb, pc); break;
    case 4: gemm_fixed<4>(pa, pb, pc); break;
    case 8: gemm_fixed<8>(pa, pb, pc); break;
    case 16: gemm_fixed<16>(pa, pb, pc); break;
    case 32: gemm_fixed<32>(pa, pb, pc); break;
    default: gemm_general(pa, pb, pc, a.dim()); break;
  }
}

// In-place LU with partial pivoting followed by forward/back substitution on
// every column of rhs; rhs is overwritten with the solution.
void lu_solve_in_place(DenseMatrix& lhs, DenseMatrix& rhs) {
  const std::size_t n = lhs.dim();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lhs(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(lhs(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw NumericError("expm: singular Pade denominator");
    if (pivot != col) {
      std::swap_ranges(lhs.row(col), lhs.row(col) + n, lhs.row(pivot));
      std::swap_ranges(rhs.row(col), rhs.row(col) + n, rhs.row(pivot));
    }
    const Complex inv = 1.0 / lhs(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = cmul(lhs(r, col), inv);
      if (f == Complex{}) continue;
      lhs(r, col) = f;
      for (std::size_t c = col + 1; c < n; ++c) lhs(r, c) -= cmul(f, lhs(col, c));
      for (std::size_t c = 0; c < n; ++c) rhs(r, c) -= cmul(f, rhs(col, c));
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const Complex inv = 1.0 / lhs(col, col);
    for (std::size_t c = 0; c < n; ++c) rhs(col, c) = cmul(rhs(col, c), inv);
    for (std::size_t r = 0; r < col; ++r) {
      const Complex f = lhs(r, col);
      if (f == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) rhs(r, c) -= cmul(f, rhs(col, c));
    }
  }
}

// out = sum_i coeff[i] * terms[i]
void linear_combination(std::initializer_list<std::pair<double, const DenseMatrix*>> terms,
                        DenseMatrix& out) {
  out.set_zero();
  auto dst = out.entries();
  for (const auto& [coeff, m] : terms) {
    auto src = m->entries();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += coeff * src[k];
  }
}

}  // namespace

// --- DenseMatrix ----------------------------------------------------------

DenseMatrix::DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw DimensionError("DenseMatrix: dim must be >= 1");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0) throw DimensionError("DenseMatrix: dim must be >= 1");
  data_.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    if (r.size() != dim_) throw DimensionError("DenseMatrix: rows must form a square matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  m.set_identity();
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> d) {
  DenseMatrix m(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
  return m;
}

void DenseMatrix::resize(std::size_t dim) {
  dim_ = dim;
  data_.resize(dim * dim);
}

void DenseMatrix::set_zero() noexcept { std::fill(data_.begin(), data_.end(), Complex{}); }

void DenseMatrix::set_identity() noexcept {
  set_zero();
  for (std::size_t k = 0; k < dim_; ++k) (*this)(k, k) = 1.0;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  require_same_dim(dim_, o.dim_, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  require_same_dim(dim_, o.dim_, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(Complex s) noexcept {
  for (auto& v : data_) v = cmul(v, s);
  return *this;
}

// --- products -------------------------------------------------------------

void multiply_into(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
  require_nonempty(a, "multiply");
  require_same_dim(a.dim(), b.dim(), "multiply");
  if (&out == &a || &out == &b) throw PreconditionError("multiply_into: output aliases an input");
  if (out.dim() != a.dim()) out.resize(a.dim());
  detail::count(detail::Op::Gemm);
  gemm_kernel(a, b, out);
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out;
  multiply_into(a, b, out);
  return out;
}

// --- expm -----------------------------------------------------------------

void expm_into(const DenseMatrix& m, DenseMatrix& out, ExpmWorkspace& ws) {
  require_nonempty(m, "expm");
  if (&out == &m) throw PreconditionError("expm_into: output aliases the input");
  if (!all_finite(m)) throw NumericError("expm: non-finite entries");
  detail::count(detail::Op::Expm);

  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  const std::size_t n = m.dim();
  for (DenseMatrix* w : {&ws.a, &ws.a2, &ws.a4, &ws.a6, &ws.tmp, &ws.inner, &ws.u, &ws.v}) {
    if (w->dim() != n) w->resize(n);
  }
  if (out.dim() != n) out.resize(n);

  const double norm = one_norm(m);
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));

  ws.a = m;
  if (squarings > 0) ws.a *= std::ldexp(1.0, -squarings);
  const DenseMatrix& a = ws.a;

  multiply_into(a, a, ws.a2);
  multiply_into(ws.a2, ws.a2, ws.a4);
  multiply_into(ws.a4, ws.a2, ws.a6);

  // U = A [A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I]
  linear_combination({{b[13], &ws.a6}, {b[11], &ws.a4}, {b[9], &ws.a2}}, ws.tmp);
  multiply_into(ws.a6, ws.tmp, ws.inner);
  linear_combination({{1.0, &ws.inner}, {b[7], &ws.a6}, {b[5], &ws.a4}, {b[3], &ws.a2}}, ws.tmp);
  for (std::size_t k = 0; k < n; ++k) ws.tmp(k, k) += b[1];
  multiply_into(a, ws.tmp, ws.u);

  // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
  linear_combination({{b[12], &ws.a6}, {b[10], &ws.a4}, {b[8], &ws.a2}}, ws.tmp);
  multiply_into(ws.a6, ws.tmp, ws.inner);
  linear_combination({{1.0, &ws.inner}, {b[6], &ws.a6}, {b[4], &ws.a4}, {b[2], &ws.a2}}, ws.v);
  for (std::size_t k = 0; k < n; ++k) ws.v(k, k) += b[0];

  // (V - U) X = (V + U)
  auto u = ws.u.entries();
  auto v = ws.v.entries();
  auto lhs = ws.tmp.entries();
  auto rhs = out.entries();
  for (std::size_t k = 0; k < u.size(); ++k) {
    lhs[k] = v[k] - u[k];
    rhs[k] = v[k] + u[k];
  }
  lu_solve_in_place(ws.tmp, out);

  for (int s = 0; s < squarings; ++s) {
    multiply_into(out, out, ws.tmp);
    std::swap(out, ws.tmp);
  }
}

DenseMatrix expm(const DenseMatrix& m) {
  DenseMatrix out;
  ExpmWorkspace ws;
  expm_into(m, out, ws);
  return out;
}

// --- diagonal fast paths --------------------------------------------------

void diag_exp_into(std::span<const double> d, Complex scale, DiagonalVector& out) {
  out.resize(d.size());
  const double sr = scale.real();
  const double si = scale.imag();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!std::isfinite(d[k])) throw NumericError("diag_exp: non-finite input");
    const double t = si * d[k];
    const double mag = sr == 0.0 ? 1.0 : std::exp(sr * d[k]);
    out[k] = {mag * std::cos(t), mag * std::sin(t)};
  }
}

DiagonalVector diag_exp(std::span<const double> d, Complex scale) {
  DiagonalVector out;
  diag_exp_into(d, scale, out);
  return out;
}

void diag_mul_into(const DiagonalVector& d, const DenseMatrix& m, Side side, DenseMatrix& out) {
  require_nonempty(m, "diag_mul");
  require_same_dim(d.dim(), m.dim(), "diag_mul");
  const std::size_t n = m.dim();
  if (&out != &m && out.dim() != n) out.resize(n);
  if (side == Side::Left) {
    for (std::size_t r = 0; r < n; ++r) {
      const Complex s = d[r];
      const Complex* src = m.row(r);
      Complex* dst = out.row(r);
      for (std::size_t c = 0; c < n; ++c) dst[c] = cmul(s, src[c]);
    }
  } else {
    for (std::size_t r = 0; r < n; ++r) {
      const Complex* src = m.row(r);
      Complex* dst = out.row(r);
      for (std::size_t c = 0; c < n; ++c) dst[c] = cmul(src[c], d[c]);
    }
  }
}

DenseMatrix diag_mul(const DiagonalVector& d, const DenseMatrix& m, Side side) {
  DenseMatrix out(m.dim() == 0 ? 1 : m.dim());
  diag_mul_into(d, m, side, out);
  return out;
}

void phase_pattern_into(const DiagonalVector& phase, DenseMatrix& out) {
  const std::size_t n = phase.dim();
  if (n == 0) throw DimensionError("phase_pattern: empty phase vector");
  if (out.dim() != n) out.resize(n);
  detail::count(detail::Op::PhasePattern);
  for (std::size_t r = 0; r < n; ++r) {
    Complex* dst = out.row(r);
    for (std::size_t c = 0; c < n; ++c) dst[c] = cmul(phase[r], std::conj(phase[c]));
  }
}

DenseMatrix phase_pattern(const DiagonalVector& phase) {
  DenseMatrix out;
  phase_pattern_into(phase, out);
  return out;
}

namespace {

void check_sandwich_dims(std::size_t phase_dim, const DenseMatrix& w1, const DiagonalVector& alpha,
                         const DenseMatrix& w2) {
  require_nonempty(w1, "sandwich_product");
  require_same_dim(phase_dim, w1.dim(), "sandwich_product");
  require_same_dim(alpha.dim(), w1.dim(), "sandwich_product");
  require_same_dim(w2.dim(), w1.dim(), "sandwich_product");
}

}  // namespace

void sandwich_product_into(const DiagonalVector& phase, const DenseMatrix& w1,
                           const DiagonalVector& alpha, const DenseMatrix& w2, DenseMatrix& out,
                           SandwichScratch& scratch) {
  check_sandwich_dims(phase.dim(), w1, alpha, w2);
  for (std::size_t k = 0; k < phase.dim(); ++k) {
    if (std::abs(std::norm(phase[k]) - 1.0) > 1e-10) {
      throw PreconditionError("sandwich_product: phase entries must have unit modulus");
    }
  }
  const std::size_t n = w1.dim();
  // The column factors of the pattern ride along with {alpha} before the
  // product; the row factors are applied after it.
  detail::count(detail::Op::PhasePattern);
  DenseMatrix& scaled = scratch.scaled;
  if (scaled.dim() != n) scaled.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Complex* src = w2.row(r);
    Complex* dst = scaled.row(r);
    const Complex ar = alpha[r];
    for (std::size_t c = 0; c < n; ++c) dst[c] = cmul(cmul(ar, src[c]), std::conj(phase[c]));
  }
  multiply_into(w1, scaled, out);
  for (std::size_t r = 0; r < n; ++r) {
    Complex* dst = out.row(r);
    const Complex pr = phase[r];
    for (std::size_t c = 0; c < n; ++c) dst[c] = cmul(pr, dst[c]);
  }
}

void sandwich_product_into(const DenseMatrix& pattern, const DenseMatrix& w1,
                           const DiagonalVector& alpha, const DenseMatrix& w2, DenseMatrix& out,
                           SandwichScratch& scratch) {
  check_sandwich_dims(pattern.dim(), w1, alpha, w2);
  diag_mul_into(alpha, w2, Side::Left, scratch.scaled);
  multiply_into(w1, scratch.scaled, out);
  auto dst = out.entries();
  auto pat = pattern.entries();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = cmul(dst[k], pat[k]);
}

DenseMatrix sandwich_product(const DiagonalVector& phase, const DenseMatrix& w1,
                             const DiagonalVector& alpha, const DenseMatrix& w2) {
  DenseMatrix out;
  SandwichScratch scratch;
  sandwich_product_into(phase, w1, alpha, w2, out, scratch);
  return out;
}

// --- diagnostics ----------------------------------------------------------

double max_norm(const DenseMatrix& m) noexcept {
  double best = 0.0;
  for (const auto& v : m.entries()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  auto x = a.entries();
  auto y = b.entries();
  double best = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) best = std::max(best, std::abs(x[k] - y[k]));
  return best;
}

double one_norm(const DenseMatrix& m) noexcept {
  double best = 0.0;
  for (std::size_t c = 0; c < m.dim(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.dim(); ++r) sum += std::abs(m(r, c));
    best = std::max(best, sum);
  }
  return best;
}

double unitarity_residual(const DenseMatrix& m) {
  require_nonempty(m, "unitarity_residual");
  const std::size_t n = m.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += std::conj(m(k, i)) * m(k, j);
      if (i == j) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

double hermiticity_residual(const DenseMatrix& m) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = r; c < m.dim(); ++c)
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
  return worst;
}

bool all_finite(const DenseMatrix& m) noexcept {
  for (const auto& v : m.entries()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

Complex trace(const DenseMatrix& m) noexcept {
  Complex t{};
  for (std::size_t k = 0; k < m.dim(); ++k) t += m(k, k);
  return t;
}

Complex hs_inner(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "hs_inner");
  auto x = a.entries();
  auto y = b.entries();
  Complex s{};
  for (std::size_t k = 0; k < x.size(); ++k) s += cmul(std::conj(x[k]), y[k]);
  return s;
}

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) {
  return multiply(a, b) - multiply(b, a);
}

}  // namespace pulseforge
