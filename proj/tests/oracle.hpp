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

// Independent reference implementations built on Eigen.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "pulseforge/linalg.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline Mat to_eigen(const pulseforge::DenseMatrix& m) {
  Mat out(m.dim(), m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

inline pulseforge::DenseMatrix from_eigen(const Mat& m) {
  pulseforge::DenseMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

inline double max_diff(const pulseforge::DenseMatrix& a, const Mat& b) {
  return (to_eigen(a) - b).cwiseAbs().maxCoeff();
}

// exp(-i H t) for Hermitian H via the spectral decomposition.
inline Mat expm_hermitian(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cd>() * cd(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat expm_general(const Mat& m) { return m.exp(); }

// Pauli-based spin operators via explicit Kronecker products.
inline Mat spin_half(char axis) {
  Mat s(2, 2);
  if (axis == 'x') {
    s << 0, 0.5, 0.5, 0;
  } else if (axis == 'y') {
    s << 0, cd(0, -0.5), cd(0, 0.5), 0;
  } else {
    s << 0.5, 0, 0, -0.5;
  }
  return s;
}

inline Mat embed(const Mat& op, std::size_t spin, std::size_t q) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t r = 0; r < q; ++r) {
    const Mat factor = r == spin ? op : Mat::Identity(2, 2);
    Mat next = Eigen::kroneckerProduct(out, factor).eval();
    out = next;
  }
  return out;
}

inline Mat spin_op(std::size_t spin, char axis, std::size_t q) { return embed(spin_half(axis), spin, q); }

inline Mat random_hermitian(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = cd(g(rng), g(rng));
  }
  return 0.5 * scale * (a + a.adjoint());
}

inline Mat random_unitary(std::size_t n, std::uint64_t seed) {
  return expm_hermitian(random_hermitian(n, seed), 1.0);
}

inline pulseforge::DenseMatrix random_dense(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  pulseforge::DenseMatrix m(n);
  for (auto& v : m.entries()) v = cd(scale * g(rng), scale * g(rng));
  return m;
}

}  // namespace oracle
