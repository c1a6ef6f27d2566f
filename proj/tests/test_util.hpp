#pragma once

#include "spdgeo/core.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <random>

namespace spdgeo::testing {

/// Well-conditioned invertible matrix: Q1 diag(exp(u)) Q2^T, u uniform in
/// [-0.5, 0.5].
inline Matrix random_invertible(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  auto orth = [&] {
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    return Matrix(Eigen::HouseholderQR<Matrix>(g).householderQ());
  };
  const Matrix q1 = orth();
  const Matrix q2 = orth();
  Vector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::exp(unif(rng));
  return q1 * s.asDiagonal() * q2.transpose();
}

inline DenseSpd congruence(const Matrix& a, const DenseSpd& x) {
  return DenseSpd(a * x.matrix() * a.transpose(), 1e-9);
}

inline DenseSpd inverse(const DenseSpd& x) {
  return DenseSpd(x.cholesky().solve(Matrix::Identity(x.dim(), x.dim())), 1e-9);
}

inline DenseSpd diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return DenseSpd(Matrix(v.asDiagonal()));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace spdgeo::testing
