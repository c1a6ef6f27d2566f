#pragma once

#include "spdgeo/core.hpp"

#include <cstdint>
#include <functional>

namespace spdgeo {

/// Ascending eigenvalues of Y X^{-1}, from the Cholesky whitening
/// L^{-1} Y L^{-T} with X = L L^T.
Spectrum full_spectrum(const DenseSpd& x, const DenseSpd& y);

/// Endpoints of full_spectrum.
ExtremePair extreme_pair_dense(const DenseSpd& x, const DenseSpd& y);

/// Symmetric whitened matrix L^{-1} Y L^{-T}.
Matrix whiten(const DenseSpd& x, const DenseSpd& y);

/// Matrix-free SPD operand: products with A and solves with A.
/// Callbacks must not alias `in` and `out`. A failing solve may throw or
/// return non-finite values; both surface as SolveFailure.
struct SpdOperator {
  Eigen::Index n = 0;
  std::function<void(const Vector& in, Vector& out)> apply;
  std::function<void(const Vector& in, Vector& out)> solve;
};

SpdOperator make_operator(const DenseSpd& a);
SpdOperator make_operator(const SparseSpd& a);

struct KrylovOptions {
  double tol = 1e-10;
  /// 0 means 5 n.
  long max_iter = 0;
  std::uint64_t start_seed = 0x5eedULL;
};

/// Largest eigenvalue of the pencil (Y, X), i.e. of X^{-1} Y, by Lanczos in the
/// X inner product with full reorthogonalization. Converged when the Ritz
/// residual satisfies |beta_j s_j| <= tol |theta|.
double lanczos_max(const SpdOperator& x, const SpdOperator& y, const KrylovOptions& opts = {});

/// lambda_max from lanczos_max(x, y); lambda_min as 1 / lanczos_max(y, x).
ExtremePair extreme_pair_krylov(const SpdOperator& x, const SpdOperator& y,
                                const KrylovOptions& opts = {});

}  // namespace spdgeo
