#pragma once

#include "spdgeo/core.hpp"
#include "spdgeo/geneig.hpp"

#include <optional>
#include <vector>

namespace spdgeo {

template <typename M>
struct MeanReport {
  M result;
  /// Inductive mean: full passes over the inputs. Karcher: iterations.
  long cycles = 0;
  /// Fixed-point refinement steps after the inductive warm-up.
  long refine_steps = 0;
  /// Thompson distance between the last two iterates compared by the stopping
  /// rule (Frobenius norm of the mean log for Karcher).
  double final_gap = 0.0;
  bool converged = false;
};

struct InductiveOptions {
  double tol = 1e-8;
  long max_cycles = 100000;
  /// Refine the inductive sequence once its cycle gap is below
  /// `handoff_gap`. Without refinement the sequence runs until its cycle gap
  /// is below `tol`, which only bounds the error by roughly m * gap after m
  /// cycles.
  bool refine = true;
  double handoff_gap = 1e-3;
  long max_refine_steps = 200;
  KrylovOptions krylov{};
};

/// Inductive Thompson mean of `ys`. The sequence is
///
///   X_{i+1} = X_i *_{1/(i+1)} Y_j,   j = ((i - 1) mod k) + 1,
///
/// started at `x1` (default Y_1). Its limit is the zero of the cycle-averaged
/// star-geodesic velocity sum_j (a'_j Y_j + b'_j X), where a'_j, b'_j are the
/// t-derivatives at t = 0 of the star coefficients for the pencil (X, Y_j).
/// Once the sequence is close, the limit is solved directly by iterating
///
///   X <- sum_j a'_j(X) Y_j / (-sum_j b'_j(X)),
///
/// which converges linearly where the sequence itself only converges like
/// 1/i. Either way the result is a linear combination of the Y_j.
///
/// Throws NoConvergence after `max_cycles` passes.
MeanReport<DenseSpd> inductive_mean(const std::vector<DenseSpd>& ys,
                                    const std::optional<DenseSpd>& x1 = std::nullopt,
                                    const InductiveOptions& opts = {});
MeanReport<SparseSpd> inductive_mean(const std::vector<SparseSpd>& ys,
                                     const std::optional<SparseSpd>& x1 = std::nullopt,
                                     const InductiveOptions& opts = {});

/// t-derivatives at t = 0 of the star coefficients: d/dt (X *_t Y) at t = 0
/// equals a Y + b X.
struct StarVelocity {
  double a;
  double b;
};
StarVelocity star_velocity(const ExtremePair& p);

struct KarcherOptions {
  double tol = 1e-10;
  long max_iter = 1000;
};

/// Riemannian barycentre by the fixed point
/// X <- X^{1/2} exp(mean_j log(X^{-1/2} Y_j X^{-1/2})) X^{1/2}, started at the
/// arithmetic mean.
MeanReport<DenseSpd> karcher_mean(const std::vector<DenseSpd>& ys,
                                  const KarcherOptions& opts = {});

DenseSpd arithmetic_mean(const std::vector<DenseSpd>& ys);
SparseSpd arithmetic_mean(const std::vector<SparseSpd>& ys);

struct SparsityReport {
  long out_of_pattern = 0;  ///< |value| > 1e-12 outside the reference
  long nnz = 0;             ///< |value| > 1e-12
  double fill_ratio = 0.0;  ///< nnz / n^2
};

SparsityReport sparsity_report(const SparseSpd& m, const SparsityPattern& reference);
SparsityReport sparsity_report(const DenseSpd& m, const SparsityPattern& reference);

}  // namespace spdgeo
