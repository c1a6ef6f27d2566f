#pragma once

#include "spdgeo/core.hpp"
#include "spdgeo/geneig.hpp"

#include <string_view>

namespace spdgeo {

enum class GeodesicKind { Euclidean, Riemannian, ThompsonStar };

GeodesicKind parse_geodesic_kind(std::string_view name);
std::string_view to_string(GeodesicKind kind);

// Distances -----------------------------------------------------------------

/// sqrt(sum_i log^2 lambda_i(Y X^{-1})), the affine-invariant distance.
double dist_riemannian(const DenseSpd& x, const DenseSpd& y);

/// log(lambda_max / lambda_min), projective (scale-invariant).
double dist_hilbert(const DenseSpd& x, const DenseSpd& y);
double dist_hilbert(const ExtremePair& p);

/// log max(lambda_max, 1 / lambda_min) = max_i |log lambda_i|.
double dist_thompson(const DenseSpd& x, const DenseSpd& y);
/// Matrix-free path: extreme pair by Lanczos on the sparse factors.
double dist_thompson(const SparseSpd& x, const SparseSpd& y, const KrylovOptions& opts = {});
double dist_thompson(const ExtremePair& p);

// Geodesics -----------------------------------------------------------------

/// X #_t Y = X^{1/2} (X^{-1/2} Y X^{-1/2})^t X^{1/2}, evaluated as
/// L (L^{-1} Y L^{-T})^t L^T. Any real t.
DenseSpd geodesic_riemannian(const DenseSpd& x, const DenseSpd& y, double t);

/// Coefficients (a, b) of X *_t Y = a Y + b X for the extreme pair of (X, Y).
struct StarCoefficients {
  double a;
  double b;
};
StarCoefficients star_coefficients(const ExtremePair& p, double t);

/// X *_t Y, the distinguished Thompson geodesic. Any real t. The sparse
/// result is stored on the union of the input patterns.
DenseSpd geodesic_star(const DenseSpd& x, const DenseSpd& y, double t);
SparseSpd geodesic_star(const SparseSpd& x, const SparseSpd& y, double t,
                        const KrylovOptions& opts = {});

/// (1 - t) X + t Y for t in [0, 1].
DenseSpd geodesic_euclidean(const DenseSpd& x, const DenseSpd& y, double t);
SparseSpd geodesic_euclidean(const SparseSpd& x, const SparseSpd& y, double t);

DenseSpd geodesic(GeodesicKind kind, const DenseSpd& x, const DenseSpd& y, double t);

}  // namespace spdgeo
