#include "spdgeo/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace spdgeo {

GeodesicKind parse_geodesic_kind(std::string_view name) {
  if (name == "euclidean") return GeodesicKind::Euclidean;
  if (name == "riemannian") return GeodesicKind::Riemannian;
  if (name == "star" || name == "thompson") return GeodesicKind::ThompsonStar;
  throw InvalidArgument("unknown geodesic kind '" + std::string(name) + "'");
}

std::string_view to_string(GeodesicKind kind) {
  switch (kind) {
    case GeodesicKind::Euclidean:
      return "euclidean";
    case GeodesicKind::Riemannian:
      return "riemannian";
    case GeodesicKind::ThompsonStar:
      return "star";
  }
  return "?";
}

double dist_riemannian(const DenseSpd& x, const DenseSpd& y) {
  const Spectrum s = full_spectrum(x, y);
  double acc = 0.0;
  for (double l : s.values()) {
    const double g = std::log(l);
    acc += g * g;
  }
  return std::sqrt(acc);
}

double dist_hilbert(const ExtremePair& p) { return std::log(p.lam_max / p.lam_min); }

double dist_hilbert(const DenseSpd& x, const DenseSpd& y) {
  return dist_hilbert(extreme_pair_dense(x, y));
}

double dist_thompson(const ExtremePair& p) {
  return std::max(std::log(p.lam_max), -std::log(p.lam_min));
}

double dist_thompson(const DenseSpd& x, const DenseSpd& y) {
  return dist_thompson(extreme_pair_dense(x, y));
}

double dist_thompson(const SparseSpd& x, const SparseSpd& y, const KrylovOptions& opts) {
  return dist_thompson(extreme_pair_krylov(make_operator(x), make_operator(y), opts));
}

DenseSpd geodesic_riemannian(const DenseSpd& x, const DenseSpd& y, double t) {
  const Matrix c = whiten(x, y);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  if (es.info() != Eigen::Success) {
    throw FactorizationFailure("symmetric eigensolver failed on whitened pencil");
  }
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw FactorizationFailure("whitened pencil has non-positive eigenvalues");
  }
  const Vector half_power = es.eigenvalues().array().pow(0.5 * t);
  const Matrix b = (x.cholesky().matrixL() * es.eigenvectors()) * half_power.asDiagonal();
  return DenseSpd(b * b.transpose());
}

StarCoefficients star_coefficients(const ExtremePair& p, double t) {
  const double lm = p.lam_min;
  const double lM = p.lam_max;
  if (p.degenerate()) {
    return {0.0, std::pow(lm, t)};
  }
  // Equivalent to a = (lM^t - lm^t) / (lM - lm) and
  // b = (lM lm^t - lm lM^t) / (lM - lm), without the cancellation.
  const double d = std::log(lM / lm);
  const double den = std::expm1(d);
  const double a = std::pow(lm, t - 1.0) * std::expm1(t * d) / den;
  const double b = std::pow(lM, t) * std::expm1((1.0 - t) * d) / den;
  return {a, b};
}

namespace {

template <typename Result, typename Build>
Result checked(Build&& build, double t) {
  try {
    return build();
  } catch (const NotPositiveDefinite& e) {
    throw NonPositiveResult("star geodesic at t=" + std::to_string(t) +
                            " is not positive definite: " + e.what());
  } catch (const NotSymmetric& e) {
    throw NonPositiveResult("star geodesic at t=" + std::to_string(t) +
                            " lost symmetry: " + e.what());
  }
}

void check_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("Euclidean interpolation requires t in [0, 1], got " +
                          std::to_string(t));
  }
}

}  // namespace

DenseSpd geodesic_star(const DenseSpd& x, const DenseSpd& y, double t) {
  const auto [a, b] = star_coefficients(extreme_pair_dense(x, y), t);
  return checked<DenseSpd>([&] { return DenseSpd(a * y.matrix() + b * x.matrix()); }, t);
}

SparseSpd geodesic_star(const SparseSpd& x, const SparseSpd& y, double t,
                        const KrylovOptions& opts) {
  if (x.dim() != y.dim()) throw DimensionMismatch("geodesic_star: dimension mismatch");
  const auto [a, b] =
      star_coefficients(extreme_pair_krylov(make_operator(x), make_operator(y), opts), t);
  return checked<SparseSpd>(
      [&] { return SparseSpd(SparseMatrix(a * y.matrix() + b * x.matrix())); }, t);
}

DenseSpd geodesic_euclidean(const DenseSpd& x, const DenseSpd& y, double t) {
  check_unit_interval(t);
  if (x.dim() != y.dim()) throw DimensionMismatch("geodesic_euclidean: dimension mismatch");
  return DenseSpd((1.0 - t) * x.matrix() + t * y.matrix());
}

SparseSpd geodesic_euclidean(const SparseSpd& x, const SparseSpd& y, double t) {
  check_unit_interval(t);
  if (x.dim() != y.dim()) throw DimensionMismatch("geodesic_euclidean: dimension mismatch");
  return SparseSpd(SparseMatrix((1.0 - t) * x.matrix() + t * y.matrix()));
}

DenseSpd geodesic(GeodesicKind kind, const DenseSpd& x, const DenseSpd& y, double t) {
  switch (kind) {
    case GeodesicKind::Euclidean:
      return geodesic_euclidean(x, y, t);
    case GeodesicKind::Riemannian:
      return geodesic_riemannian(x, y, t);
    case GeodesicKind::ThompsonStar:
      return geodesic_star(x, y, t);
  }
  throw InvalidArgument("unknown geodesic kind");
}

}  // namespace spdgeo
