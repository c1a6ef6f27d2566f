#pragma once

#include "spdgeo/core.hpp"

#include <cstdint>
#include <vector>

namespace spdgeo {

/// det((X + Y) / 2) / sqrt(det X det Y) as a function of the spectrum of
/// Y X^{-1}: prod_i (sqrt(l_i) + 1 / sqrt(l_i)) / 2. Always >= 1.
double det_euclid_midpoint_factor(const Spectrum& spec);

/// det(X *_{1/2} Y) / sqrt(det X det Y):
/// prod_i (sqrt(l_i) + sqrt(lM lm) / sqrt(l_i)) / (sqrt(lM) + sqrt(lm)). Always <= 1.
double det_star_midpoint_factor(const Spectrum& spec);

/// Log of a single shrinkage term for eigenvalue `lam` with extremes (lm, lM),
/// evaluated in log space. Zero at lam = lm and lam = lM.
double log_star_term(double lam, double lm, double lM);

/// log cosh(x) without overflow.
double log_cosh(double x);

/// sqrt(n - 2) log cosh(r / 2).
double midpoint_distance_bound(std::size_t n, double r);

struct MidpointReport {
  double d_rt;   ///< d_R(X # Y, X * Y)
  double r;      ///< d_T(X, Y) = max_i |log l_i|
  double upper;  ///< sqrt(n - 2) log cosh(r / 2)
  double f;      ///< d_rt / r, 0 when r = 0
};

/// Closed-form Riemannian distance between the Riemannian and star midpoints.
/// Requires n >= 2.
MidpointReport midpoint_distance(const Spectrum& spec);

/// Same distance from explicitly constructed midpoints.
double midpoint_distance_direct(const DenseSpd& x, const DenseSpd& y);

/// One spectrum with max_i |log l_i| = r: a random coordinate is set to e^{+r}
/// or e^{-r} (fair coin), the others are log-uniform on [-r, r].
Spectrum sample_spectrum(std::size_t n, double r, std::uint64_t stream_seed);

/// `count` spectra at fixed r; sample i uses stream derive_seed(seed, i).
std::vector<Spectrum> sample_spectra(std::size_t n, double r, std::size_t count,
                                     std::uint64_t seed);

struct SpectrumSample {
  double r;
  Spectrum spec;
};

/// `count` spectra with r uniform on (0, r_max], deterministic per (seed, i).
std::vector<SpectrumSample> sample_spectra_over_r(std::size_t n, double r_max,
                                                  std::size_t count, std::uint64_t seed);

}  // namespace spdgeo
