#include "spdgeo/analysis.hpp"

#include "spdgeo/geneig.hpp"
#include "spdgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace spdgeo {

namespace {

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

double log_star_term(double lam, double lm, double lM) {
  const double l = std::log(lam);
  const double a = std::log(lm);
  const double b = std::log(lM);
  return log_add_exp(0.5 * l, 0.5 * (a + b - l)) - log_add_exp(0.5 * b, 0.5 * a);
}

double det_euclid_midpoint_factor(const Spectrum& spec) {
  double s = 0.0;
  for (double l : spec.values()) s += log_cosh(0.5 * std::log(l));
  return std::exp(s);
}

double det_star_midpoint_factor(const Spectrum& spec) {
  const double lm = spec.min();
  const double lM = spec.max();
  double s = 0.0;
  for (double l : spec.values()) s += log_star_term(l, lm, lM);
  return std::exp(s);
}

double midpoint_distance_bound(std::size_t n, double r) {
  if (n < 2) throw InvalidArgument("midpoint bound needs n >= 2");
  return std::sqrt(static_cast<double>(n - 2)) * log_cosh(0.5 * r);
}

MidpointReport midpoint_distance(const Spectrum& spec) {
  if (spec.size() < 2) throw InvalidArgument("midpoint_distance needs n >= 2");
  const double lm = spec.min();
  const double lM = spec.max();
  double acc = 0.0;
  for (double l : spec.values()) {
    const double g = log_star_term(l, lm, lM);
    acc += g * g;
  }
  MidpointReport rep{};
  rep.d_rt = std::sqrt(acc);
  rep.r = std::max(std::abs(std::log(lm)), std::abs(std::log(lM)));
  rep.upper = midpoint_distance_bound(spec.size(), rep.r);
  rep.f = rep.r > 0.0 ? rep.d_rt / rep.r : 0.0;
  return rep;
}

double midpoint_distance_direct(const DenseSpd& x, const DenseSpd& y) {
  return dist_riemannian(geodesic_riemannian(x, y, 0.5), geodesic_star(x, y, 0.5));
}

Spectrum sample_spectrum(std::size_t n, double r, std::uint64_t stream_seed) {
  if (n < 2) throw InvalidArgument("sample_spectrum needs n >= 2");
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("sample_spectrum needs r >= 0");
  std::mt19937_64 rng(stream_seed);
  std::uniform_real_distribution<double> unif(-r, r);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::bernoulli_distribution coin(0.5);

  std::vector<double> logs(n);
  const std::size_t fixed = pick(rng);
  const bool up = coin(rng);
  for (std::size_t i = 0; i < n; ++i) {
    logs[i] = (i == fixed) ? (up ? r : -r) : (r > 0.0 ? unif(rng) : 0.0);
  }
  std::vector<double> lams(n);
  std::transform(logs.begin(), logs.end(), lams.begin(), [](double g) { return std::exp(g); });
  return Spectrum(std::move(lams));
}

std::vector<Spectrum> sample_spectra(std::size_t n, double r, std::size_t count,
                                     std::uint64_t seed) {
  std::vector<Spectrum> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample_spectrum(n, r, derive_seed(seed, i)));
  }
  return out;
}

std::vector<SpectrumSample> sample_spectra_over_r(std::size_t n, double r_max,
                                                  std::size_t count, std::uint64_t seed) {
  if (!(r_max > 0.0)) throw InvalidArgument("r_max must be positive");
  std::vector<SpectrumSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    // (0, r_max]
    const double r = r_max * (1.0 - std::generate_canonical<double, 53>(rng));
    out.push_back({r, sample_spectrum(n, r, derive_seed(s, 0))});
  }
  return out;
}

}  // namespace spdgeo
