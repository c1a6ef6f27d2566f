#include "spdgeo/core.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace spdgeo {

namespace {

void check_symmetric(const Matrix& a, double tol) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double scale = std::max(1.0, std::max(std::abs(a(i, j)), std::abs(a(j, i))));
      if (!(std::abs(a(i, j) - a(j, i)) <= tol * scale)) {
        std::ostringstream msg;
        msg << "matrix is not symmetric at (" << i << ", " << j << "): " << a(i, j)
            << " vs " << a(j, i);
        throw NotSymmetric(msg.str());
      }
    }
  }
}

}  // namespace

DenseSpd::DenseSpd(const Matrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionMismatch("SPD matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw NotPositiveDefinite("matrix has non-finite entries");
  }
  check_symmetric(a, tol);
  m_ = 0.5 * (a + a.transpose());
  auto llt = std::make_shared<Eigen::LLT<Matrix>>(m_);
  if (llt->info() != Eigen::Success) {
    throw NotPositiveDefinite("Cholesky factorization failed: matrix is not positive definite");
  }
  // Eigen's LLT does not flag a zero pivot on the last column in every case.
  const auto diag = llt->matrixLLT().diagonal();
  if (!(diag.minCoeff() > 0.0) || !diag.allFinite()) {
    throw NotPositiveDefinite("Cholesky pivot is not positive");
  }
  llt_ = std::move(llt);
}

DenseSpd DenseSpd::identity(Eigen::Index n) { return DenseSpd(Matrix::Identity(n, n)); }

double DenseSpd::log_det() const {
  return 2.0 * llt_->matrixLLT().diagonal().array().log().sum();
}

SparseSpd::SparseSpd(SparseMatrix a, double tol) : m_(std::move(a)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionMismatch("SPD matrix must be square and non-empty");
  }
  m_.makeCompressed();
  const SparseMatrix t = m_.transpose();
  // Same stored pattern in both triangles, values symmetric.
  for (Eigen::Index i = 0; i < m_.outerSize(); ++i) {
    SparseMatrix::InnerIterator it(m_, i);
    SparseMatrix::InnerIterator jt(t, i);
    for (; it && jt; ++it, ++jt) {
      if (it.col() != jt.col()) {
        throw NotSymmetric("sparse pattern is not symmetric in row " + std::to_string(i));
      }
      if (!std::isfinite(it.value())) {
        throw NotPositiveDefinite("matrix has non-finite entries");
      }
      const double scale = std::max(1.0, std::max(std::abs(it.value()), std::abs(jt.value())));
      if (!(std::abs(it.value() - jt.value()) <= tol * scale)) {
        throw NotSymmetric("sparse matrix values are not symmetric in row " + std::to_string(i));
      }
    }
    if (it || jt) {
      throw NotSymmetric("sparse pattern is not symmetric in row " + std::to_string(i));
    }
  }
  m_ = 0.5 * (m_ + t);
  m_.makeCompressed();
  auto llt = std::make_shared<Factor>(Eigen::SparseMatrix<double>(m_));
  if (llt->info() != Eigen::Success) {
    throw NotPositiveDefinite("sparse Cholesky factorization failed: matrix is not positive definite");
  }
  llt_ = std::move(llt);
}

SparsityPattern SparseSpd::pattern() const {
  SparsityPattern p;
  p.reserve(static_cast<std::size_t>(m_.nonZeros()));
  for (Eigen::Index i = 0; i < m_.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m_, i); it; ++it) {
      p.emplace_back(it.row(), it.col());
    }
  }
  return p;
}

double SparseSpd::log_det() const {
  // L is lower triangular with the pivots on the diagonal (permuted system,
  // same determinant).
  const Eigen::SparseMatrix<double> l = llt_->matrixL();
  double s = 0.0;
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    s += std::log(l.coeff(k, k));
  }
  return 2.0 * s;
}

ExtremePair::ExtremePair(double lo, double hi) : lam_min(lo), lam_max(hi) {
  if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi)) {
    throw FactorizationFailure("extreme eigenvalues violate 0 < lam_min <= lam_max");
  }
}

bool ExtremePair::degenerate() const { return (lam_max - lam_min) <= 1e-12 * lam_max; }

Spectrum::Spectrum(std::vector<double> lams) : lams_(std::move(lams)) {
  if (lams_.empty()) {
    throw InvalidArgument("spectrum must be non-empty");
  }
  std::sort(lams_.begin(), lams_.end());
  if (!(lams_.front() > 0.0) || !std::isfinite(lams_.back())) {
    throw FactorizationFailure("spectrum has non-positive or non-finite eigenvalues");
  }
}

DenseSpd validate_spd(const Matrix& a, double tol) { return DenseSpd(a, tol); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over a combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DenseSpd random_spd(Eigen::Index n, std::uint64_t seed, bool unit_det) {
  if (n < 1) {
    throw InvalidArgument("random_spd: n must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i, j) = normal(rng);
    }
  }
  Vector logs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    logs(i) = normal(rng);
  }
  if (unit_det) {
    logs.array() -= logs.mean();
  }
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  const Matrix a = q * logs.array().exp().matrix().asDiagonal() * q.transpose();
  return DenseSpd(a);
}

SparsityPattern random_pattern(Eigen::Index n, double density, std::uint64_t seed) {
  if (n < 1 || density < 0.0 || density > 1.0) {
    throw InvalidArgument("random_pattern: need n >= 1 and density in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  SparsityPattern p;
  for (Eigen::Index i = 0; i < n; ++i) {
    p.emplace_back(i, i);
    for (Eigen::Index j = 0; j < i; ++j) {
      if (coin(rng)) {
        p.emplace_back(i, j);
        p.emplace_back(j, i);
      }
    }
  }
  std::sort(p.begin(), p.end());
  return p;
}

SparseSpd random_sparse_spd_on(Eigen::Index n, const SparsityPattern& pattern,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Draw one value per unordered pair, in a deterministic order.
  SparsityPattern lower;
  for (const auto& [i, j] : pattern) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw InvalidArgument("pattern index out of range");
    }
    if (i > j) lower.emplace_back(i, j);
  }
  std::sort(lower.begin(), lower.end());
  lower.erase(std::unique(lower.begin(), lower.end()), lower.end());

  std::vector<Eigen::Triplet<double>> trips;
  Vector rowsum = Vector::Zero(n);
  for (const auto& [i, j] : lower) {
    const double v = normal(rng);
    trips.emplace_back(i, j, v);
    trips.emplace_back(j, i, v);
    rowsum(i) += std::abs(v);
    rowsum(j) += std::abs(v);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    trips.emplace_back(i, i, rowsum(i) + std::exp(normal(rng)));
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  return SparseSpd(std::move(a));
}

SparseSpd random_sparse_spd(Eigen::Index n, double density, std::uint64_t seed) {
  return random_sparse_spd_on(n, random_pattern(n, density, seed), derive_seed(seed, 1));
}

SparsityPattern pattern_union(const SparsityPattern& a, const SparsityPattern& b) {
  SparsityPattern sa = a;
  SparsityPattern sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  SparsityPattern out;
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace spdgeo
