#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spdgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class SpdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSymmetric : public SpdError {
 public:
  using SpdError::SpdError;
};

class NotPositiveDefinite : public SpdError {
 public:
  using SpdError::SpdError;
};

class ParseError : public SpdError {
 public:
  using SpdError::SpdError;
};

class IoError : public SpdError {
 public:
  using SpdError::SpdError;
};

class DimensionMismatch : public SpdError {
 public:
  using SpdError::SpdError;
};

class InvalidArgument : public SpdError {
 public:
  using SpdError::SpdError;
};

class FactorizationFailure : public SpdError {
 public:
  using SpdError::SpdError;
};

class SolveFailure : public SpdError {
 public:
  using SpdError::SpdError;
};

class NonPositiveResult : public SpdError {
 public:
  using SpdError::SpdError;
};

class NoConvergence : public SpdError {
 public:
  NoConvergence(const std::string& what, long iterations)
      : SpdError(what), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

inline constexpr double kSymmetryTol = 1e-12;

// ---------------------------------------------------------------------------
// Dense SPD
// ---------------------------------------------------------------------------

/// Dense symmetric positive definite matrix. Immutable; the Cholesky factor
/// computed during validation is kept for later whitening and solves.
class DenseSpd {
 public:
  /// Validates `a` (symmetry within `tol`, Cholesky pivots > 0) and stores the
  /// symmetrized copy (A + A^T) / 2.
  explicit DenseSpd(const Matrix& a, double tol = kSymmetryTol);

  static DenseSpd identity(Eigen::Index n);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  const Eigen::LLT<Matrix>& cholesky() const { return *llt_; }
  double log_det() const;

 private:
  Matrix m_;
  std::shared_ptr<const Eigen::LLT<Matrix>> llt_;
};

// ---------------------------------------------------------------------------
// Sparse SPD
// ---------------------------------------------------------------------------

/// Stored index pairs of a sparse matrix, sorted row-major. Both triangles.
using SparsityPattern = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

/// Sparse SPD matrix. Both triangles are stored; explicitly stored zeros are
/// part of the pattern.
class SparseSpd {
 public:
  explicit SparseSpd(SparseMatrix a, double tol = kSymmetryTol);

  Eigen::Index dim() const { return m_.rows(); }
  const SparseMatrix& matrix() const { return m_; }
  SparsityPattern pattern() const;
  Eigen::Index stored() const { return m_.nonZeros(); }

  Matrix to_dense() const { return Matrix(m_); }
  DenseSpd densify() const { return DenseSpd(to_dense()); }

  using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower>;
  const Factor& cholesky() const { return *llt_; }
  double log_det() const;

 private:
  SparseMatrix m_;
  std::shared_ptr<const Factor> llt_;
};

// ---------------------------------------------------------------------------
// Eigenvalue records
// ---------------------------------------------------------------------------

/// Extreme generalized eigenvalues (lambda_min, lambda_max) of a pencil.
struct ExtremePair {
  double lam_min;
  double lam_max;

  ExtremePair(double lo, double hi);
  bool degenerate() const;
};

/// Ascending, strictly positive generalized eigenvalues.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> lams);

  std::size_t size() const { return lams_.size(); }
  const std::vector<double>& values() const& { return lams_; }
  std::vector<double> values() && { return std::move(lams_); }
  double operator[](std::size_t i) const { return lams_[i]; }
  double min() const { return lams_.front(); }
  double max() const { return lams_.back(); }
  ExtremePair extremes() const { return {min(), max()}; }

 private:
  std::vector<double> lams_;
};

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

DenseSpd validate_spd(const Matrix& a, double tol = kSymmetryTol);

/// Q diag(exp(g)) Q^T with g standard normal and Q from the QR factorization of
/// a standard normal matrix. With `unit_det` the spectrum is rescaled to
/// det = 1.
DenseSpd random_spd(Eigen::Index n, std::uint64_t seed, bool unit_det);

/// Symmetric random pattern with off-diagonal density `density` plus the
/// diagonal, values made SPD by strict diagonal dominance.
SparseSpd random_sparse_spd(Eigen::Index n, double density, std::uint64_t seed);

/// Fresh random values on a fixed symmetric pattern (diagonal is added if
/// missing).
SparseSpd random_sparse_spd_on(Eigen::Index n, const SparsityPattern& pattern,
                               std::uint64_t seed);

/// Random symmetric pattern (both triangles, diagonal included).
SparsityPattern random_pattern(Eigen::Index n, double density, std::uint64_t seed);

SparsityPattern pattern_union(const SparsityPattern& a, const SparsityPattern& b);

/// Independent stream seed for item `index` of a batch seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace spdgeo
