#include "spdgeo/geneig.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

namespace spdgeo {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << a << " vs " << b;
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

Matrix whiten(const DenseSpd& x, const DenseSpd& y) {
  require_same_dim(x.dim(), y.dim());
  const auto l = x.cholesky().matrixL();
  Matrix c = l.solve(y.matrix());
  c = l.solve(c.transpose()).transpose();
  return 0.5 * (c + c.transpose());
}

Spectrum full_spectrum(const DenseSpd& x, const DenseSpd& y) {
  const Matrix c = whiten(x, y);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw FactorizationFailure("symmetric eigensolver failed on whitened pencil");
  }
  const Vector& ev = es.eigenvalues();
  return Spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

ExtremePair extreme_pair_dense(const DenseSpd& x, const DenseSpd& y) {
  return full_spectrum(x, y).extremes();
}

SpdOperator make_operator(const DenseSpd& a) {
  SpdOperator op;
  op.n = a.dim();
  op.apply = [a](const Vector& in, Vector& out) { out.noalias() = a.matrix() * in; };
  op.solve = [a](const Vector& in, Vector& out) { out = a.cholesky().solve(in); };
  return op;
}

SpdOperator make_operator(const SparseSpd& a) {
  SpdOperator op;
  op.n = a.dim();
  op.apply = [a](const Vector& in, Vector& out) { out.noalias() = a.matrix() * in; };
  op.solve = [a](const Vector& in, Vector& out) {
    out = a.cholesky().solve(in);
    if (a.cholesky().info() != Eigen::Success) {
      throw SolveFailure("sparse Cholesky solve failed");
    }
  };
  return op;
}

double lanczos_max(const SpdOperator& x, const SpdOperator& y, const KrylovOptions& opts) {
  require_same_dim(x.n, y.n);
  const Eigen::Index n = x.n;
  if (n < 1) throw InvalidArgument("lanczos: empty operator");
  if (!(opts.tol > 0.0)) throw InvalidArgument("lanczos: tol must be positive");
  const long max_iter = opts.max_iter > 0 ? opts.max_iter : 5 * static_cast<long>(n);
  const Eigen::Index max_dim = std::min<Eigen::Index>(n, max_iter);

  auto solve_x = [&](const Vector& in, Vector& out) {
    try {
      x.solve(in, out);
    } catch (const SolveFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw SolveFailure(std::string("X solve failed: ") + e.what());
    }
    if (out.size() != n || !out.allFinite()) {
      throw SolveFailure("X solve returned non-finite values");
    }
  };

  // Basis Q (X-orthonormal) and XQ for reorthogonalization.
  Matrix q(n, max_dim);
  Matrix xq(n, max_dim);
  std::vector<double> alpha;
  std::vector<double> beta;

  Vector v(n);
  {
    std::mt19937_64 rng(opts.start_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  }
  Vector xv(n), yv(n), w(n), xw(n);
  x.apply(v, xv);
  double nrm = std::sqrt(v.dot(xv));
  v /= nrm;
  xv /= nrm;

  double theta = 0.0;
  for (Eigen::Index j = 0; j < max_dim; ++j) {
    q.col(j) = v;
    xq.col(j) = xv;
    y.apply(v, yv);
    solve_x(yv, w);
    const double a = v.dot(yv);
    alpha.push_back(a);
    // Full reorthogonalization in the X inner product, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector coeffs = xq.leftCols(j + 1).transpose() * w;
      w.noalias() -= q.leftCols(j + 1) * coeffs;
    }
    x.apply(w, xw);
    const double b = std::sqrt(std::max(0.0, w.dot(xw)));

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Vector diag = Eigen::Map<const Vector>(alpha.data(), m);
    Vector sub = Eigen::Map<const Vector>(beta.data(), m - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) {
      throw FactorizationFailure("tridiagonal eigensolver failed");
    }
    theta = tri.eigenvalues()(m - 1);
    const double last = tri.eigenvectors()(m - 1, m - 1);
    const double residual = std::abs(b * last);
    if (residual <= opts.tol * std::abs(theta) || m == n) {
      return theta;
    }
    if (b <= 1e-14 * std::abs(theta)) {
      // Invariant subspace; the Ritz values are exact.
      return theta;
    }
    beta.push_back(b);
    v = w / b;
    xv = xw / b;
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge in " << max_dim << " iterations (last estimate " << theta
      << ")";
  throw NoConvergence(msg.str(), static_cast<long>(max_dim));
}

ExtremePair extreme_pair_krylov(const SpdOperator& x, const SpdOperator& y,
                                const KrylovOptions& opts) {
  const double hi = lanczos_max(x, y, opts);
  const double inv_lo = lanczos_max(y, x, opts);
  double lo = 1.0 / inv_lo;
  // Both estimates converge from inside the spectrum; clamp tiny inversions.
  if (lo > hi && lo - hi <= 10 * opts.tol * hi) lo = hi;
  return ExtremePair(lo, hi);
}

}  // namespace spdgeo
