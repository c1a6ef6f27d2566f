#include "spdgeo/means.hpp"

#include "spdgeo/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spdgeo {

StarVelocity star_velocity(const ExtremePair& p) {
  const double lm = p.lam_min;
  const double d = std::log(p.lam_max / lm);
  // d / expm1(d) -> 1 as the pencil degenerates to a multiple of X.
  const double ratio = d > 0.0 ? d / std::expm1(d) : 1.0;
  return {ratio / lm, std::log(lm) - ratio};
}

namespace {

struct DenseKind {
  using M = DenseSpd;
  const std::vector<DenseSpd>& ys;
  KrylovOptions krylov;

  ExtremePair pair(const DenseSpd& x, std::size_t j) const { return extreme_pair_dense(x, ys[j]); }
  DenseSpd combine(double a, std::size_t j, double b, const DenseSpd& x) const {
    return DenseSpd(a * ys[j].matrix() + b * x.matrix());
  }
  DenseSpd span(const std::vector<double>& w) const {
    Matrix acc = Matrix::Zero(ys[0].dim(), ys[0].dim());
    for (std::size_t j = 0; j < ys.size(); ++j) acc += w[j] * ys[j].matrix();
    return DenseSpd(acc);
  }
  double dist(const DenseSpd& a, const DenseSpd& b) const { return dist_thompson(a, b); }
};

struct SparseKind {
  using M = SparseSpd;
  const std::vector<SparseSpd>& ys;
  KrylovOptions krylov;
  std::vector<SpdOperator> y_ops;

  SparseKind(const std::vector<SparseSpd>& in, KrylovOptions k) : ys(in), krylov(k) {
    for (const auto& y : ys) y_ops.push_back(make_operator(y));
  }
  ExtremePair pair(const SparseSpd& x, std::size_t j) const {
    return extreme_pair_krylov(make_operator(x), y_ops[j], krylov);
  }
  SparseSpd combine(double a, std::size_t j, double b, const SparseSpd& x) const {
    return SparseSpd(SparseMatrix(a * ys[j].matrix() + b * x.matrix()));
  }
  SparseSpd span(const std::vector<double>& w) const {
    SparseMatrix acc = w[0] * ys[0].matrix();
    for (std::size_t j = 1; j < ys.size(); ++j) acc = acc + w[j] * ys[j].matrix();
    return SparseSpd(std::move(acc));
  }
  double dist(const SparseSpd& a, const SparseSpd& b) const {
    return dist_thompson(a, b, krylov);
  }
};

template <typename Kind>
void check_inputs(const std::vector<typename Kind::M>& ys,
                  const std::optional<typename Kind::M>& x1, const InductiveOptions& opts) {
  if (ys.empty()) throw InvalidArgument("inductive_mean needs at least one matrix");
  if (!(opts.tol > 0.0)) throw InvalidArgument("inductive_mean: tol must be positive");
  for (const auto& y : ys) {
    if (y.dim() != ys[0].dim()) throw DimensionMismatch("inductive_mean: dimension mismatch");
  }
  if (x1 && x1->dim() != ys[0].dim()) {
    throw DimensionMismatch("inductive_mean: initializer dimension mismatch");
  }
}

/// One refinement step; nullopt when the update leaves the cone.
template <typename Kind>
std::optional<typename Kind::M> refine_step(const Kind& kind, const typename Kind::M& x) {
  const std::size_t k = kind.ys.size();
  std::vector<double> w(k);
  double denom = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const StarVelocity v = star_velocity(kind.pair(x, j));
    w[j] = v.a;
    denom -= v.b;
  }
  if (!(denom > 0.0)) return std::nullopt;
  for (double& c : w) c /= denom;
  try {
    return kind.span(w);
  } catch (const NotPositiveDefinite&) {
    return std::nullopt;
  }
}

template <typename Kind>
MeanReport<typename Kind::M> run_inductive(const Kind& kind,
                                           const std::optional<typename Kind::M>& x1,
                                           const InductiveOptions& opts) {
  using M = typename Kind::M;
  const std::size_t k = kind.ys.size();
  M x = x1 ? *x1 : kind.ys[0];
  long i = 1;
  long cycles = 0;
  long refine_steps = 0;
  double handoff = opts.refine ? std::max(opts.handoff_gap, opts.tol) : opts.tol;
  double gap = 0.0;

  while (cycles < opts.max_cycles) {
    const M start = x;
    for (std::size_t s = 0; s < k; ++s, ++i) {
      const std::size_t j = static_cast<std::size_t>((i - 1) % static_cast<long>(k));
      const auto [a, b] = star_coefficients(kind.pair(x, j), 1.0 / static_cast<double>(i + 1));
      x = kind.combine(a, j, b, x);
    }
    ++cycles;
    gap = kind.dist(start, x);
    if (gap <= opts.tol) {
      return {x, cycles, refine_steps, gap, true};
    }
    if (gap > handoff) continue;

    // Solve for the limit directly from the current iterate.
    M z = x;
    double prev = gap;
    int rises = 0;
    for (long step = 0; step < opts.max_refine_steps; ++step) {
      auto next = refine_step(kind, z);
      if (!next) break;
      ++refine_steps;
      const double g = kind.dist(z, *next);
      z = std::move(*next);
      if (g <= opts.tol) {
        return {z, cycles, refine_steps, g, true};
      }
      rises = g > prev ? rises + 1 : 0;
      if (rises >= 3) break;
      prev = g;
    }
    // Refinement did not settle; let the sequence get closer first.
    handoff = std::max(handoff * 1e-2, opts.tol);
  }
  std::ostringstream msg;
  msg << "inductive mean did not converge in " << opts.max_cycles << " cycles (last gap " << gap
      << ")";
  throw NoConvergence(msg.str(), cycles);
}

}  // namespace

MeanReport<DenseSpd> inductive_mean(const std::vector<DenseSpd>& ys,
                                    const std::optional<DenseSpd>& x1,
                                    const InductiveOptions& opts) {
  check_inputs<DenseKind>(ys, x1, opts);
  return run_inductive(DenseKind{ys, opts.krylov}, x1, opts);
}

MeanReport<SparseSpd> inductive_mean(const std::vector<SparseSpd>& ys,
                                     const std::optional<SparseSpd>& x1,
                                     const InductiveOptions& opts) {
  check_inputs<SparseKind>(ys, x1, opts);
  return run_inductive(SparseKind(ys, opts.krylov), x1, opts);
}

MeanReport<DenseSpd> karcher_mean(const std::vector<DenseSpd>& ys, const KarcherOptions& opts) {
  if (ys.empty()) throw InvalidArgument("karcher_mean needs at least one matrix");
  if (!(opts.tol > 0.0)) throw InvalidArgument("karcher_mean: tol must be positive");
  const Eigen::Index n = ys[0].dim();
  DenseSpd x = arithmetic_mean(ys);
  const double inv_k = 1.0 / static_cast<double>(ys.size());
  double norm = 0.0;
  for (long it = 1; it <= opts.max_iter; ++it) {
    // Whitening with the Cholesky factor L of X gives the same update as the
    // symmetric square root: both differ by an orthogonal factor that commutes
    // through log and exp.
    Matrix mean_log = Matrix::Zero(n, n);
    for (const auto& y : ys) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(whiten(x, y));
      if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
        throw FactorizationFailure("karcher_mean: eigensolver failed");
      }
      const Matrix& v = es.eigenvectors();
      mean_log += v * es.eigenvalues().array().log().matrix().asDiagonal() * v.transpose();
    }
    mean_log *= inv_k;
    mean_log = 0.5 * (mean_log + mean_log.transpose());
    norm = mean_log.norm();
    if (norm <= opts.tol) {
      return {x, it, 0, norm, true};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(mean_log);
    const Vector half = (0.5 * es.eigenvalues().array()).exp();
    const Matrix b = (x.cholesky().matrixL() * es.eigenvectors()) * half.asDiagonal();
    x = DenseSpd(b * b.transpose());
  }
  std::ostringstream msg;
  msg << "karcher_mean did not converge in " << opts.max_iter << " iterations (last norm " << norm
      << ")";
  throw NoConvergence(msg.str(), opts.max_iter);
}

DenseSpd arithmetic_mean(const std::vector<DenseSpd>& ys) {
  if (ys.empty()) throw InvalidArgument("arithmetic_mean needs at least one matrix");
  Matrix acc = Matrix::Zero(ys[0].dim(), ys[0].dim());
  for (const auto& y : ys) {
    if (y.dim() != ys[0].dim()) throw DimensionMismatch("arithmetic_mean: dimension mismatch");
    acc += y.matrix();
  }
  return DenseSpd(acc / static_cast<double>(ys.size()));
}

SparseSpd arithmetic_mean(const std::vector<SparseSpd>& ys) {
  if (ys.empty()) throw InvalidArgument("arithmetic_mean needs at least one matrix");
  SparseMatrix acc = ys[0].matrix();
  for (std::size_t j = 1; j < ys.size(); ++j) {
    if (ys[j].dim() != ys[0].dim()) {
      throw DimensionMismatch("arithmetic_mean: dimension mismatch");
    }
    acc = acc + ys[j].matrix();
  }
  acc *= 1.0 / static_cast<double>(ys.size());
  return SparseSpd(std::move(acc));
}

namespace {

constexpr double kZero = 1e-12;

bool in_pattern(const SparsityPattern& sorted, Eigen::Index i, Eigen::Index j) {
  return std::binary_search(sorted.begin(), sorted.end(), std::make_pair(i, j));
}

SparsityPattern sorted_copy(const SparsityPattern& p) {
  SparsityPattern s = p;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

SparsityReport sparsity_report(const SparseSpd& m, const SparsityPattern& reference) {
  const SparsityPattern ref = sorted_copy(reference);
  SparsityReport rep;
  const SparseMatrix& a = m.matrix();
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      if (std::abs(it.value()) <= kZero) continue;
      ++rep.nnz;
      if (!in_pattern(ref, it.row(), it.col())) ++rep.out_of_pattern;
    }
  }
  const double n = static_cast<double>(m.dim());
  rep.fill_ratio = static_cast<double>(rep.nnz) / (n * n);
  return rep;
}

SparsityReport sparsity_report(const DenseSpd& m, const SparsityPattern& reference) {
  const SparsityPattern ref = sorted_copy(reference);
  SparsityReport rep;
  const Matrix& a = m.matrix();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) <= kZero) continue;
      ++rep.nnz;
      if (!in_pattern(ref, i, j)) ++rep.out_of_pattern;
    }
  }
  const double n = static_cast<double>(m.dim());
  rep.fill_ratio = static_cast<double>(rep.nnz) / (n * n);
  return rep;
}

}  // namespace spdgeo
