#include "spdgeo/geometry.hpp"
#include "spdgeo/means.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace spdgeo {
namespace {

using testing::diag;

std::vector<DenseSpd> random_set(std::size_t k, Eigen::Index n, std::uint64_t seed) {
  std::vector<DenseSpd> ys;
  for (std::size_t j = 0; j < k; ++j) ys.push_back(random_spd(n, derive_seed(seed, j), false));
  return ys;
}

double span_residual(const Matrix& m, const std::vector<DenseSpd>& ys) {
  const Eigen::Index nn = m.size();
  Matrix basis(nn, static_cast<Eigen::Index>(ys.size()));
  for (std::size_t j = 0; j < ys.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(ys[j].matrix().data(), nn);
  }
  const Vector v = Eigen::Map<const Vector>(m.data(), nn);
  const Vector coef = basis.colPivHouseholderQr().solve(v);
  return (basis * coef - v).norm() / v.norm();
}

TEST(StarVelocity, MatchesFiniteDifference) {
  for (auto p : {ExtremePair(0.5, 3.0), ExtremePair(1.0, 1.0 + 1e-3), ExtremePair(0.1, 40.0)}) {
    const StarVelocity v = star_velocity(p);
    const double h = 1e-6;
    const auto c1 = star_coefficients(p, h);
    const auto c0 = star_coefficients(p, -h);
    EXPECT_NEAR(v.a, (c1.a - c0.a) / (2 * h), 1e-6);
    EXPECT_NEAR(v.b, (c1.b - c0.b) / (2 * h), 1e-6);
  }
}

TEST(StarVelocity, DegeneratePencilMovesAlongScalarRay) {
  // Y = lam X, so a Y + b X = (a lam + b) X and the velocity is log(lam) X
  for (double lam : {0.3, 1.0, 2.0}) {
    const StarVelocity v = star_velocity(ExtremePair(lam, lam));
    EXPECT_NEAR(v.a * lam + v.b, std::log(lam), 1e-14);
  }
}

TEST(InductiveMean, SinglePoint) {
  const DenseSpd a = random_spd(4, 1, false);
  const auto r = inductive_mean({a});
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.result.matrix() - a.matrix()).norm(), 1e-12 * a.matrix().norm());
}

TEST(InductiveMean, ScalarMultiplesOfIdentity) {
  const std::vector<double> cs = {0.5, 2.0, 3.0, 7.0};
  std::vector<DenseSpd> ys;
  for (double c : cs) ys.push_back(DenseSpd(c * Matrix::Identity(3, 3)));
  const double geo = std::pow(std::accumulate(cs.begin(), cs.end(), 1.0, std::multiplies<>()),
                              1.0 / static_cast<double>(cs.size()));
  const auto r = inductive_mean(ys);
  EXPECT_LE((r.result.matrix() - geo * Matrix::Identity(3, 3)).norm() / geo, 1e-8);
}

TEST(InductiveMean, IndependentOfInitializer) {
  const auto ys = random_set(5, 5, 11);
  InductiveOptions opts;
  const auto a = inductive_mean(ys, std::nullopt, opts);
  const auto b = inductive_mean(ys, arithmetic_mean(ys), opts);
  const auto c = inductive_mean(ys, random_spd(5, 999, false), opts);
  EXPECT_LE(dist_thompson(a.result, b.result), 1e-6);
  EXPECT_LE(dist_thompson(a.result, c.result), 1e-6);
}

TEST(InductiveMean, LiesInSpan) {
  const auto ys = random_set(4, 6, 12);
  // initializer deliberately outside the span
  const auto r = inductive_mean(ys, random_spd(6, 5, false));
  EXPECT_LE(span_residual(r.result.matrix(), ys), 1e-7);
}

TEST(InductiveMean, PermutationInvariance) {
  const auto ys = random_set(5, 4, 13);
  auto perm = ys;
  std::swap(perm[0], perm[3]);
  std::swap(perm[1], perm[4]);
  InductiveOptions opts;
  EXPECT_LE(dist_thompson(inductive_mean(ys, {}, opts).result, inductive_mean(perm, {}, opts).result),
            10 * opts.tol);
}

TEST(InductiveMean, AffineEquivariance) {
  const auto ys = random_set(5, 5, 14);
  const Matrix a = testing::random_invertible(5, 15);
  std::vector<DenseSpd> ays;
  for (const auto& y : ys) ays.push_back(testing::congruence(a, y));
  const Matrix lhs = inductive_mean(ays).result.matrix();
  const Matrix rhs = a * inductive_mean(ys).result.matrix() * a.transpose();
  EXPECT_LE((lhs - rhs).norm() / rhs.norm(), 1e-6);
}

TEST(InductiveMean, JointHomogeneity) {
  const auto ys = random_set(3, 4, 16);
  const std::vector<double> cs = {0.2, 5.0, 1.7};
  std::vector<DenseSpd> scaled;
  for (std::size_t j = 0; j < ys.size(); ++j) scaled.push_back(DenseSpd(cs[j] * ys[j].matrix()));
  const double g = std::cbrt(cs[0] * cs[1] * cs[2]);
  const Matrix lhs = inductive_mean(scaled).result.matrix();
  const Matrix rhs = g * inductive_mean(ys).result.matrix();
  EXPECT_LE((lhs - rhs).norm() / rhs.norm(), 1e-7);
}

TEST(InductiveMean, PlainSequenceApproachesRefinedLimit) {
  const auto ys = random_set(5, 5, 17);
  const DenseSpd limit = inductive_mean(ys).result;
  InductiveOptions plain;
  plain.refine = false;
  double prev_err = 1e300;
  for (double tol : {1e-3, 1e-5, 1e-7}) {
    plain.tol = tol;
    const auto r = inductive_mean(ys, std::nullopt, plain);
    EXPECT_EQ(r.refine_steps, 0);
    const double err = dist_thompson(r.result, limit);
    // first-order decay in the number of steps
    EXPECT_LT(err * static_cast<double>(r.cycles), 5.0) << tol;
    EXPECT_LT(err, prev_err / 3) << tol;
    prev_err = err;
  }
}

TEST(InductiveMean, Errors) {
  EXPECT_THROW(inductive_mean(std::vector<DenseSpd>{}), InvalidArgument);
  EXPECT_THROW(inductive_mean({DenseSpd::identity(2), DenseSpd::identity(3)}), DimensionMismatch);
  InductiveOptions opts;
  opts.max_cycles = 2;
  opts.refine = false;
  EXPECT_THROW(inductive_mean(random_set(3, 4, 1), std::nullopt, opts), NoConvergence);
}

TEST(InductiveMean, SparseSamePatternStaysOnPattern) {
  const SparsityPattern p = random_pattern(100, 0.03, 4);
  std::vector<SparseSpd> ys;
  for (std::uint64_t j = 0; j < 4; ++j) ys.push_back(random_sparse_spd_on(100, p, 40 + j));
  const auto r = inductive_mean(ys);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.result.pattern(), p);
  EXPECT_EQ(sparsity_report(r.result, p).out_of_pattern, 0);

  // and agrees with the dense computation
  std::vector<DenseSpd> ds;
  for (const auto& y : ys) ds.push_back(y.densify());
  EXPECT_LE(dist_thompson(r.result.densify(), inductive_mean(ds).result), 1e-6);
}

TEST(KarcherMean, TwoPointsGiveRiemannianMidpoint) {
  const DenseSpd a = random_spd(5, 1, false);
  const DenseSpd b = random_spd(5, 2, false);
  const auto r = karcher_mean({a, b});
  EXPECT_LE(dist_riemannian(r.result, geodesic_riemannian(a, b, 0.5)), 1e-8);
}

TEST(KarcherMean, EqualInputsTakeOneIteration) {
  const DenseSpd a = random_spd(4, 3, false);
  const auto r = karcher_mean({a, a, a});
  EXPECT_EQ(r.cycles, 1);
  EXPECT_LE((r.result.matrix() - a.matrix()).norm(), 1e-12 * a.matrix().norm());
}

TEST(KarcherMean, CommutingDiagonalIsEntrywiseGeometricMean) {
  const std::vector<DenseSpd> ys = {diag({1, 2, 9}), diag({4, 0.5, 1}), diag({2, 8, 3})};
  const auto r = karcher_mean(ys);
  const Vector want = (Vector(3) << std::cbrt(8.0), std::cbrt(8.0), 3.0).finished();
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(r.result(i, i), want(i), 1e-9);
}

TEST(KarcherMean, NoConvergence) {
  KarcherOptions opts;
  opts.max_iter = 1;
  EXPECT_THROW(karcher_mean(random_set(3, 4, 2), opts), NoConvergence);
}

TEST(ArithmeticMean, Examples) {
  const DenseSpd m = arithmetic_mean({DenseSpd::identity(2), DenseSpd(3 * Matrix::Identity(2, 2))});
  EXPECT_TRUE(m.matrix().isApprox(2 * Matrix::Identity(2, 2)));
  const DenseSpd a = random_spd(3, 8, false);
  EXPECT_EQ(arithmetic_mean({a}).matrix(), a.matrix());
  const SparseSpd x = random_sparse_spd(50, 0.05, 1);
  const SparseSpd y = random_sparse_spd(50, 0.05, 2);
  EXPECT_EQ(arithmetic_mean(std::vector<SparseSpd>{x, y}).pattern(),
            pattern_union(x.pattern(), y.pattern()));
  EXPECT_THROW(arithmetic_mean({DenseSpd::identity(2), DenseSpd::identity(3)}), DimensionMismatch);
}

TEST(SparsityReport, CountsOutOfPatternEntries) {
  const SparseSpd x = random_sparse_spd(40, 0.1, 5);
  const auto self = sparsity_report(x, x.pattern());
  EXPECT_EQ(self.out_of_pattern, 0);
  EXPECT_EQ(self.nnz, x.stored());
  EXPECT_DOUBLE_EQ(self.fill_ratio, static_cast<double>(x.stored()) / 1600.0);
  SparsityPattern diag_only;
  for (Eigen::Index i = 0; i < 40; ++i) diag_only.emplace_back(i, i);
  EXPECT_EQ(sparsity_report(x, diag_only).out_of_pattern, x.stored() - 40);
  EXPECT_EQ(sparsity_report(x.densify(), diag_only).out_of_pattern, x.stored() - 40);
}

}  // namespace
}  // namespace spdgeo
