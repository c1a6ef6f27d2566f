#include "spdgeo/core.hpp"
#include "spdgeo/io.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace spdgeo {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("spdgeo_core_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(ValidateSpd, AcceptsIdentity) {
  const DenseSpd a = validate_spd(Matrix::Identity(3, 3));
  EXPECT_EQ(a.dim(), 3);
  EXPECT_DOUBLE_EQ(a.log_det(), 0.0);
}

TEST(ValidateSpd, RejectsNegativePivot) {
  Matrix a(2, 2);
  a << 1, 0, 0, -1;
  EXPECT_THROW(validate_spd(a), NotPositiveDefinite);
}

TEST(ValidateSpd, RejectsIndefinite) {
  // eigenvalues 3 and -1
  Matrix a(2, 2);
  a << 1, 2, 2, 1;
  EXPECT_THROW(validate_spd(a), NotPositiveDefinite);
}

TEST(ValidateSpd, RejectsAsymmetry) {
  Matrix a(2, 2);
  a << 2, 1, 1 + 1e-9, 2;
  EXPECT_THROW(validate_spd(a), NotSymmetric);
  // within the relative tolerance the matrix is accepted and symmetrized
  a(1, 0) = 1 + 1e-13;
  const DenseSpd s = validate_spd(a);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(ValidateSpd, RejectsNonSquareAndSingular) {
  EXPECT_THROW(validate_spd(Matrix::Identity(2, 3)), DimensionMismatch);
  Matrix a(2, 2);
  a << 1, 1, 1, 1;
  EXPECT_THROW(validate_spd(a), NotPositiveDefinite);
}

TEST(RandomSpd, OneByOneUnitDetIsOne) {
  const DenseSpd a = random_spd(1, 42, true);
  EXPECT_NEAR(a(0, 0), 1.0, 1e-15);
}

TEST(RandomSpd, UnitDeterminant) {
  const DenseSpd a = random_spd(3, 5, true);
  EXPECT_NEAR(a.matrix().determinant(), 1.0, 1e-10);
}

TEST(RandomSpd, DeterministicPerSeed) {
  const DenseSpd a = random_spd(6, 99, false);
  const DenseSpd b = random_spd(6, 99, false);
  EXPECT_TRUE((a.matrix().array() == b.matrix().array()).all());
  const DenseSpd c = random_spd(6, 100, false);
  EXPECT_FALSE((a.matrix().array() == c.matrix().array()).all());
}

TEST(RandomSpd, PropertyValidAndUnitDet) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 50);
    const DenseSpd a = random_spd(n, seed, true);
    // re-validate from the raw entries
    EXPECT_NO_THROW(validate_spd(a.matrix()));
    EXPECT_LE(std::abs(a.log_det()), 1e-9) << "seed " << seed << " n " << n;
  }
}

TEST(RandomSpd, RejectsZeroDimension) { EXPECT_THROW(random_spd(0, 1, false), InvalidArgument); }

TEST(SparseSpd, RejectsAsymmetricPattern) {
  SparseMatrix a(3, 3);
  a.insert(0, 0) = 2;
  a.insert(1, 1) = 2;
  a.insert(2, 2) = 2;
  a.insert(0, 1) = 0.5;
  EXPECT_THROW(SparseSpd{a}, NotSymmetric);
}

TEST(SparseSpd, RejectsIndefinite) {
  SparseMatrix a(2, 2);
  a.insert(0, 0) = 1;
  a.insert(1, 1) = 1;
  a.insert(0, 1) = 2;
  a.insert(1, 0) = 2;
  EXPECT_THROW(SparseSpd{a}, NotPositiveDefinite);
}

TEST(SparseSpd, LogDetMatchesDense) {
  const SparseSpd s = random_sparse_spd(40, 0.1, 3);
  EXPECT_NEAR(s.log_det(), s.densify().log_det(), 1e-10);
  const auto p = s.pattern();
  EXPECT_EQ(static_cast<Eigen::Index>(p.size()), s.stored());
}

TEST(SparseSpd, RandomOnPatternKeepsPattern) {
  const SparsityPattern p = random_pattern(60, 0.05, 11);
  const SparseSpd a = random_sparse_spd_on(60, p, 1);
  const SparseSpd b = random_sparse_spd_on(60, p, 2);
  EXPECT_EQ(a.pattern(), p);
  EXPECT_EQ(b.pattern(), p);
  EXPECT_NE(a.matrix().coeff(0, 0), b.matrix().coeff(0, 0));
}

// --- I/O --------------------------------------------------------------------

TEST(ReadMatrix, DenseJson) {
  std::istringstream in(R"({"n":2,"rows":[[1,0],[0,1]]})");
  const AnyMatrix m = parse_matrix(in);
  ASSERT_TRUE(std::holds_alternative<DenseSpd>(m));
  EXPECT_TRUE(std::get<DenseSpd>(m).matrix().isIdentity(0.0));
}

TEST(ReadMatrix, MatrixMarketDiagonal) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 3\n1 1 1\n2 2 2\n3 3 3\n");
  const AnyMatrix m = parse_matrix(in);
  ASSERT_TRUE(std::holds_alternative<SparseSpd>(m));
  const auto& s = std::get<SparseSpd>(m);
  EXPECT_EQ(s.stored(), 3);
  EXPECT_EQ(s.to_dense(), Matrix(Vector::LinSpaced(3, 1, 3).asDiagonal()));
}

TEST(ReadMatrix, MatrixMarketExpandsLowerTriangle) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 3\n1 1 2\n2 1 0.5\n2 2 2\n");
  const auto s = std::get<SparseSpd>(parse_matrix(in));
  EXPECT_EQ(s.stored(), 4);
  EXPECT_EQ(s.matrix().coeff(0, 1), 0.5);
}

TEST(ReadMatrix, MalformedInputs) {
  for (const char* text : {
           "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n",
           "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n",
           "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n",
           "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 1\n1 1 1\n2 2 1\n",
           "{\"n\":2,\"rows\":[[1,0]]}",
           "{\"n\":2,\"rows\":[[1,0],[0,\"x\"]]}",
           "{\"rows\":[[1]]}",
           "not json",
       }) {
    std::istringstream in(text);
    EXPECT_THROW(parse_matrix(in), ParseError) << text;
  }
}

TEST(ReadMatrix, ValidationErrorsPropagate) {
  std::istringstream in(R"({"n":2,"rows":[[1,2],[2,1]]})");
  EXPECT_THROW(parse_matrix(in), NotPositiveDefinite);
  EXPECT_THROW(read_matrix("/nonexistent/file.json"), IoError);
}

TEST(WriteMatrix, RoundTripIsExact) {
  TempDir dir;
  // property: write then read is the identity for any stored double
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DenseSpd a = random_spd(1 + static_cast<Eigen::Index>(seed % 7), seed, seed % 2);
    write_matrix(a, dir.path() / "a.json");
    const auto b = std::get<DenseSpd>(read_matrix(dir.path() / "a.json"));
    EXPECT_TRUE((a.matrix().array() == b.matrix().array()).all()) << "seed " << seed;

    const SparseSpd s = random_sparse_spd(30, 0.1, seed);
    write_matrix(s, dir.path() / "s.mtx");
    const auto t = std::get<SparseSpd>(read_matrix(dir.path() / "s.mtx"));
    EXPECT_EQ(s.pattern(), t.pattern());
    EXPECT_TRUE((s.to_dense().array() == t.to_dense().array()).all()) << "seed " << seed;
  }
}

TEST(WriteMatrix, SparseDiagonalRoundTrip) {
  TempDir dir;
  SparseMatrix d(3, 3);
  d.insert(0, 0) = 1;
  d.insert(1, 1) = 2;
  d.insert(2, 2) = 4;
  const SparseSpd s(d);
  write_matrix(s, dir.path() / "d.mtx");
  const auto t = std::get<SparseSpd>(read_matrix(dir.path() / "d.mtx"));
  EXPECT_EQ(t.pattern(), s.pattern());
  EXPECT_EQ(t.to_dense(), s.to_dense());
}

TEST(WriteMatrix, ExplicitZerosStayInPattern) {
  TempDir dir;
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 3\n1 1 2\n2 1 0\n2 2 2\n");
  const auto s = std::get<SparseSpd>(parse_matrix(in));
  write_matrix(s, dir.path() / "z.mtx");
  EXPECT_EQ(std::get<SparseSpd>(read_matrix(dir.path() / "z.mtx")).stored(), 4);
}

TEST(WriteMatrix, UnwritablePath) {
  EXPECT_THROW(write_matrix(DenseSpd::identity(2), "/nonexistent-dir/x.json"), IoError);
}

}  // namespace
}  // namespace spdgeo
