#include "dsstar/nullspace.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace dsstar;

TEST(SparseBasis, TwoByTwoColumn) {
  const NullBasis b = NullBasis::sparse(2);
  ASSERT_EQ(b.dim(), 1);
  Vector expected(4);
  expected << 1, -1, -1, 1;
  EXPECT_EQ(b.expand(Vector::Ones(1)), expected);
  EXPECT_EQ((oracle::constraint_matrix(2) * expected).norm(), 0.0);
}

TEST(SparseBasis, IntegerColumnsAnnihilatedExactly) {
  for (int n = 2; n <= 8; ++n) {
    const NullBasis b = NullBasis::sparse(n);
    const auto cols = b.sparse_columns();
    ASSERT_EQ(static_cast<Eigen::Index>(cols.size()), b.dim());
    for (const auto& col : cols) {
      std::vector<long> colsum(static_cast<std::size_t>(n), 0), rowsum(static_cast<std::size_t>(n), 0);
      for (const auto& e : col) {
        ASSERT_TRUE(e.value == 1 || e.value == -1);
        colsum[static_cast<std::size_t>(e.row / n)] += e.value;
        rowsum[static_cast<std::size_t>(e.row % n)] += e.value;
      }
      for (int r = 0; r < n; ++r) {
        EXPECT_EQ(colsum[static_cast<std::size_t>(r)], 0);
        EXPECT_EQ(rowsum[static_cast<std::size_t>(r)], 0);
      }
    }
  }
}

TEST(SparseBasis, ExplicitColumnsMatchExpand) {
  const NullBasis b = NullBasis::sparse(4);
  const Matrix F = oracle::dense_basis(b);
  const auto cols = b.sparse_columns();
  for (Eigen::Index k = 0; k < b.dim(); ++k) {
    Vector col = Vector::Zero(16);
    for (const auto& e : cols[static_cast<std::size_t>(k)]) col(e.row) = e.value;
    EXPECT_EQ(F.col(k), col);
  }
}

TEST(SparseBasis, FullColumnRank) {
  for (int n = 2; n <= 8; ++n) {
    const Matrix F = oracle::dense_basis(NullBasis::sparse(n));
    Eigen::FullPivLU<Matrix> lu(F);
    EXPECT_EQ(lu.rank(), (n - 1) * (n - 1)) << "n = " << n;
  }
}

TEST(Basis, RejectsSmallN) {
  EXPECT_THROW(NullBasis::sparse(1), std::invalid_argument);
  EXPECT_THROW(NullBasis::orthonormal(1), std::invalid_argument);
  EXPECT_THROW(NullBasis::orthonormal(3).sparse_columns(), std::logic_error);
}

TEST(OrthonormalBasis, TwoByTwo) {
  const NullBasis b = NullBasis::orthonormal(2);
  const Matrix& U = b.factor();
  EXPECT_NEAR(std::abs(U(0, 0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(U(0, 0), -U(1, 0), 1e-15);
  const Vector f = b.expand(Vector::Ones(1));
  EXPECT_NEAR(f.norm(), 1.0, 1e-15);
  Vector sparse(4);
  sparse << 1, -1, -1, 1;
  EXPECT_NEAR(std::abs(f.dot(sparse)), 2.0, 1e-14);
}

TEST(OrthonormalBasis, AnnihilatedAndOrthonormal) {
  for (int n = 2; n <= 8; ++n) {
    const Matrix F = oracle::dense_basis(NullBasis::orthonormal(n));
    EXPECT_LE((oracle::constraint_matrix(n) * F).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix G = F.transpose() * F;
    EXPECT_LE((G - Matrix::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OrthonormalBasis, ReshapeMatchesDenseKronecker) {
  std::mt19937_64 rng(1);
  const NullBasis b = NullBasis::orthonormal(3);
  const Matrix K = oracle::kron(b.factor(), b.factor());
  for (int t = 0; t < 5; ++t) {
    const Vector v = oracle::random_vector(4, rng);
    EXPECT_LE((b.expand(v) - K * v).norm(), 1e-12);
    const Vector x = oracle::random_vector(9, rng);
    EXPECT_LE((b.restrict_to(x) - K.transpose() * x).norm(), 1e-12);
  }
}

TEST(ReducedOperator, ZeroAndIdentityCases) {
  std::mt19937_64 rng(2);
  const int n = 4;
  const NullBasis b = NullBasis::orthonormal(n);
  const Vector v = oracle::random_vector(b.dim(), rng);
  const QapInstance zero = QapInstance::dense(Matrix::Zero(16, 16), Vector::Zero(16));
  EXPECT_EQ(reduced_operator(zero, Vector::Zero(n), Vector::Zero(n), b)(v).norm(), 0.0);
  const QapInstance eye = QapInstance::dense(Matrix::Identity(16, 16), Vector::Zero(16));
  EXPECT_LE((reduced_operator(eye, Vector::Zero(n), Vector::Zero(n), b)(v) - v).norm(), 1e-12);
}

TEST(ReducedOperator, MatchesDenseAssembly) {
  std::mt19937_64 rng(3);
  const int n = 4;
  const auto prob = oracle::random_problem(n, rng, false);
  const Vector d1 = oracle::random_vector(n, rng), d2 = oracle::random_vector(n, rng);
  const QapInstance dense = QapInstance::dense(prob.W, prob.c);
  const Matrix A = oracle::random_matrix(n, n, rng), B = oracle::random_matrix(n, n, rng);
  const QapInstance kb = QapInstance::koopmans_beckmann(A, B, Vector::Zero(n * n));
  for (const auto kind : {BasisKind::sparse_differences, BasisKind::orthonormal}) {
    const NullBasis b = kind == BasisKind::sparse_differences ? NullBasis::sparse(n) : NullBasis::orthonormal(n);
    const Matrix F = oracle::dense_basis(b);
    const Matrix shift = oracle::dense_z(d1.asDiagonal(), d2.asDiagonal(), Vector::Zero(n * n));
    const Matrix ref_dense = F.transpose() * (prob.W - shift) * F;
    const Matrix kbW = 0.5 * (oracle::kron(B.transpose(), A) + oracle::kron(B, A.transpose()));
    const Matrix ref_kb = F.transpose() * (kbW - shift) * F;
    const LinearOperator op_dense = reduced_operator(dense, d1, d2, b);
    const LinearOperator op_kb = reduced_operator(kb, d1, d2, b);
    for (int t = 0; t < 5; ++t) {
      const Vector v = oracle::random_vector(b.dim(), rng);
      EXPECT_LE((op_dense(v) - ref_dense * v).norm(), 1e-10);
      EXPECT_LE((op_kb(v) - ref_kb * v).norm(), 1e-10);
    }
  }
}

TEST(ReducedOperator, SizeMismatchThrows) {
  const QapInstance inst = QapInstance::dense(Matrix::Zero(9, 9), Vector::Zero(9));
  EXPECT_THROW(reduced_operator(inst, Vector::Zero(3), Vector::Zero(3), NullBasis::orthonormal(4)), std::invalid_argument);
  EXPECT_THROW(reduced_operator(inst, Vector::Zero(2), Vector::Zero(3), NullBasis::orthonormal(3)), std::invalid_argument);
}

TEST(AdjointSums, Examples) {
  const NullBasis b = NullBasis::sparse(2);
  const AdjointSums zero = adjoint_sums(b, Vector::Zero(1));
  EXPECT_EQ(zero.column_sums.norm(), 0.0);
  EXPECT_EQ(zero.row_sums.norm(), 0.0);
  const AdjointSums one = adjoint_sums(b, Vector::Ones(1));
  EXPECT_EQ(one.column_sums, Vector::Constant(2, 2.0));
  EXPECT_EQ(one.row_sums, Vector::Constant(2, 2.0));
}

TEST(AdjointSums, NormIdentityAndSignInvariance) {
  std::mt19937_64 rng(4);
  for (const auto& b : {NullBasis::sparse(4), NullBasis::orthonormal(4)}) {
    const Vector u = oracle::random_vector(b.dim(), rng);
    const AdjointSums s = adjoint_sums(b, u);
    const double norm2 = b.expand(u).squaredNorm();
    EXPECT_NEAR(s.column_sums.sum(), norm2, 1e-12);
    EXPECT_NEAR(s.row_sums.sum(), norm2, 1e-12);
    const AdjointSums neg = adjoint_sums(b, -u);
    EXPECT_EQ(neg.column_sums, s.column_sums);
    EXPECT_EQ(neg.row_sums, s.row_sums);
  }
}

TEST(AdjointSums, ColumnAndRowOrientation) {
  std::mt19937_64 rng(5);
  const NullBasis b = NullBasis::orthonormal(3);
  const Vector u = oracle::random_vector(b.dim(), rng);
  const Vector fu = b.expand(u);
  Matrix V(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) V(i, j) = fu(j * 3 + i) * fu(j * 3 + i);
  const AdjointSums s = adjoint_sums(b, u);
  EXPECT_LE((s.column_sums - V.colwise().sum().transpose()).norm(), 1e-14);
  EXPECT_LE((s.row_sums - V.rowwise().sum()).norm(), 1e-14);
}

// Both kinds span the same subspace, so their PSD verdicts coincide.
TEST(BasisProperty, PsdVerdictAgreesAcrossKinds) {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 6; ++n)
    for (int t = 0; t < 5; ++t) {
      const auto prob = oracle::random_problem(n, rng, false);
      const Vector d1 = 3.0 * oracle::random_vector(n, rng), d2 = 3.0 * oracle::random_vector(n, rng);
      const QapInstance inst = QapInstance::dense(prob.W, prob.c);
      const auto smallest = [&](const NullBasis& b) {
        const LinearOperator op = reduced_operator(inst, d1, d2, b);
        Matrix T(b.dim(), b.dim());
        for (Eigen::Index k = 0; k < b.dim(); ++k) T.col(k) = op(Vector::Unit(b.dim(), k));
        return oracle::symmetric_eigenvalues(T)(0);
      };
      const double s = smallest(NullBasis::sparse(n));
      const double o = smallest(NullBasis::orthonormal(n));
      if (std::abs(o) > 1e-9) {
        EXPECT_EQ(s > 0.0, o > 0.0);
      }
    }
}
