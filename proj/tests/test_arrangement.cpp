#include "dsstar/arrangement.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

using namespace dsstar;

namespace {

PermutationMatrix random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return PermutationMatrix(std::move(p));
}

// Direct sum over items and cells of X_ij X_kl |c d_ik - dp_jl|.
double quadruple_loop(const ArrangementProblem& p, const Matrix& X) {
  const int n = p.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += X(i, j) * X(k, l) * std::abs(p.c_scale * p.d(i, k) - p.dp(j, l));
  return s;
}

double brute_best(const ArrangementProblem& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : oracle::all_permutations(p.n()))
    best = std::min(best, arrangement_objective(p, PermutationMatrix(q)));
  return best;
}

}  // namespace

TEST(BuildArrangement, SingleItemIsTrivial) {
  const Arrangement a = build_arrangement(Matrix::Constant(1, 3, 0.5), 1, 1);
  EXPECT_EQ(a.instance.dense_w(), Matrix::Zero(1, 1));
  EXPECT_EQ(arrangement_objective(a.problem, PermutationMatrix::identity(1)), 0.0);
}

TEST(BuildArrangement, GridMismatchThrows) {
  EXPECT_THROW(build_arrangement(Matrix::Zero(5, 3), 2, 3), std::invalid_argument);
  EXPECT_THROW(build_arrangement(Matrix::Zero(6, 3), 0, 6), std::invalid_argument);
}

TEST(BuildArrangement, DistancesAndScale) {
  Matrix f(4, 1);
  f << 0.0, 1.0, 3.0, 6.0;
  const Arrangement a = build_arrangement(f, 2, 2);
  EXPECT_DOUBLE_EQ(a.problem.d(0, 3), 6.0);
  EXPECT_DOUBLE_EQ(a.problem.dp(0, 3), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(a.problem.dp(1, 2), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(a.problem.dp(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(a.problem.dp(0, 2), 1.0);
  // Off-diagonal means: d has pairs 1,3,6,2,5,3 -> 20/6; dp has 1,1,r2,r2,1,1.
  EXPECT_NEAR(a.problem.c_scale, ((4.0 + 2.0 * std::sqrt(2.0)) / 6.0) / (20.0 / 6.0), 1e-15);
  EXPECT_EQ(a.instance.c().norm(), 0.0);
}

TEST(BuildArrangement, IdenticalFeaturesMakeEveryAssignmentEqual) {
  const Arrangement a = build_arrangement(Matrix::Constant(4, 3, 0.25), 2, 2);
  EXPECT_EQ(a.problem.c_scale, 1.0);
  const double ref = a.problem.dp.sum();
  for (const auto& q : oracle::all_permutations(4))
    EXPECT_NEAR(arrangement_objective(a.problem, PermutationMatrix(q)), ref, 1e-12);
}

TEST(ArrangementObjective, MatchesQuadrupleLoop) {
  Matrix f(4, 1);
  f << 0.3, -1.2, 2.0, 0.7;
  const Arrangement a = build_arrangement(f, 2, 2);
  for (const auto& q : oracle::all_permutations(4)) {
    const PermutationMatrix p(q);
    const double direct = quadruple_loop(a.problem, p.to_matrix());
    EXPECT_NEAR(arrangement_objective(a.problem, p), direct, 1e-9);
    EXPECT_NEAR(eval_energy(a.instance, p), direct, 1e-9);
  }
}

TEST(ArrangementObjective, IsometricPlacementIsZero) {
  // Items sit exactly on the grid coordinates of cells 2, 0, 3, 1.
  Matrix f(4, 2);
  f << 1, 0, 0, 0, 1, 1, 0, 1;
  const Arrangement a = build_arrangement(f, 2, 2);
  EXPECT_NEAR(a.problem.c_scale, 1.0, 1e-15);
  EXPECT_NEAR(arrangement_objective(a.problem, PermutationMatrix({1, 3, 0, 2})), 0.0, 1e-12);
  EXPECT_GT(arrangement_objective(a.problem, PermutationMatrix({3, 1, 0, 2})), 0.1);
}

TEST(ArrangementObjective, ScaleInvariant) {
  const Matrix f = random_colors(6, 1);
  const Arrangement a = build_arrangement(f, 2, 3), b = build_arrangement(2.0 * f, 2, 3);
  for (const auto& q : oracle::all_permutations(6)) {
    const PermutationMatrix p(q);
    EXPECT_NEAR(arrangement_objective(a.problem, p), arrangement_objective(b.problem, p), 1e-9);
  }
}

TEST(ArrangementObjective, NormalisedByPairCount) {
  const Arrangement a = build_arrangement(random_colors(6, 2), 3, 2);
  const PermutationMatrix p = PermutationMatrix::identity(6);
  const Matrix& dp = a.problem.dp;
  const double mean = dp.sum() / 30.0;
  EXPECT_NEAR(normalized_arrangement_objective(a.problem, p), arrangement_objective(a.problem, p) / (36.0 * mean), 1e-15);
}

TEST(ArrangementProperty, WeightsNonnegativeSymmetricAndConsistent) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Arrangement a = build_arrangement(random_colors(6, s), 2, 3);
    const Matrix W = a.instance.dense_w();
    EXPECT_GE(W.minCoeff(), 0.0);
    EXPECT_EQ(W, Matrix(W.transpose()));
    std::mt19937_64 rng(s);
    for (int t = 0; t < 20; ++t) {
      const PermutationMatrix p = random_perm(6, rng);
      EXPECT_NEAR(arrangement_objective(a.problem, p), eval_energy(a.instance, p), 1e-9);
    }
  }
}

TEST(ArrangementProperty, RelabellingInvariance) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Matrix f = random_colors(6, 100 + static_cast<std::uint64_t>(t));
    const PermutationMatrix sigma = random_perm(6, rng), p = random_perm(6, rng);
    // Item r of the relabelled list is item sigma[r] of the original.
    Matrix g(6, 3);
    std::vector<int> inverse(6);
    for (int r = 0; r < 6; ++r) {
      g.row(r) = f.row(sigma[r]);
      inverse[static_cast<std::size_t>(sigma[r])] = r;
    }
    std::vector<int> q(6);
    for (int j = 0; j < 6; ++j) q[static_cast<std::size_t>(j)] = inverse[static_cast<std::size_t>(p[j])];
    EXPECT_NEAR(arrangement_objective(build_arrangement(f, 2, 3).problem, p),
                arrangement_objective(build_arrangement(g, 2, 3).problem, PermutationMatrix(q)), 1e-9);
  }
}

TEST(Arrange, BeatsRandomOnSmallGrids) {
  double star = 0.0, initial = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ArrangeResult r = arrange(random_colors(4, s), 2, 2, Method::ds_star, {}, s);
    EXPECT_NEAR(r.objective, normalized_arrangement_objective(build_arrangement(random_colors(4, s), 2, 2).problem, r.perm), 1e-12);
    star += r.objective;
    initial += r.initial_objective;
  }
  EXPECT_LE(star, initial);
}

TEST(Arrange, UsuallyOptimalOnTwoByThree) {
  int hits = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix f = random_colors(6, s);
    const ArrangeResult r = arrange(f, 2, 3, Method::ds_star, {}, s);
    const ArrangementProblem p = build_arrangement(f, 2, 3).problem;
    const double best = brute_best(p);
    EXPECT_GE(arrangement_objective(p, r.perm), best - 1e-9);
    hits += arrangement_objective(p, r.perm) <= best + 1e-9;
  }
  std::cout << "[          ] brute-force optimum on " << hits << " / 50 seeds\n";
  EXPECT_GT(hits, 25);
}

TEST(Arrange, InitialAssignmentSeeded) {
  const Matrix f = random_colors(6, 9);
  const ArrangeResult a = arrange(f, 2, 3, Method::ds_plusplus, {}, 4);
  const ArrangeResult b = arrange(f, 2, 3, Method::ds_plusplus, {}, 4);
  EXPECT_EQ(a.initial_perm, b.initial_perm);
  EXPECT_EQ(a.perm, b.perm);
  const Matrix c = random_colors(6, 9);
  EXPECT_EQ(f, c);
  EXPECT_GE(f.minCoeff(), 0.0);
  EXPECT_LT(f.maxCoeff(), 1.0);
}
