#include "dsstar/frank_wolfe.hpp"
#include "dsstar/lap.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <stdexcept>

using namespace dsstar;

namespace {

// ||x - t||^2 = x^T x - 2 t^T x + t^T t.
class DistanceObjective final : public QuadraticObjective {
 public:
  explicit DistanceObjective(const Matrix& target) : n_(static_cast<int>(target.rows())), t_(oracle::vec_of(target)) {
    b_ = -2.0 * t_;
  }
  int n() const override { return n_; }
  void apply_curvature(const Vector& x, Vector& out) const override { out = x; }
  const Vector& linear() const override { return b_; }
  double constant() const override { return t_.squaredNorm(); }

 private:
  int n_;
  Vector t_, b_;
};

}  // namespace

TEST(Lap, TwoByTwo) {
  Matrix C(2, 2);
  C << 0, 5, 5, 0;
  for (auto m : {LapMethod::hungarian, LapMethod::auction}) {
    const LapResult r = solve_lap(C, m);
    EXPECT_EQ(r.perm, PermutationMatrix::identity(2));
    EXPECT_EQ(r.cost, 0.0);
    EXPECT_EQ(r.method, m);
  }
}

TEST(Lap, ConstantMatrixTieBreak) {
  const Matrix C = Matrix::Constant(5, 5, 2.5);
  const LapResult h = solve_lap(C, LapMethod::hungarian);
  EXPECT_EQ(h.perm, PermutationMatrix::identity(5));
  EXPECT_DOUBLE_EQ(h.cost, 12.5);
  EXPECT_DOUBLE_EQ(solve_lap(C, LapMethod::auction).cost, 12.5);
}

TEST(Lap, CostIsSumOverColumns) {
  std::mt19937_64 rng(1);
  const Matrix C = oracle::random_matrix(9, 9, rng);
  for (auto m : {LapMethod::hungarian, LapMethod::auction}) {
    const LapResult r = solve_lap(C, m);
    double s = 0.0;
    for (int j = 0; j < 9; ++j) s += C(r.perm[j], j);
    EXPECT_NEAR(r.cost, s, 1e-12);
  }
}

TEST(Lap, HungarianMatchesBruteForce) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 7;
    const Matrix C = oracle::random_matrix(n, n, rng);
    EXPECT_NEAR(solve_lap(C, LapMethod::hungarian).cost, oracle::brute_lap(C), 1e-12);
  }
}

TEST(Lap, AuctionMatchesHungarian) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Matrix C = 10.0 * oracle::random_matrix(8, 8, rng);
    EXPECT_NEAR(solve_lap(C, LapMethod::auction).cost, solve_lap(C, LapMethod::hungarian).cost, 1e-7);
  }
}

TEST(Lap, AuctionHandlesIntegerTiesAndLargeRanges) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> small(0, 3);
  for (int t = 0; t < 30; ++t) {
    Matrix C(12, 12);
    for (Eigen::Index i = 0; i < C.size(); ++i) C.data()[i] = small(rng);
    C(0, 0) = 1e6;
    EXPECT_NEAR(solve_lap(C, LapMethod::auction).cost, solve_lap(C, LapMethod::hungarian).cost, 1e-7);
  }
}

TEST(Lap, Errors) {
  EXPECT_THROW(solve_lap(Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix C = Matrix::Zero(3, 3);
  C(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_lap(C, LapMethod::hungarian), std::invalid_argument);
  C(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve_lap(C, LapMethod::auction), std::invalid_argument);
  EXPECT_THROW(lap_method_from_string("simplex"), std::invalid_argument);
  EXPECT_EQ(lap_method_from_string(to_string(LapMethod::auction)), LapMethod::auction);
}

TEST(FrankWolfe, ProjectsOntoInteriorPermutation) {
  const DistanceObjective f(Matrix::Identity(2, 2));
  const FwReport r = fw_minimize(f, DoublyStochasticMatrix::barycenter(2));
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.X.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE(r.gap, 1e-6);
}

TEST(FrankWolfe, LinearObjectiveIsOneLapStep) {
  std::mt19937_64 rng(5);
  const int n = 6;
  const Matrix C = oracle::random_matrix(n, n, rng);
  const QapInstance inst = QapInstance::dense(Matrix::Zero(n * n, n * n), oracle::vec_of(C));
  const ReparamObjective f(inst, DeltaParams::zero(n));
  const FwReport r = fw_minimize(f, DoublyStochasticMatrix::barycenter(n));
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.objective, oracle::brute_lap(C), 1e-12);
  EXPECT_NEAR(r.dual_bound, oracle::brute_lap(C), 1e-12);
}

TEST(FrankWolfe, ConvexMinimumBelowEveryPermutation) {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 5; ++n) {
    const auto prob = oracle::random_problem(n, rng);
    // Convexify with a uniform diagonal shift.
    const double lam = oracle::symmetric_eigenvalues(prob.W)(0);
    const QapInstance inst = QapInstance::dense(prob.W, prob.c);
    const DeltaParams delta(lam * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(n * n));
    FwOptions opt;
    opt.tol = 1e-9;
    opt.max_iter = 5000;
    const FwReport r = fw_minimize(ReparamObjective(inst, delta), DoublyStochasticMatrix::barycenter(n), opt);
    for (const auto& p : oracle::all_permutations(n)) {
      const double fp = oracle::index_energy(prob.W, prob.c, oracle::perm_matrix(p));
      EXPECT_LE(r.dual_bound, fp + 1e-9);
      EXPECT_LE(r.objective, fp + 1e-6);
    }
    EXPECT_LE(r.dual_bound, r.objective + 1e-12);
  }
}

TEST(FrankWolfe, ConvexTraceIsMonotoneAndFeasible) {
  std::mt19937_64 rng(7);
  const int n = 7;
  const auto prob = oracle::random_problem(n, rng);
  const double lam = oracle::symmetric_eigenvalues(prob.W)(0);
  const QapInstance inst = QapInstance::dense(prob.W, prob.c);
  const DeltaParams delta(lam * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(n * n));
  FwOptions opt;
  opt.record_trace = true;
  const FwReport r = fw_minimize(ReparamObjective(inst, delta), DoublyStochasticMatrix::barycenter(n), opt);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t t = 1; t < r.trace.size(); ++t) EXPECT_LE(r.trace[t], r.trace[t - 1] + 1e-12);
  EXPECT_LE(r.max_marginal_violation, 1e-9);
}

TEST(FrankWolfe, ConcaveObjectiveEndsAtVertex) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const int n = 6;
    const auto prob = oracle::random_problem(n, rng);
    const double lam = oracle::symmetric_eigenvalues(prob.W).maxCoeff();
    const QapInstance inst = QapInstance::dense(prob.W, prob.c);
    const DeltaParams delta(lam * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(n * n));
    const FwReport r = fw_minimize(ReparamObjective(inst, delta), random_doubly_stochastic(n, rng));
    EXPECT_TRUE(r.X.as_permutation(1e-9).has_value());
  }
}

TEST(FrankWolfe, IterationCapHonoured) {
  std::mt19937_64 rng(9);
  const int n = 8;
  const auto prob = oracle::random_problem(n, rng);
  const double lam = oracle::symmetric_eigenvalues(prob.W)(0);
  const QapInstance inst = QapInstance::dense(prob.W, prob.c);
  const DeltaParams delta(lam * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(n * n));
  FwOptions opt;
  opt.tol = 0.0;
  opt.max_iter = 4;
  const FwReport r = fw_minimize(ReparamObjective(inst, delta), DoublyStochasticMatrix::barycenter(n), opt);
  EXPECT_LE(r.iterations, 4);
  EXPECT_FALSE(r.converged);
}

TEST(FrankWolfe, StartDimensionMismatchThrows) {
  const QapInstance inst = QapInstance::dense(Matrix::Zero(9, 9), Vector::Zero(9));
  EXPECT_THROW(fw_minimize(ReparamObjective(inst, DeltaParams::zero(3)), DoublyStochasticMatrix::barycenter(4)),
               std::invalid_argument);
  EXPECT_THROW(ReparamObjective(inst, DeltaParams::zero(4)), std::invalid_argument);
}

// Property: exact line search never increases a convex objective, from any
// random interior start, both LAP back ends.
TEST(SolverProperty, MonotoneFromRandomStarts) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 5;
    const auto prob = oracle::random_problem(n, rng);
    const double lam = oracle::symmetric_eigenvalues(prob.W)(0);
    const QapInstance inst = QapInstance::dense(prob.W, prob.c);
    const ReparamObjective f(inst, DeltaParams(lam * Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(n * n)));
    for (auto lap : {LapMethod::auction, LapMethod::hungarian}) {
      FwOptions opt;
      opt.lap = lap;
      opt.record_trace = true;
      const DoublyStochasticMatrix X0 = random_doubly_stochastic(n, rng);
      const FwReport r = fw_minimize(f, X0, opt);
      double prev = f.value(X0.to_vec());
      for (double v : r.trace) {
        EXPECT_LE(v, prev + 1e-12);
        prev = v;
      }
      EXPECT_LE(r.max_marginal_violation, 1e-9);
    }
  }
}
