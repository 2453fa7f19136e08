#include "dsstar/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace dsstar {

namespace {

double off_diagonal_mean(const Matrix& M) {
  const Eigen::Index n = M.rows();
  if (n < 2) return 0.0;
  return (M.sum() - M.trace()) / static_cast<double>(n * (n - 1));
}

Matrix pairwise_distances(const Matrix& points) {
  const Eigen::Index n = points.rows();
  Matrix D = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) D(a, b) = D(b, a) = (points.row(a) - points.row(b)).norm();
  return D;
}

}  // namespace

Arrangement build_arrangement(const Matrix& features, int rows, int cols) {
  const int n = static_cast<int>(features.rows());
  if (rows < 1 || cols < 1 || rows * cols != n) throw std::invalid_argument("arrangement: rows * cols must equal the item count");
  if (!features.allFinite()) throw std::invalid_argument("arrangement: non-finite feature");

  ArrangementProblem prob;
  prob.features = features;
  prob.rows = rows;
  prob.cols = cols;
  prob.d = pairwise_distances(features);
  Matrix grid(n, 2);
  for (int j = 0; j < n; ++j) {
    grid(j, 0) = j / cols;
    grid(j, 1) = j % cols;
  }
  prob.dp = pairwise_distances(grid);
  const double md = off_diagonal_mean(prob.d);
  prob.c_scale = md > 0.0 ? off_diagonal_mean(prob.dp) / md : 1.0;

  const Eigen::Index N = static_cast<Eigen::Index>(n) * n;
  Matrix W(N, N);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index col = vec_index(k, l, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double g = prob.dp(j, l);
        for (Eigen::Index i = 0; i < n; ++i) W(vec_index(i, j, n), col) = std::abs(prob.c_scale * prob.d(i, k) - g);
      }
    }
  Arrangement out{std::move(prob), QapInstance::dense(std::move(W))};
  return out;
}

double arrangement_objective(const ArrangementProblem& prob, const PermutationMatrix& perm) {
  const int n = prob.n();
  if (perm.size() != n) throw std::invalid_argument("arrangement: permutation size mismatch");
  double total = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) total += std::abs(prob.c_scale * prob.d(perm[j], perm[l]) - prob.dp(j, l));
  return total;
}

double normalized_arrangement_objective(const ArrangementProblem& prob, const PermutationMatrix& perm) {
  const int n = prob.n();
  const double scale = static_cast<double>(n) * n * off_diagonal_mean(prob.dp);
  const double raw = arrangement_objective(prob, perm);
  return scale > 0.0 ? raw / scale : raw;
}

ArrangeResult arrange(const Matrix& features, int rows, int cols, Method method, const SolveOptions& options,
                      std::uint64_t seed) {
  const Arrangement a = build_arrangement(features, rows, cols);
  const int n = a.problem.n();
  std::mt19937_64 rng(seed);
  std::vector<int> init(static_cast<std::size_t>(n));
  std::iota(init.begin(), init.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(init[static_cast<std::size_t>(i)], init[rng() % static_cast<std::uint64_t>(i + 1)]);

  ArrangeResult r;
  r.initial_perm = PermutationMatrix(std::move(init));
  r.initial_objective = normalized_arrangement_objective(a.problem, r.initial_perm);
  r.report = solve(a.instance, method, options);
  r.perm = r.report.perm;
  r.objective = normalized_arrangement_objective(a.problem, r.perm);
  return r;
}

Matrix random_colors(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix F(n, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) F(i, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return F;
}

}  // namespace dsstar
